//! Commutator subspaces: the span of `[x, y]` over an ideal, computed both
//! analytically (per-block traceless matrices) and numerically (span of
//! matrix-unit commutators), with rank agreement enforced.

use super::linalg::rank_of_span;
use super::{AlgebraElement, BlockIdeal, FiniteDimAlgebra, MatrixError};
use alloc::vec::Vec;
use nalgebra::DVector;
use num_complex::Complex;

/// Singular-value cutoff used for every rank decision here.
pub const RANK_CUTOFF: f64 = 1e-9;

/// A commutator subspace with its two independently computed dimensions.
#[derive(Clone, Debug)]
pub struct SubspaceDescription {
    pub dimension: usize,
    pub analytic_dimension: usize,
    pub numeric_dimension: usize,
    /// Analytic basis: per-block traceless matrices supported on the ideal.
    pub basis: Vec<AlgebraElement>,
}

fn vectorize(algebra: &FiniteDimAlgebra, e: &AlgebraElement) -> DVector<Complex<f64>> {
    let dim = algebra.vector_dim();
    let mut out = DVector::zeros(dim);
    let mut off = 0;
    for b in &e.blocks {
        for j in 0..b.ncols() {
            for i in 0..b.nrows() {
                out[off] = b[(i, j)];
                off += 1;
            }
        }
    }
    debug_assert_eq!(off, dim);
    out
}

fn unit(algebra: &FiniteDimAlgebra, block: usize, i: usize, j: usize) -> AlgebraElement {
    let mut e = algebra.zero();
    e.blocks[block][(i, j)] = Complex::new(1.0, 0.0);
    e
}

/// Analytic basis of `closure [I, I]`: for each ideal block of dimension n,
/// the off-diagonal matrix units and the n-1 diagonal differences.
fn traceless_basis(algebra: &FiniteDimAlgebra, ideal: &BlockIdeal) -> Vec<AlgebraElement> {
    let mut basis = Vec::new();
    for (block, &n) in algebra.block_dims().iter().enumerate() {
        if !ideal.contains(block) {
            continue;
        }
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    basis.push(unit(algebra, block, i, j));
                }
            }
        }
        for i in 0..n.saturating_sub(1) {
            let mut e = algebra.zero();
            e.blocks[block][(i, i)] = Complex::new(1.0, 0.0);
            e.blocks[block][(i + 1, i + 1)] = Complex::new(-1.0, 0.0);
            basis.push(e);
        }
    }
    basis
}

/// Numeric generating family: all nonzero commutators of matrix units
/// supported on the ideal blocks.
fn commutator_family(algebra: &FiniteDimAlgebra, ideal: &BlockIdeal) -> Vec<AlgebraElement> {
    let mut family = Vec::new();
    for (block, &n) in algebra.block_dims().iter().enumerate() {
        if !ideal.contains(block) {
            continue;
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        // [E_ab, E_cd] is nonzero only when b == c or d == a
                        if b != c && d != a {
                            continue;
                        }
                        let x = unit(algebra, block, a, b);
                        let y = unit(algebra, block, c, d);
                        let com = x.commutator(&y);
                        if com.op_norm() > 0.0 {
                            family.push(com);
                        }
                    }
                }
            }
        }
    }
    family
}

/// Basis of `closure [I, I]` for the ideal blocks `S`, computed analytically
/// and numerically; the two ranks must agree.
pub fn commutator_subspace(
    algebra: &FiniteDimAlgebra,
    ideal: &BlockIdeal,
) -> Result<SubspaceDescription, MatrixError> {
    let dim = algebra.vector_dim();
    let basis = traceless_basis(algebra, ideal);
    let analytic_vecs: Vec<DVector<Complex<f64>>> =
        basis.iter().map(|e| vectorize(algebra, e)).collect();
    let analytic_dimension = rank_of_span(&analytic_vecs, dim, RANK_CUTOFF);
    let numeric_vecs: Vec<DVector<Complex<f64>>> = commutator_family(algebra, ideal)
        .iter()
        .map(|e| vectorize(algebra, e))
        .collect();
    let numeric_dimension = rank_of_span(&numeric_vecs, dim, RANK_CUTOFF);
    // the two spans must not only have equal rank but coincide
    let mut union = analytic_vecs.clone();
    union.extend(numeric_vecs.iter().cloned());
    let union_rank = rank_of_span(&union, dim, RANK_CUTOFF);
    if analytic_dimension != numeric_dimension || union_rank != analytic_dimension {
        return Err(MatrixError::RouteMismatch(alloc::format!(
            "commutator subspace: analytic rank {analytic_dimension}, numeric rank \
             {numeric_dimension}, union rank {union_rank}"
        )));
    }
    Ok(SubspaceDescription {
        dimension: analytic_dimension,
        analytic_dimension,
        numeric_dimension,
        basis,
    })
}

/// Numerically verifies `span[A,A] ∩ I = span[I,I]` for the given block
/// ideal: computes both sides as numeric subspaces and compares.
pub fn check_liecom(algebra: &FiniteDimAlgebra, ideal: &BlockIdeal) -> Result<bool, MatrixError> {
    let dim = algebra.vector_dim();
    let full = BlockIdeal::full(algebra);
    // span [A,A] from matrix-unit commutators over all blocks
    let aa: Vec<DVector<Complex<f64>>> = commutator_family(algebra, &full)
        .iter()
        .map(|e| vectorize(algebra, e))
        .collect();
    // I as a subspace: matrix units supported on ideal blocks
    let mut i_basis = Vec::new();
    for (block, &n) in algebra.block_dims().iter().enumerate() {
        if !ideal.contains(block) {
            continue;
        }
        for i in 0..n {
            for j in 0..n {
                i_basis.push(vectorize(algebra, &unit(algebra, block, i, j)));
            }
        }
    }
    let r_aa = rank_of_span(&aa, dim, RANK_CUTOFF);
    let r_i = rank_of_span(&i_basis, dim, RANK_CUTOFF);
    let mut both = aa.clone();
    both.extend(i_basis.iter().cloned());
    let r_union = rank_of_span(&both, dim, RANK_CUTOFF);
    let intersection_dim = r_aa + r_i - r_union;
    // span [I,I]
    let ii: Vec<DVector<Complex<f64>>> = commutator_family(algebra, ideal)
        .iter()
        .map(|e| vectorize(algebra, e))
        .collect();
    let r_ii = rank_of_span(&ii, dim, RANK_CUTOFF);
    // [I,I] is contained in both [A,A] and I; with matching dimension the
    // intersection equals it
    let mut aa_ii = aa;
    aa_ii.extend(ii.iter().cloned());
    let contained_in_aa = rank_of_span(&aa_ii, dim, RANK_CUTOFF) == r_aa;
    let mut i_ii = i_basis;
    i_ii.extend(ii.iter().cloned());
    let contained_in_i = rank_of_span(&i_ii, dim, RANK_CUTOFF) == r_i || r_i == 0;
    Ok(contained_in_aa && contained_in_i && intersection_dim == r_ii)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::collections::BTreeSet;
    use alloc::vec;

    #[test]
    fn full_single_block_dimension() {
        let alg = FiniteDimAlgebra::new(vec![3]).unwrap();
        let s = BlockIdeal::full(&alg);
        let sub = commutator_subspace(&alg, &s).unwrap();
        assert_eq!(sub.dimension, 8); // n² - 1
    }

    #[test]
    fn mixed_blocks_dimension() {
        let alg = FiniteDimAlgebra::new(vec![1, 2]).unwrap();
        let s = BlockIdeal::full(&alg);
        let sub = commutator_subspace(&alg, &s).unwrap();
        assert_eq!(sub.dimension, 0 + 3);
    }

    #[test]
    fn empty_ideal_gives_zero_subspace() {
        let alg = FiniteDimAlgebra::new(vec![2, 2]).unwrap();
        let s = BlockIdeal::empty(&alg);
        let sub = commutator_subspace(&alg, &s).unwrap();
        assert_eq!(sub.dimension, 0);
    }

    #[test]
    fn liecom_holds_on_examples() {
        let alg = FiniteDimAlgebra::new(vec![2, 3]).unwrap();
        let s1 = BlockIdeal::new(&alg, BTreeSet::from([1])).unwrap();
        assert!(check_liecom(&alg, &s1).unwrap());
        assert!(check_liecom(&alg, &BlockIdeal::empty(&alg)).unwrap());
        assert!(check_liecom(&alg, &BlockIdeal::full(&alg)).unwrap());
    }

    #[test]
    fn cuntz_pedersen_dimension_at_finite_level() {
        // dim [A,A] = Σ n_i² − (number of blocks): the common kernel of the
        // block traces
        let alg = FiniteDimAlgebra::new(vec![1, 2, 3]).unwrap();
        let sub = commutator_subspace(&alg, &BlockIdeal::full(&alg)).unwrap();
        assert_eq!(sub.dimension, alg.vector_dim() - alg.num_blocks());
    }
}
