//! Exponential calculus and the classical product formulas: Trotter, the
//! group-commutator formula, and the truncated Baker-Campbell-Hausdorff
//! series on its convergence window.

use super::linalg;
use super::{
    require_self_adjoint, AlgebraElement, CMat, FiniteDimAlgebra, MatrixError, UnitaryElement,
    LOG_BRANCH_MARGIN,
};
use alloc::vec::Vec;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex;

/// `exp(i a)` for self-adjoint `a`, per block via eigendecomposition.
pub fn exp_element(
    algebra: &FiniteDimAlgebra,
    a: &AlgebraElement,
) -> Result<UnitaryElement, MatrixError> {
    let a = require_self_adjoint(algebra, a)?;
    let blocks: Vec<CMat> = a
        .blocks
        .iter()
        .map(|b| {
            let (vals, v) = linalg::eigh(b);
            let phases = DVector::from_iterator(
                vals.len(),
                vals.iter().map(|&l| Complex::new(0.0, l).exp()),
            );
            &v * DMatrix::from_diagonal(&phases) * v.adjoint()
        })
        .collect();
    UnitaryElement::with_tol(AlgebraElement { blocks }, 1e-10)
}

/// Principal logarithm: the self-adjoint `a` with `exp(i a) = u` and
/// per-block `‖a‖ <= π`. Errors when the spectrum touches the branch cut
/// at -1 within [`LOG_BRANCH_MARGIN`].
pub fn log_unitary(
    algebra: &FiniteDimAlgebra,
    u: &UnitaryElement,
) -> Result<AlgebraElement, MatrixError> {
    algebra.check(u.element())?;
    let mut blocks = Vec::with_capacity(u.blocks().len());
    for b in u.blocks() {
        let (vals, v) = linalg::diagonalize_unitary(b);
        let residual = linalg::diagonalization_residual(b, &vals, &v);
        if residual > 1e-8 {
            return Err(MatrixError::RouteMismatch(alloc::format!(
                "unitary diagonalization residual {residual:.3e}"
            )));
        }
        for &l in &vals {
            let distance = (l + Complex::new(1.0, 0.0)).norm();
            if distance <= LOG_BRANCH_MARGIN {
                return Err(MatrixError::LogBranch { distance });
            }
        }
        let angles = DVector::from_iterator(
            vals.len(),
            vals.iter().map(|l| Complex::new(l.arg(), 0.0)),
        );
        let log = &v * DMatrix::from_diagonal(&angles) * v.adjoint();
        blocks.push((&log + log.adjoint()).map(|z| z * Complex::new(0.5, 0.0)));
    }
    Ok(AlgebraElement { blocks })
}

/// `(exp(i a/n) exp(i b/n))^n` together with its operator-norm distance from
/// `exp(i (a + b))`.
pub fn trotter(
    algebra: &FiniteDimAlgebra,
    a: &AlgebraElement,
    b: &AlgebraElement,
    n: u64,
) -> Result<(UnitaryElement, f64), MatrixError> {
    assert!(n >= 1, "trotter requires n >= 1");
    let inv = Complex::new(1.0 / n as f64, 0.0);
    let ua = exp_element(algebra, &a.scale(inv))?;
    let ub = exp_element(algebra, &b.scale(inv))?;
    let step = ua.mul(&ub);
    let product = step.pow(n);
    let target = exp_element(algebra, &a.add(b))?;
    let err = product.distance(&target);
    Ok((product, err))
}

/// `(exp(i a/n) exp(i b/n) exp(-i a/n) exp(-i b/n))^{n²}` together with its
/// distance from the bracket target.
///
/// With the self-adjoint convention `x -> exp(i x)` the Lie bracket is
/// `i[a,b]`, so the limit of the displayed product is
/// `exp(i · i[a,b]) = exp(-[a,b])`; that is the target used for the reported
/// error.
pub fn commutator_formula(
    algebra: &FiniteDimAlgebra,
    a: &AlgebraElement,
    b: &AlgebraElement,
    n: u64,
) -> Result<(UnitaryElement, f64), MatrixError> {
    assert!(n >= 1, "commutator formula requires n >= 1");
    let inv = Complex::new(1.0 / n as f64, 0.0);
    let ua = exp_element(algebra, &a.scale(inv))?;
    let ub = exp_element(algebra, &b.scale(inv))?;
    let step = ua.group_commutator(&ub);
    let product = step.pow(n * n);
    let target = exp_element(algebra, &a.i_commutator(b))?;
    let err = product.distance(&target);
    Ok((product, err))
}

/// Half the convergence window `½·log 2` of the series.
pub const BCH_WINDOW: f64 = core::f64::consts::LN_2 / 2.0;

/// One term of the Dynkin expansion: a word in two letters and its rational
/// coefficient. The letter sequence is bracketed right-nested.
struct DynkinTerm {
    word: Vec<bool>, // true = first argument, false = second
    coeff: f64,
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// Enumerates all Dynkin terms of total degree at most `max_order`.
fn dynkin_terms(max_order: usize) -> Vec<DynkinTerm> {
    let mut terms = Vec::new();
    // blocks[(p_i, q_i)] with p_i + q_i >= 1; recursion over block lists
    fn recurse(
        blocks: &mut Vec<(usize, usize)>,
        degree_left: usize,
        max_order: usize,
        terms: &mut Vec<DynkinTerm>,
    ) {
        if !blocks.is_empty() {
            let n = blocks.len();
            let degree: usize = blocks.iter().map(|&(p, q)| p + q).sum();
            let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
            let denom: f64 = blocks.iter().map(|&(p, q)| factorial(p) * factorial(q)).product();
            let coeff = sign / (n as f64) / (degree as f64) / denom;
            let mut word = Vec::with_capacity(degree);
            for &(p, q) in blocks.iter() {
                word.extend(core::iter::repeat(true).take(p));
                word.extend(core::iter::repeat(false).take(q));
            }
            // right-nested bracket of a word ending in a repeated letter
            // vanishes identically
            let redundant = word.len() >= 2
                && word[word.len() - 1] == word[word.len() - 2];
            if !redundant {
                terms.push(DynkinTerm { word, coeff });
            }
        }
        if degree_left == 0 {
            return;
        }
        for total in 1..=degree_left {
            for p in 0..=total {
                blocks.push((p, total - p));
                recurse(blocks, degree_left - total, max_order, terms);
                blocks.pop();
            }
        }
    }
    let mut blocks = Vec::new();
    recurse(&mut blocks, max_order, max_order, &mut terms);
    terms
}

/// Right-nested bracket `[w_1, [w_2, [... [w_{m-1}, w_m]]]]` of a word.
fn nested_bracket(word: &[bool], x: &CMat, y: &CMat) -> CMat {
    let pick = |letter: bool| if letter { x } else { y };
    let mut acc = pick(word[word.len() - 1]).clone();
    for &letter in word[..word.len() - 1].iter().rev() {
        let l = pick(letter);
        acc = l * &acc - &acc * l;
    }
    acc
}

/// Truncation of the Baker-Campbell-Hausdorff series through nested brackets
/// of total degree `order`, in the self-adjoint convention: returns the
/// self-adjoint `z` with `exp(i z) ≈ exp(i a)·exp(i b)`.
///
/// Requires `‖a‖ + ‖b‖ < ½·log 2`, the window on which the full series
/// converges.
pub fn bch_truncated(
    algebra: &FiniteDimAlgebra,
    a: &AlgebraElement,
    b: &AlgebraElement,
    order: usize,
) -> Result<AlgebraElement, MatrixError> {
    assert!(order >= 1 && order <= 8, "supported orders are 1..=8");
    let a = require_self_adjoint(algebra, a)?;
    let b = require_self_adjoint(algebra, b)?;
    let norm_sum = a.op_norm() + b.op_norm();
    if norm_sum >= BCH_WINDOW {
        return Err(MatrixError::BchWindow { norm_sum, window: BCH_WINDOW });
    }
    let terms = dynkin_terms(order);
    let i = Complex::new(0.0, 1.0);
    let mut blocks = Vec::with_capacity(a.blocks.len());
    for (ba, bb) in a.blocks.iter().zip(&b.blocks) {
        let x = ba * i;
        let y = bb * i;
        let mut z = CMat::zeros(ba.nrows(), ba.ncols());
        for t in &terms {
            z += nested_bracket(&t.word, &x, &y) * Complex::new(t.coeff, 0.0);
        }
        // z is skew-adjoint; return the self-adjoint z/i
        let sa = z * Complex::new(0.0, -1.0);
        blocks.push((&sa + sa.adjoint()).map(|w| w * Complex::new(0.5, 0.0)));
    }
    Ok(AlgebraElement { blocks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::FiniteDimAlgebra;
    use crate::rng::SplitMix64;

    fn m2() -> FiniteDimAlgebra {
        FiniteDimAlgebra::new(alloc::vec![2]).unwrap()
    }

    fn elem2(entries: [[Complex<f64>; 2]; 2]) -> AlgebraElement {
        AlgebraElement::from_blocks(alloc::vec![CMat::from_row_slice(
            2,
            2,
            &[entries[0][0], entries[0][1], entries[1][0], entries[1][1]],
        )])
    }

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn exp_of_zero_is_identity() {
        let alg = m2();
        let u = exp_element(&alg, &alg.zero()).unwrap();
        assert!(u.element().distance(&alg.identity()) <= 1e-14);
    }

    #[test]
    fn exp_of_diag_pi() {
        let alg = m2();
        let a = elem2([[c(core::f64::consts::PI, 0.0), c(0.0, 0.0)], [
            c(0.0, 0.0),
            c(-core::f64::consts::PI, 0.0),
        ]]);
        let u = exp_element(&alg, &a).unwrap();
        let minus_one = alg.identity().scale(c(-1.0, 0.0));
        assert!(u.element().distance(&minus_one) <= 1e-10);
    }

    #[test]
    fn exp_of_pi_projection_is_reflection() {
        let alg = m2();
        let p = elem2([[c(core::f64::consts::PI, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(0.0, 0.0)]]);
        let u = exp_element(&alg, &p).unwrap();
        let expected = elem2([[c(-1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]]);
        assert!(u.element().distance(&expected) <= 1e-10);
    }

    #[test]
    fn log_of_identity_is_zero() {
        let alg = m2();
        let u = UnitaryElement::new(alg.identity()).unwrap();
        let a = log_unitary(&alg, &u).unwrap();
        assert!(a.op_norm() <= 1e-12);
    }

    #[test]
    fn exp_log_round_trip() {
        let alg = FiniteDimAlgebra::new(alloc::vec![2, 3]).unwrap();
        let mut rng = SplitMix64::new(11);
        for _ in 0..20 {
            let a = crate::matrix::suite::random_self_adjoint(&alg, &mut rng, 1.0);
            let u = exp_element(&alg, &a).unwrap();
            let back = log_unitary(&alg, &u).unwrap();
            assert!(back.distance(&a) <= 1e-8, "round trip defect {}", back.distance(&a));
            assert!(back.op_norm() <= core::f64::consts::PI + 1e-12);
        }
    }

    #[test]
    fn log_branch_error_at_minus_one() {
        let alg = m2();
        let u = UnitaryElement::new(alg.identity().scale(c(-1.0, 0.0))).unwrap();
        assert!(matches!(log_unitary(&alg, &u), Err(MatrixError::LogBranch { .. })));
    }

    #[test]
    fn trotter_exact_for_commuting() {
        let alg = m2();
        let a = elem2([[c(0.7, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(-0.2, 0.0)]]);
        let b = elem2([[c(-0.3, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(0.9, 0.0)]]);
        for n in [1u64, 4, 16] {
            let (_, err) = trotter(&alg, &a, &b, n).unwrap();
            assert!(err <= 1e-10, "n = {n}: {err}");
        }
    }

    #[test]
    fn commutator_formula_identity_for_commuting() {
        let alg = m2();
        let a = elem2([[c(0.7, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(-0.2, 0.0)]]);
        let b = elem2([[c(-0.3, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(0.9, 0.0)]]);
        let (u, err) = commutator_formula(&alg, &a, &b, 8).unwrap();
        assert!(err <= 1e-10);
        assert!(u.element().distance(&alg.identity()) <= 1e-10);
    }

    #[test]
    fn commutator_formula_error_decreases_for_paulis() {
        let alg = m2();
        let sx = elem2([[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]]);
        let sy = elem2([[c(0.0, 0.0), c(0.0, -1.0)], [c(0.0, 1.0), c(0.0, 0.0)]]);
        let mut last = f64::INFINITY;
        for n in [4u64, 8, 16, 32] {
            let (_, err) = commutator_formula(&alg, &sx, &sy, n).unwrap();
            assert!(err < last, "error must decrease: {err} !< {last}");
            last = err;
        }
    }

    #[test]
    fn bch_low_orders_match_hand_values() {
        let alg = m2();
        let a = elem2([[c(0.05, 0.0), c(0.02, 0.01)], [c(0.02, -0.01), c(-0.03, 0.0)]]);
        let b = elem2([[c(-0.02, 0.0), c(0.0, 0.03)], [c(0.0, -0.03), c(0.06, 0.0)]]);
        // order 1: a + b
        let z1 = bch_truncated(&alg, &a, &b, 1).unwrap();
        assert!(z1.distance(&a.add(&b)) <= 1e-14);
        // order 2: a + b + (i/2)[a,b]
        let z2 = bch_truncated(&alg, &a, &b, 2).unwrap();
        let hand = a.add(&b).add(&a.i_commutator(&b).scale(c(0.5, 0.0)));
        assert!(z2.distance(&hand) <= 1e-14, "defect {}", z2.distance(&hand));
    }

    #[test]
    fn bch_b_zero_gives_a() {
        let alg = m2();
        let a = elem2([[c(0.1, 0.0), c(0.0, 0.05)], [c(0.0, -0.05), c(-0.1, 0.0)]]);
        let z = bch_truncated(&alg, &a, &alg.zero(), 8).unwrap();
        assert!(z.distance(&a) <= 1e-14);
    }

    #[test]
    fn bch_window_is_enforced() {
        let alg = m2();
        let a = elem2([[c(0.3, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(-0.3, 0.0)]]);
        let b = elem2([[c(0.0, 0.0), c(0.2, 0.0)], [c(0.2, 0.0), c(0.0, 0.0)]]);
        assert!(matches!(
            bch_truncated(&alg, &a, &b, 4),
            Err(MatrixError::BchWindow { .. })
        ));
    }

    #[test]
    fn bch_order8_matches_spectral_log() {
        let alg = FiniteDimAlgebra::new(alloc::vec![3]).unwrap();
        let mut rng = SplitMix64::new(3);
        for _ in 0..5 {
            let a = crate::matrix::suite::random_self_adjoint(&alg, &mut rng, 0.1);
            let b = crate::matrix::suite::random_self_adjoint(&alg, &mut rng, 0.1);
            let z = bch_truncated(&alg, &a, &b, 8).unwrap();
            let product = exp_element(&alg, &a).unwrap().mul(&exp_element(&alg, &b).unwrap());
            let z_log = log_unitary(&alg, &product).unwrap();
            assert!(z.distance(&z_log) <= 1e-6, "defect {}", z.distance(&z_log));
        }
    }
}
