//! Membership predicates for the distinguished subgroups of the unitary
//! group of a block algebra, the center descriptions, and the randomized
//! sandwich check.
//!
//! At finite dimension the commutator subgroup of `U_I` is the product of
//! the special unitary groups of the ideal blocks (identity elsewhere), and
//! `N_I` consists of unitaries that are scalar on every block outside the
//! ideal.

use super::linalg;
use super::{AlgebraElement, BlockIdeal, CMat, FiniteDimAlgebra, MatrixError, UnitaryElement};
use crate::rng::SplitMix64;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use num_complex::Complex;

/// `u ∈ CU_I`: determinant 1 on every ideal block, identity elsewhere
/// (within `tol`).
pub fn in_cu(
    algebra: &FiniteDimAlgebra,
    ideal: &BlockIdeal,
    u: &UnitaryElement,
    tol: f64,
) -> Result<bool, MatrixError> {
    if !algebra.matches(u.element()) {
        return Err(MatrixError::ShapeMismatch {
            expected: algebra.block_dims().to_vec(),
            found: u.blocks().iter().map(CMat::nrows).collect(),
        });
    }
    for (i, b) in u.blocks().iter().enumerate() {
        if ideal.contains(i) {
            let det = b.determinant();
            if (det - Complex::new(1.0, 0.0)).norm() > tol {
                return Ok(false);
            }
        } else {
            let n = b.nrows();
            if linalg::op_norm(&(b - CMat::identity(n, n))) > tol {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `u ∈ N_I`: scalar on every block outside the ideal (within `tol`); ideal
/// blocks are unconstrained.
pub fn in_n(
    algebra: &FiniteDimAlgebra,
    ideal: &BlockIdeal,
    u: &UnitaryElement,
    tol: f64,
) -> Result<bool, MatrixError> {
    if !algebra.matches(u.element()) {
        return Err(MatrixError::ShapeMismatch {
            expected: algebra.block_dims().to_vec(),
            found: u.blocks().iter().map(CMat::nrows).collect(),
        });
    }
    for (i, b) in u.blocks().iter().enumerate() {
        if ideal.contains(i) {
            continue;
        }
        let n = b.nrows();
        let mean = b.trace() / Complex::new(n as f64, 0.0);
        if linalg::op_norm(&(b - CMat::identity(n, n) * mean)) > tol {
            return Ok(false);
        }
    }
    Ok(true)
}

/// One factor of a center description.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CenterFactor {
    /// Only the identity.
    Trivial,
    /// The n-th roots of unity times the identity.
    RootsOfUnity(usize),
    /// The full scalar circle.
    Circle,
}

impl fmt::Display for CenterFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CenterFactor::Trivial => write!(f, "1"),
            CenterFactor::RootsOfUnity(n) => write!(f, "mu_{n}"),
            CenterFactor::Circle => write!(f, "T"),
        }
    }
}

/// Structural description of the centers `Z(CU_I)`, `Z(CU_A)`, `Z(U_A)` and
/// the verification of `Z(CU_I) = Z(CU_A) ∩ CU_I`.
#[derive(Clone, Debug)]
pub struct CenterReport {
    /// Per block: the factor of `Z(CU_I)`.
    pub z_cu_ideal: Vec<CenterFactor>,
    /// Per block: the factor of `Z(CU_A)`.
    pub z_cu_full: Vec<CenterFactor>,
    /// Per block: the factor of `Z(U_A)` (always the scalar circle).
    pub z_u_full: Vec<CenterFactor>,
    /// Per block: the factor of `Z(CU_A) ∩ CU_I`.
    pub intersection: Vec<CenterFactor>,
    /// `Z(CU_I) == Z(CU_A) ∩ CU_I`, factor by factor.
    pub identity_holds: bool,
    /// Defects from the numeric spot checks (root-of-unity scalars must pass
    /// the membership predicate).
    pub spot_check_failures: Vec<String>,
}

/// Describes the centers and verifies the center identity set-theoretically
/// on the descriptions, with numeric spot checks of representative elements.
pub fn center_report(algebra: &FiniteDimAlgebra, ideal: &BlockIdeal) -> CenterReport {
    let dims = algebra.block_dims();
    let factor_cu = |in_ideal: bool, n: usize| -> CenterFactor {
        if in_ideal && n >= 2 {
            CenterFactor::RootsOfUnity(n)
        } else {
            CenterFactor::Trivial
        }
    };
    let z_cu_ideal: Vec<CenterFactor> =
        dims.iter().enumerate().map(|(i, &n)| factor_cu(ideal.contains(i), n)).collect();
    let z_cu_full: Vec<CenterFactor> =
        dims.iter().map(|&n| factor_cu(true, n)).collect();
    let z_u_full: Vec<CenterFactor> = dims.iter().map(|_| CenterFactor::Circle).collect();
    // Z(CU_A) ∩ CU_I: inside the ideal the factor is unchanged; outside, CU_I
    // forces the identity.
    let intersection: Vec<CenterFactor> = z_cu_full
        .iter()
        .enumerate()
        .map(|(i, &f)| if ideal.contains(i) { f } else { CenterFactor::Trivial })
        .collect();
    let identity_holds = z_cu_ideal == intersection;
    let mut spot_check_failures = Vec::new();
    for (i, &n) in dims.iter().enumerate() {
        if !ideal.contains(i) || n < 2 {
            continue;
        }
        // ω·1 on block i for ω a primitive n-th root of unity is central in
        // CU_I and must pass the membership predicate
        let mut e = algebra.identity();
        let omega = Complex::from_polar(1.0, 2.0 * core::f64::consts::PI / n as f64);
        e.blocks[i] = CMat::identity(n, n) * omega;
        let u = UnitaryElement::new(e).expect("scalars are unitary");
        match in_cu(algebra, ideal, &u, 1e-9) {
            Ok(true) => {}
            _ => spot_check_failures.push(alloc::format!(
                "root-of-unity scalar on block {i} failed the CU membership check"
            )),
        }
        // a generic phase is central in U but not in CU
        let mut e = algebra.identity();
        e.blocks[i] = CMat::identity(n, n) * Complex::from_polar(1.0, 0.3);
        let u = UnitaryElement::new(e).expect("scalars are unitary");
        if let Ok(true) = in_cu(algebra, ideal, &u, 1e-9) {
            spot_check_failures.push(alloc::format!(
                "non-root phase on block {i} passed the CU membership check"
            ));
        }
    }
    CenterReport {
        z_cu_ideal,
        z_cu_full,
        z_u_full,
        intersection,
        identity_holds: identity_holds && spot_check_failures.is_empty(),
        spot_check_failures,
    }
}

/// Number of characters of the subalgebra carried by the ideal blocks: the
/// count of dimension-1 ideal blocks.
pub fn finite_dim_characters(algebra: &FiniteDimAlgebra, ideal: &BlockIdeal) -> usize {
    algebra
        .block_dims()
        .iter()
        .enumerate()
        .filter(|&(i, &n)| ideal.contains(i) && n == 1)
        .count()
}

/// Haar-distributed unitary on one block: QR of a complex Gaussian matrix
/// with the R-diagonal phases normalized away.
fn haar_block(n: usize, rng: &mut SplitMix64) -> CMat {
    let g = CMat::from_fn(n, n, |_, _| rng.complex_gaussian());
    let qr = g.qr();
    let q = qr.q();
    let r = qr.r();
    let mut u = q;
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex::new(1.0, 0.0) };
        let col = u.column(j) * phase;
        u.set_column(j, &col);
    }
    u
}

/// Haar-like unitary in `U_A` (all blocks random).
pub fn random_unitary(algebra: &FiniteDimAlgebra, rng: &mut SplitMix64) -> UnitaryElement {
    let blocks = algebra.block_dims().iter().map(|&n| haar_block(n, rng)).collect();
    UnitaryElement::new(AlgebraElement { blocks }).expect("QR output is unitary")
}

/// Random element of `CU_I`: special unitary on ideal blocks, identity
/// elsewhere.
pub fn random_cu(
    algebra: &FiniteDimAlgebra,
    ideal: &BlockIdeal,
    rng: &mut SplitMix64,
) -> UnitaryElement {
    let blocks = algebra
        .block_dims()
        .iter()
        .enumerate()
        .map(|(i, &n)| {
            if !ideal.contains(i) {
                return CMat::identity(n, n);
            }
            let u = haar_block(n, rng);
            let det = u.determinant();
            // divide out an n-th root of the determinant phase
            let phase = Complex::from_polar(1.0, -det.arg() / n as f64);
            u * phase
        })
        .collect();
    UnitaryElement::new(AlgebraElement { blocks }).expect("normalized Haar block is unitary")
}

/// Random element of `N_I`: Haar on ideal blocks, scalar phases elsewhere.
pub fn random_n(
    algebra: &FiniteDimAlgebra,
    ideal: &BlockIdeal,
    rng: &mut SplitMix64,
) -> UnitaryElement {
    let blocks = algebra
        .block_dims()
        .iter()
        .enumerate()
        .map(|(i, &n)| {
            if ideal.contains(i) {
                haar_block(n, rng)
            } else {
                CMat::identity(n, n)
                    * Complex::from_polar(1.0, 2.0 * core::f64::consts::PI * rng.uniform())
            }
        })
        .collect();
    UnitaryElement::new(AlgebraElement { blocks }).expect("blocks are unitary")
}

/// Outcome of the randomized sandwich check.
#[derive(Clone, Debug)]
pub struct SandwichReport {
    pub trials: usize,
    /// Trials where `(u, v)` with `u ∈ N_I`, `v ∈ U_A` failed the CU
    /// membership test.
    pub commutator_failures: Vec<usize>,
    /// Trials where a conjugate of a CU element failed the CU membership
    /// test.
    pub conjugation_failures: Vec<usize>,
    pub max_commutator_defect: f64,
    pub max_conjugation_defect: f64,
}

impl SandwichReport {
    pub fn passed(&self) -> bool {
        self.commutator_failures.is_empty() && self.conjugation_failures.is_empty()
    }
}

/// For random `u ∈ N_I` and `v ∈ U_A`, the group commutator `(u, v)` must
/// pass the CU membership test; for random `w ∈ CU_I` the conjugates
/// `v w v*` must too. Tolerance 1e-8.
pub fn sandwich_check(
    algebra: &FiniteDimAlgebra,
    ideal: &BlockIdeal,
    trials: usize,
    seed: u64,
) -> Result<SandwichReport, MatrixError> {
    assert!(trials >= 1, "sandwich_check requires at least one trial");
    let tol = 1e-8;
    let mut rng = SplitMix64::new(seed);
    let mut report = SandwichReport {
        trials,
        commutator_failures: Vec::new(),
        conjugation_failures: Vec::new(),
        max_commutator_defect: 0.0,
        max_conjugation_defect: 0.0,
    };
    for t in 0..trials {
        let u = random_n(algebra, ideal, &mut rng);
        let v = random_unitary(algebra, &mut rng);
        let c = u.group_commutator(&v);
        let defect = cu_defect(algebra, ideal, &c);
        report.max_commutator_defect = report.max_commutator_defect.max(defect);
        if !in_cu(algebra, ideal, &c, tol)? {
            report.commutator_failures.push(t);
        }
        let w = random_cu(algebra, ideal, &mut rng);
        let conj = w.conjugate_by(&v);
        let defect = cu_defect(algebra, ideal, &conj);
        report.max_conjugation_defect = report.max_conjugation_defect.max(defect);
        if !in_cu(algebra, ideal, &conj, tol)? {
            report.conjugation_failures.push(t);
        }
    }
    Ok(report)
}

/// Quantitative distance to the CU membership conditions.
fn cu_defect(algebra: &FiniteDimAlgebra, ideal: &BlockIdeal, u: &UnitaryElement) -> f64 {
    let _ = algebra;
    let mut defect = 0.0f64;
    for (i, b) in u.blocks().iter().enumerate() {
        if ideal.contains(i) {
            defect = defect.max((b.determinant() - Complex::new(1.0, 0.0)).norm());
        } else {
            let n = b.nrows();
            defect = defect.max(linalg::op_norm(&(b - CMat::identity(n, n))));
        }
    }
    defect
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::collections::BTreeSet;
    use alloc::vec;

    #[test]
    fn identity_is_in_every_cu() {
        let alg = FiniteDimAlgebra::new(vec![2, 3]).unwrap();
        let u = UnitaryElement::new(alg.identity()).unwrap();
        for s in [
            BlockIdeal::empty(&alg),
            BlockIdeal::full(&alg),
            BlockIdeal::new(&alg, BTreeSet::from([1])).unwrap(),
        ] {
            assert!(in_cu(&alg, &s, &u, 1e-12).unwrap());
        }
    }

    #[test]
    fn group_commutators_have_det_one() {
        let alg = FiniteDimAlgebra::new(vec![2, 3]).unwrap();
        let s = BlockIdeal::full(&alg);
        let mut rng = SplitMix64::new(9);
        for _ in 0..20 {
            let v = random_unitary(&alg, &mut rng);
            let w = random_unitary(&alg, &mut rng);
            let c = v.group_commutator(&w);
            assert!(in_cu(&alg, &s, &c, 1e-9).unwrap());
        }
    }

    #[test]
    fn phase_fails_cu() {
        let alg = FiniteDimAlgebra::new(vec![2]).unwrap();
        let s = BlockIdeal::full(&alg);
        let mut e = alg.identity();
        e.blocks[0] *= Complex::from_polar(1.0, 0.3);
        let u = UnitaryElement::new(e).unwrap();
        // det = e^{0.6 i} ≠ 1
        assert!(!in_cu(&alg, &s, &u, 1e-6).unwrap());
    }

    #[test]
    fn scalars_are_in_every_n() {
        let alg = FiniteDimAlgebra::new(vec![2, 3]).unwrap();
        let mut e = alg.identity();
        e.blocks[0] *= Complex::from_polar(1.0, 1.1);
        e.blocks[1] *= Complex::from_polar(1.0, -0.4);
        let u = UnitaryElement::new(e).unwrap();
        for s in [
            BlockIdeal::empty(&alg),
            BlockIdeal::full(&alg),
            BlockIdeal::new(&alg, BTreeSet::from([0])).unwrap(),
        ] {
            assert!(in_n(&alg, &s, &u, 1e-9).unwrap());
        }
    }

    #[test]
    fn non_scalar_block_outside_ideal_fails_n() {
        let alg = FiniteDimAlgebra::new(vec![2, 2]).unwrap();
        let s = BlockIdeal::new(&alg, BTreeSet::from([0])).unwrap();
        let mut rng = SplitMix64::new(4);
        let mut u = alg.identity();
        u.blocks[1] = haar_block(2, &mut rng);
        // a Haar block is almost surely not scalar
        let u = UnitaryElement::new(u).unwrap();
        assert!(!in_n(&alg, &s, &u, 1e-6).unwrap());
        // but everything is in N when the ideal is full
        assert!(in_n(&alg, &BlockIdeal::full(&alg), &u, 1e-9).unwrap());
    }

    #[test]
    fn center_identities() {
        let alg = FiniteDimAlgebra::new(vec![2]).unwrap();
        let r = center_report(&alg, &BlockIdeal::full(&alg));
        assert_eq!(r.z_cu_full, vec![CenterFactor::RootsOfUnity(2)]); // {±1}
        assert!(r.identity_holds);

        let alg = FiniteDimAlgebra::new(vec![1]).unwrap();
        let r = center_report(&alg, &BlockIdeal::full(&alg));
        assert_eq!(r.z_cu_full, vec![CenterFactor::Trivial]);
        assert!(r.identity_holds);

        let alg = FiniteDimAlgebra::new(vec![2, 3]).unwrap();
        let s = BlockIdeal::new(&alg, BTreeSet::from([0])).unwrap();
        let r = center_report(&alg, &s);
        assert_eq!(r.z_cu_ideal, vec![CenterFactor::RootsOfUnity(2), CenterFactor::Trivial]);
        assert_eq!(r.z_cu_ideal, r.intersection);
        assert!(r.identity_holds);
    }

    #[test]
    fn character_counts() {
        let alg = FiniteDimAlgebra::new(vec![1, 2, 3]).unwrap();
        assert_eq!(finite_dim_characters(&alg, &BlockIdeal::full(&alg)), 1);
        assert_eq!(finite_dim_characters(&alg, &BlockIdeal::empty(&alg)), 0);
        let alg = FiniteDimAlgebra::new(vec![2, 2]).unwrap();
        assert_eq!(finite_dim_characters(&alg, &BlockIdeal::full(&alg)), 0);
    }

    #[test]
    fn sandwich_small_cases() {
        let alg = FiniteDimAlgebra::new(vec![2, 3]).unwrap();
        let s = BlockIdeal::new(&alg, BTreeSet::from([1])).unwrap();
        let report = sandwich_check(&alg, &s, 50, 1234).unwrap();
        assert!(report.passed(), "{report:?}");
        // empty ideal: commutators of scalars with anything are the identity
        let report = sandwich_check(&alg, &BlockIdeal::empty(&alg), 20, 99).unwrap();
        assert!(report.passed());
    }
}
