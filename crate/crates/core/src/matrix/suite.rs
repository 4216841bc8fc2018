//! The numerical verification suite: a battery of checks exercising the
//! exponential calculus, product formulas, commutator subspaces, and
//! subgroup predicates on one block algebra with one block ideal.

use super::groups::{self, random_unitary};
use super::lie;
use super::subspace;
use super::{AlgebraElement, BlockIdeal, FiniteDimAlgebra, MatrixError, UnitaryElement};
use crate::rng::SplitMix64;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use num_complex::Complex;

/// One named check with its outcome.
#[derive(Clone, Debug)]
pub struct SuiteCheck {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for SuiteCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {}: {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.detail
        )
    }
}

/// Outcome of the whole suite.
#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub checks: Vec<SuiteCheck>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Random self-adjoint element with operator norm exactly `norm` (Gaussian
/// Hermitian blocks, rescaled).
pub fn random_self_adjoint(
    algebra: &FiniteDimAlgebra,
    rng: &mut SplitMix64,
    norm: f64,
) -> AlgebraElement {
    let raw = AlgebraElement::from_blocks(
        algebra
            .block_dims()
            .iter()
            .map(|&n| super::CMat::from_fn(n, n, |_, _| rng.complex_gaussian()))
            .collect(),
    )
    .symmetrized();
    let cur = raw.op_norm();
    if cur == 0.0 {
        raw
    } else {
        raw.scale(Complex::new(norm / cur, 0.0))
    }
}

/// Random self-adjoint element supported on the ideal blocks.
pub fn random_self_adjoint_in(
    algebra: &FiniteDimAlgebra,
    ideal: &BlockIdeal,
    rng: &mut SplitMix64,
    norm: f64,
) -> AlgebraElement {
    let mut e = random_self_adjoint(algebra, rng, norm);
    for (i, b) in e.blocks.iter_mut().enumerate() {
        if !ideal.contains(i) {
            b.fill(Complex::new(0.0, 0.0));
        }
    }
    e
}

fn check(name: &'static str, passed: bool, detail: String) -> SuiteCheck {
    SuiteCheck { name, passed, detail }
}

/// Runs every check. `draws` controls the number of random draws for the
/// statistical checks; `seed` fixes the whole run.
pub fn run_suite(
    algebra: &FiniteDimAlgebra,
    ideal: &BlockIdeal,
    draws: usize,
    seed: u64,
) -> Result<SuiteReport, MatrixError> {
    let mut checks = Vec::new();
    let mut rng = SplitMix64::new(seed);

    // exp/log round trip
    {
        let mut worst = 0.0f64;
        for _ in 0..draws {
            let a = random_self_adjoint(algebra, &mut rng, 1.0);
            let u = lie::exp_element(algebra, &a)?;
            let back = lie::log_unitary(algebra, &u)?;
            worst = worst.max(back.distance(&a));
        }
        checks.push(check(
            "exp-log-round-trip",
            worst <= 1e-8,
            alloc::format!("max defect {worst:.3e} over {draws} draws (bound 1e-8)"),
        ));
    }

    // Trotter: exactness on commuting inputs, halving ratio otherwise
    {
        let a = random_self_adjoint(algebra, &mut rng, 0.9);
        let b2 = a.mul(&a); // commutes with a
        let b2 = {
            let n = b2.op_norm();
            if n > 0.0 { b2.scale(Complex::new(0.8 / n, 0.0)) } else { b2 }
        };
        let (_, err) = lie::trotter(algebra, &a, &b2, 7)?;
        checks.push(check(
            "trotter-commuting-exact",
            err <= 1e-10,
            alloc::format!("error {err:.3e} on commuting inputs (bound 1e-10)"),
        ));

        let mut worst_ratio = 0.0f64;
        let mut detail = String::new();
        for _ in 0..draws.min(20) {
            let a = random_self_adjoint(algebra, &mut rng, 1.0);
            let b = random_self_adjoint(algebra, &mut rng, 1.0);
            for n in [8u64, 16, 32, 64] {
                let (_, e1) = lie::trotter(algebra, &a, &b, n)?;
                let (_, e2) = lie::trotter(algebra, &a, &b, 2 * n)?;
                if e1 <= 1e-12 {
                    continue; // effectively commuting draw
                }
                let ratio = e2 / e1;
                if ratio > worst_ratio {
                    worst_ratio = ratio;
                    detail = alloc::format!("worst error(2n)/error(n) = {ratio:.4} at n = {n}");
                }
            }
        }
        checks.push(check(
            "trotter-halving-ratio",
            worst_ratio <= 0.75,
            alloc::format!("{detail} (bound 0.75)"),
        ));
    }

    // commutator formula: decreasing error, and membership in CU_I for
    // ideal-supported first argument
    {
        let mut ok = true;
        let mut detail = String::new();
        for _ in 0..draws.min(10) {
            let a = random_self_adjoint(algebra, &mut rng, 1.0);
            let b = random_self_adjoint(algebra, &mut rng, 1.0);
            let mut last = f64::INFINITY;
            let mut seq = Vec::new();
            for n in [4u64, 8, 16, 32] {
                let (_, err) = lie::commutator_formula(algebra, &a, &b, n)?;
                seq.push(err);
                if err >= last && last > 1e-12 {
                    ok = false;
                    detail = alloc::format!("non-decreasing errors {seq:?}");
                }
                last = err;
            }
        }
        if ok {
            detail = String::from("error strictly decreasing over n in {4, 8, 16, 32}");
        }
        checks.push(check("commutator-formula-convergence", ok, detail));

        let a = random_self_adjoint_in(algebra, ideal, &mut rng, 1.0);
        let b = random_self_adjoint(algebra, &mut rng, 1.0);
        let (u, _) = lie::commutator_formula(algebra, &a, &b, 8)?;
        let member = groups::in_cu(algebra, ideal, &u, 1e-8)?;
        checks.push(check(
            "commutator-formula-lands-in-cu",
            member,
            String::from("ideal-supported commutator products pass the CU membership test"),
        ));
    }

    // BCH: order-8 residual at norm 0.1 + hard error outside the window
    {
        let mut worst = 0.0f64;
        for _ in 0..draws.min(10) {
            let a = random_self_adjoint(algebra, &mut rng, 0.1);
            let b = random_self_adjoint(algebra, &mut rng, 0.1);
            let z = lie::bch_truncated(algebra, &a, &b, 8)?;
            let lhs = lie::exp_element(algebra, &z)?;
            let rhs = lie::exp_element(algebra, &a)?.mul(&lie::exp_element(algebra, &b)?);
            worst = worst.max(lhs.distance(&rhs));
        }
        checks.push(check(
            "bch-order8-residual",
            worst <= 1e-6,
            alloc::format!("max residual {worst:.3e} at ‖a‖=‖b‖=0.1 (bound 1e-6)"),
        ));
        let a = random_self_adjoint(algebra, &mut rng, 0.2);
        let b = random_self_adjoint(algebra, &mut rng, 0.2);
        let outside = lie::bch_truncated(algebra, &a, &b, 4);
        checks.push(check(
            "bch-window-enforced",
            matches!(outside, Err(MatrixError::BchWindow { .. })),
            String::from("‖a‖+‖b‖ ≥ ½·log 2 is rejected"),
        ));
    }

    // commutator subspace dimensions, two routes
    {
        let result = subspace::commutator_subspace(algebra, ideal);
        let expected: usize = algebra
            .block_dims()
            .iter()
            .enumerate()
            .filter(|&(i, _)| ideal.contains(i))
            .map(|(_, &n)| n * n - 1)
            .sum();
        match result {
            Ok(sub) => checks.push(check(
                "commutator-subspace-dimension",
                sub.dimension == expected,
                alloc::format!(
                    "analytic {} = numeric {} = expected {expected}",
                    sub.analytic_dimension,
                    sub.numeric_dimension
                ),
            )),
            Err(e) => checks.push(check(
                "commutator-subspace-dimension",
                false,
                alloc::format!("{e}"),
            )),
        }
    }

    // Lie-ideal identity
    {
        let ok = subspace::check_liecom(algebra, ideal)?;
        checks.push(check(
            "liecom-identity",
            ok,
            String::from("span[A,A] ∩ I = span[I,I] within the rank cutoff"),
        ));
    }

    // determinant-of-commutator invariance
    {
        let full = BlockIdeal::full(algebra);
        let mut ok = true;
        for _ in 0..draws.min(25) {
            let v = random_unitary(algebra, &mut rng);
            let w = random_unitary(algebra, &mut rng);
            if !groups::in_cu(algebra, &full, &v.group_commutator(&w), 1e-9)? {
                ok = false;
            }
        }
        checks.push(check(
            "det-of-commutator",
            ok,
            String::from("group commutators pass CU membership at tol 1e-9"),
        ));
    }

    // U/CU signature: unitaries factor as SU part times scalar phase
    {
        let mut ok = true;
        let mut worst = 0.0f64;
        for (i, &n) in algebra.block_dims().iter().enumerate() {
            let single = FiniteDimAlgebra::new(alloc::vec![n])?;
            let sfull = BlockIdeal::full(&single);
            for _ in 0..draws.min(10) {
                let u = random_unitary(&single, &mut rng);
                let det = u.blocks()[0].determinant();
                let phase = Complex::from_polar(1.0, -det.arg() / n as f64);
                let su = UnitaryElement::new(u.element().scale(phase))?;
                if !groups::in_cu(&single, &sfull, &su, 1e-9)? {
                    ok = false;
                    worst = worst.max((su.blocks()[0].determinant() - Complex::new(1.0, 0.0)).norm());
                }
            }
            let _ = i;
        }
        checks.push(check(
            "u-mod-cu-signature",
            ok,
            String::from("every unitary factors as SU part times a scalar phase"),
        ));
        let _ = worst;
    }

    // center identity
    {
        let report = groups::center_report(algebra, ideal);
        checks.push(check(
            "center-identity",
            report.identity_holds,
            alloc::format!(
                "Z(CU_I) = Z(CU_A) ∩ CU_I on block factors {:?}",
                report.z_cu_ideal
            ),
        ));
    }

    // finite-dimensional characters consistency
    {
        let count = groups::finite_dim_characters(algebra, ideal);
        let expected = algebra
            .block_dims()
            .iter()
            .enumerate()
            .filter(|&(i, &n)| ideal.contains(i) && n == 1)
            .count();
        checks.push(check(
            "finite-dim-characters",
            count == expected,
            alloc::format!("{count} dimension-1 ideal blocks"),
        ));
    }

    // sandwich check
    {
        let report = groups::sandwich_check(algebra, ideal, draws.max(1), rng.next_u64())?;
        checks.push(check(
            "sandwich-check",
            report.passed(),
            alloc::format!(
                "{} trials, {} commutator failures, {} conjugation failures, max defects \
                 {:.3e}/{:.3e}",
                report.trials,
                report.commutator_failures.len(),
                report.conjugation_failures.len(),
                report.max_commutator_defect,
                report.max_conjugation_defect
            ),
        ));
    }

    Ok(SuiteReport { checks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::collections::BTreeSet;
    use alloc::vec;

    #[test]
    fn suite_passes_on_mixed_algebra() {
        let alg = FiniteDimAlgebra::new(vec![2, 3]).unwrap();
        let s = BlockIdeal::new(&alg, BTreeSet::from([1])).unwrap();
        let report = run_suite(&alg, &s, 8, 2024).unwrap();
        for c in &report.checks {
            assert!(c.passed, "{c}");
        }
    }
}
