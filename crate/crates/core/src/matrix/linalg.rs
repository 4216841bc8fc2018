//! Dense complex linear algebra helpers: operator norms, Hermitian
//! eigendecomposition, unitary diagonalization via a commuting Hermitian
//! pair, and numerical rank of vector families.

use super::CMat;
use alloc::vec::Vec;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex;

pub fn op_norm(m: &CMat) -> f64 {
    if m.nrows() == 0 {
        return 0.0;
    }
    m.clone().singular_values().iter().copied().fold(0.0, f64::max)
}

/// Eigendecomposition of a Hermitian matrix: real eigenvalues and a unitary
/// matrix of column eigenvectors. The input is symmetrized first.
pub fn eigh(m: &CMat) -> (Vec<f64>, CMat) {
    let h = (m + m.adjoint()).map(|z| z * Complex::new(0.5, 0.0));
    let se = h.symmetric_eigen();
    (se.eigenvalues.iter().copied().collect(), se.eigenvectors)
}

/// Diagonalizes a unitary matrix: returns unimodular eigenvalues and a
/// unitary eigenvector matrix.
///
/// Writes `u = C + iS` with `C = (u+u*)/2` and `S = (u-u*)/2i`, which commute
/// because `u` is normal; diagonalizes `C`, then diagonalizes `S` restricted
/// to each eigenvalue cluster of `C`.
pub fn diagonalize_unitary(u: &CMat) -> (Vec<Complex<f64>>, CMat) {
    let n = u.nrows();
    let c = (u + u.adjoint()).map(|z| z * Complex::new(0.5, 0.0));
    let s = (u - u.adjoint()).map(|z| z * Complex::new(0.0, -0.5));
    let (cvals, mut v) = eigh(&c);
    // order eigenvalues so clusters are contiguous
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| cvals[i].partial_cmp(&cvals[j]).expect("finite eigenvalues"));
    let cvals_sorted: Vec<f64> = order.iter().map(|&i| cvals[i]).collect();
    let mut vs = CMat::zeros(n, n);
    for (new, &old) in order.iter().enumerate() {
        vs.set_column(new, &v.column(old).into_owned());
    }
    v = vs;
    let cluster_tol = 1e-8 * (1.0 + cvals_sorted.iter().fold(0.0f64, |a, &b| a.max(b.abs())));
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && (cvals_sorted[end] - cvals_sorted[end - 1]).abs() <= cluster_tol {
            end += 1;
        }
        if end - start > 1 {
            let vc = v.columns(start, end - start).into_owned();
            let s_block = vc.adjoint() * &s * &vc;
            let (_, w) = eigh(&s_block);
            let rotated = vc * w;
            for (off, col) in (start..end).enumerate() {
                v.set_column(col, &rotated.column(off).into_owned());
            }
        }
        start = end;
    }
    let d = v.adjoint() * u * &v;
    let mut vals = Vec::with_capacity(n);
    for i in 0..n {
        let z = d[(i, i)];
        let r = z.norm();
        vals.push(if r > 0.0 { z / r } else { Complex::new(1.0, 0.0) });
    }
    (vals, v)
}

/// Residual of a claimed diagonalization `u ≈ V diag(vals) V*`.
pub fn diagonalization_residual(u: &CMat, vals: &[Complex<f64>], v: &CMat) -> f64 {
    let d = DMatrix::from_diagonal(&DVector::from_iterator(vals.len(), vals.iter().copied()));
    op_norm(&(v * d * v.adjoint() - u))
}

/// Number of singular values above the cutoff of the matrix whose columns
/// are the given vectors (each normalized first).
pub fn rank_of_span(vectors: &[DVector<Complex<f64>>], dim: usize, cutoff: f64) -> usize {
    let cols: Vec<DVector<Complex<f64>>> = vectors
        .iter()
        .filter(|v| v.norm() > 0.0)
        .map(|v| v / Complex::new(v.norm(), 0.0))
        .collect();
    if cols.is_empty() {
        return 0;
    }
    let m = DMatrix::from_columns(&cols);
    debug_assert_eq!(m.nrows(), dim);
    m.singular_values().iter().filter(|&&s| s > cutoff).count()
}
