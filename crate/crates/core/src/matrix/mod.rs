//! Finite-dimensional engine: direct sums of complex matrix blocks
//! instantiating a diagram level, with spectral calculus, product-formula
//! checks, commutator subspaces, and unitary-subgroup membership predicates.
//!
//! Conventions: the Lie algebra is the set of self-adjoint elements with the
//! exponential `a -> exp(i a)`; the operator norm of a direct sum is the
//! maximum of the largest singular values of its blocks.

mod groups;
mod lie;
mod linalg;
mod subspace;
pub mod suite;

pub use groups::{
    center_report, finite_dim_characters, in_cu, in_n, sandwich_check, CenterFactor,
    CenterReport, SandwichReport,
};
pub use lie::{bch_truncated, commutator_formula, exp_element, log_unitary, trotter};
pub use subspace::{check_liecom, commutator_subspace, SubspaceDescription};

use crate::diagram::BratteliDiagram;
use crate::ideal::IdealSet;
use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use nalgebra::DMatrix;
use num_complex::Complex;

pub type CMat = DMatrix<Complex<f64>>;

/// Tolerance for accepting an element as self-adjoint.
pub const SELF_ADJOINT_TOL: f64 = 1e-12;
/// Tolerance for accepting an element as unitary.
pub const UNITARY_TOL: f64 = 1e-8;
/// Margin keeping the principal logarithm away from the branch cut.
pub const LOG_BRANCH_MARGIN: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq)]
pub enum MatrixError {
    /// Block shapes do not match the algebra.
    ShapeMismatch { expected: Vec<usize>, found: Vec<usize> },
    NotSelfAdjoint { defect: f64 },
    NotUnitary { defect: f64 },
    /// An eigenvalue sits within the branch margin of -1.
    LogBranch { distance: f64 },
    /// `‖a‖ + ‖b‖` outside the convergence window of the series.
    BchWindow { norm_sum: f64, window: f64 },
    BlockOutOfRange { index: usize, blocks: usize },
    LevelTooLarge { level: usize, detail: String },
    /// Two computation routes that must agree did not.
    RouteMismatch(String),
    Diagram(crate::diagram::DiagramError),
}

impl fmt::Display for MatrixError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MatrixError::ShapeMismatch { expected, found } => {
                write!(f, "block shape mismatch: expected {expected:?}, found {found:?}")
            }
            MatrixError::NotSelfAdjoint { defect } => {
                write!(f, "element is not self-adjoint (defect {defect:.3e})")
            }
            MatrixError::NotUnitary { defect } => {
                write!(f, "element is not unitary (defect {defect:.3e})")
            }
            MatrixError::LogBranch { distance } => write!(
                f,
                "unitary spectrum within {distance:.3e} of -1; principal logarithm undefined"
            ),
            MatrixError::BchWindow { norm_sum, window } => write!(
                f,
                "‖a‖ + ‖b‖ = {norm_sum:.4} outside the convergence window {window:.4}"
            ),
            MatrixError::BlockOutOfRange { index, blocks } => {
                write!(f, "block index {index} out of range for {blocks} blocks")
            }
            MatrixError::LevelTooLarge { level, detail } => {
                write!(f, "level {level} too large to instantiate: {detail}")
            }
            MatrixError::RouteMismatch(m) => write!(f, "route disagreement: {m}"),
            MatrixError::Diagram(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for MatrixError {}

/// A direct sum of full matrix algebras `⊕ M_{n_i}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteDimAlgebra {
    block_dims: Vec<usize>,
}

impl FiniteDimAlgebra {
    pub fn new(block_dims: Vec<usize>) -> Result<Self, MatrixError> {
        if block_dims.is_empty() || block_dims.iter().any(|&n| n == 0) {
            return Err(MatrixError::ShapeMismatch { expected: Vec::new(), found: block_dims });
        }
        Ok(FiniteDimAlgebra { block_dims })
    }

    pub fn block_dims(&self) -> &[usize] {
        &self.block_dims
    }

    pub fn num_blocks(&self) -> usize {
        self.block_dims.len()
    }

    /// Dimension of the algebra as a vector space, `Σ n_i²`.
    pub fn vector_dim(&self) -> usize {
        self.block_dims.iter().map(|n| n * n).sum()
    }

    pub fn zero(&self) -> AlgebraElement {
        AlgebraElement {
            blocks: self.block_dims.iter().map(|&n| CMat::zeros(n, n)).collect(),
        }
    }

    pub fn identity(&self) -> AlgebraElement {
        AlgebraElement {
            blocks: self.block_dims.iter().map(|&n| CMat::identity(n, n)).collect(),
        }
    }

    pub fn matches(&self, e: &AlgebraElement) -> bool {
        e.blocks.len() == self.block_dims.len()
            && e.blocks.iter().zip(&self.block_dims).all(|(b, &n)| b.nrows() == n && b.ncols() == n)
    }

    fn check(&self, e: &AlgebraElement) -> Result<(), MatrixError> {
        if self.matches(e) {
            Ok(())
        } else {
            Err(MatrixError::ShapeMismatch {
                expected: self.block_dims.clone(),
                found: e.blocks.iter().map(CMat::nrows).collect(),
            })
        }
    }
}

/// An element of a block algebra.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraElement {
    pub(crate) blocks: Vec<CMat>,
}

impl AlgebraElement {
    pub fn from_blocks(blocks: Vec<CMat>) -> Self {
        AlgebraElement { blocks }
    }

    pub fn blocks(&self) -> &[CMat] {
        &self.blocks
    }

    pub fn adjoint(&self) -> Self {
        AlgebraElement { blocks: self.blocks.iter().map(CMat::adjoint).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        AlgebraElement {
            blocks: self.blocks.iter().zip(&other.blocks).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        AlgebraElement {
            blocks: self.blocks.iter().zip(&other.blocks).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        AlgebraElement {
            blocks: self.blocks.iter().zip(&other.blocks).map(|(a, b)| a * b).collect(),
        }
    }

    pub fn scale(&self, c: Complex<f64>) -> Self {
        AlgebraElement { blocks: self.blocks.iter().map(|b| b * c).collect() }
    }

    /// `[x, y] = xy - yx`.
    pub fn commutator(&self, other: &Self) -> Self {
        self.mul(other).sub(&other.mul(self))
    }

    /// `i·[x, y]`, self-adjoint whenever `x` and `y` are.
    pub fn i_commutator(&self, other: &Self) -> Self {
        self.commutator(other).scale(Complex::new(0.0, 1.0))
    }

    /// Largest singular value over all blocks (the C*-norm of a direct sum).
    pub fn op_norm(&self) -> f64 {
        self.blocks
            .iter()
            .map(|b| linalg::op_norm(b))
            .fold(0.0, f64::max)
    }

    pub fn self_adjoint_defect(&self) -> f64 {
        self.sub(&self.adjoint()).op_norm()
    }

    pub fn is_self_adjoint(&self, tol: f64) -> bool {
        self.self_adjoint_defect() <= tol
    }

    pub fn unitary_defect(&self) -> f64 {
        self.blocks
            .iter()
            .map(|b| {
                let n = b.nrows();
                linalg::op_norm(&(b * b.adjoint() - CMat::identity(n, n)))
            })
            .fold(0.0, f64::max)
    }

    /// Distance to the other element in operator norm.
    pub fn distance(&self, other: &Self) -> f64 {
        self.sub(other).op_norm()
    }

    /// Replaces each block by its self-adjoint part `(b + b*)/2`.
    pub fn symmetrized(&self) -> Self {
        AlgebraElement {
            blocks: self
                .blocks
                .iter()
                .map(|b| (b + b.adjoint()).map(|z| z * Complex::new(0.5, 0.0)))
                .collect(),
        }
    }
}

/// A unitary element: per-block unitarity within [`UNITARY_TOL`].
#[derive(Clone, Debug, PartialEq)]
pub struct UnitaryElement(AlgebraElement);

impl UnitaryElement {
    pub fn new(e: AlgebraElement) -> Result<Self, MatrixError> {
        Self::with_tol(e, UNITARY_TOL)
    }

    pub fn with_tol(e: AlgebraElement, tol: f64) -> Result<Self, MatrixError> {
        let defect = e.unitary_defect();
        if defect <= tol {
            Ok(UnitaryElement(e))
        } else {
            Err(MatrixError::NotUnitary { defect })
        }
    }

    pub fn element(&self) -> &AlgebraElement {
        &self.0
    }

    pub fn into_element(self) -> AlgebraElement {
        self.0
    }

    pub fn blocks(&self) -> &[CMat] {
        &self.0.blocks
    }

    pub fn adjoint(&self) -> Self {
        UnitaryElement(self.0.adjoint())
    }

    pub fn mul(&self, other: &Self) -> Self {
        UnitaryElement(self.0.mul(&other.0))
    }

    /// Group commutator `u v u* v*`.
    pub fn group_commutator(&self, other: &Self) -> Self {
        self.mul(other).mul(&self.adjoint()).mul(&other.adjoint())
    }

    /// Conjugate `v u v*`.
    pub fn conjugate_by(&self, v: &Self) -> Self {
        v.mul(self).mul(&v.adjoint())
    }

    pub fn distance(&self, other: &Self) -> f64 {
        self.0.distance(&other.0)
    }

    /// Integer power by repeated squaring.
    pub fn pow(&self, mut e: u64) -> Self {
        let algebra = FiniteDimAlgebra {
            block_dims: self.0.blocks.iter().map(CMat::nrows).collect(),
        };
        let mut base = self.clone();
        let mut acc = UnitaryElement(algebra.identity());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }
}

/// A subset of block positions, the finite-level shadow of an ideal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockIdeal {
    indices: BTreeSet<usize>,
    num_blocks: usize,
}

impl BlockIdeal {
    pub fn new(algebra: &FiniteDimAlgebra, indices: BTreeSet<usize>) -> Result<Self, MatrixError> {
        if let Some(&i) = indices.iter().next_back() {
            if i >= algebra.num_blocks() {
                return Err(MatrixError::BlockOutOfRange {
                    index: i,
                    blocks: algebra.num_blocks(),
                });
            }
        }
        Ok(BlockIdeal { indices, num_blocks: algebra.num_blocks() })
    }

    pub fn full(algebra: &FiniteDimAlgebra) -> Self {
        BlockIdeal {
            indices: (0..algebra.num_blocks()).collect(),
            num_blocks: algebra.num_blocks(),
        }
    }

    pub fn empty(algebra: &FiniteDimAlgebra) -> Self {
        BlockIdeal { indices: BTreeSet::new(), num_blocks: algebra.num_blocks() }
    }

    pub fn contains(&self, block: usize) -> bool {
        self.indices.contains(&block)
    }

    pub fn indices(&self) -> &BTreeSet<usize> {
        &self.indices
    }

    pub fn is_full(&self) -> bool {
        self.indices.len() == self.num_blocks
    }
}

/// Instantiates a diagram level as a block algebra together with the
/// level shadow of an ideal set (the full set when absent).
pub fn algebra_at_level(
    d: &BratteliDiagram,
    level: usize,
    s: Option<&IdealSet>,
) -> Result<(FiniteDimAlgebra, BlockIdeal), MatrixError> {
    let dims = d.dims_at(level).map_err(MatrixError::Diagram)?;
    let mut block_dims = Vec::with_capacity(dims.len());
    let mut total = 0usize;
    for &v in &dims {
        let n: usize = v.try_into().map_err(|_| MatrixError::LevelTooLarge {
            level,
            detail: String::from("block dimension exceeds usize"),
        })?;
        total += n * n;
        block_dims.push(n);
    }
    if total > 250_000 {
        return Err(MatrixError::LevelTooLarge {
            level,
            detail: alloc::format!("total vector dimension {total} exceeds the 250000 cap"),
        });
    }
    let algebra = FiniteDimAlgebra::new(block_dims)?;
    let ideal = match s {
        None => BlockIdeal::full(&algebra),
        Some(s) => BlockIdeal::new(&algebra, s.set_at(level).clone())?,
    };
    Ok((algebra, ideal))
}

/// Validates that `a` is self-adjoint within [`SELF_ADJOINT_TOL`] and
/// symmetrizes it for downstream spectral calculus.
pub(crate) fn require_self_adjoint(
    algebra: &FiniteDimAlgebra,
    a: &AlgebraElement,
) -> Result<AlgebraElement, MatrixError> {
    algebra.check(a)?;
    let defect = a.self_adjoint_defect();
    if defect > SELF_ADJOINT_TOL {
        return Err(MatrixError::NotSelfAdjoint { defect });
    }
    Ok(a.symmetrized())
}
