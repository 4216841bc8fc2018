//! Ideal lattices of unital AF algebras presented by Bratteli diagrams, and a
//! finite-dimensional numerical engine for the associated unitary-group
//! structure.
//!
//! The crate has three layers:
//!
//! * [`diagram`] — the data model: leveled multigraphs with vertex dimensions
//!   and edge multiplicities, finite truncations and eventually-periodic
//!   presentations, and their validity invariants.
//! * [`ideal`] and [`analysis`] — directed/hereditary vertex subsets (the
//!   combinatorial shadows of closed two-sided ideals), least-fixed-point
//!   closure, character detection, perfectness, ideal enumeration, and the
//!   normal-subgroup correspondence.
//! * [`matrix`] — direct sums of complex matrix blocks instantiating a
//!   diagram level, with exponential/logarithm via spectral calculus,
//!   product-formula checks, commutator subspaces, and subgroup membership
//!   predicates.
//!
//! The crate is `no_std`-compatible (requires `alloc`); the companion CLI
//! crate carries file formats and IO.

#![cfg_attr(not(feature = "std"), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod analysis;
pub mod corpus;
pub mod diagram;
pub mod ideal;
pub mod matrix;
pub mod rng;
pub mod testgen;

pub use diagram::{BratteliDiagram, Edge, PeriodicTail, ValidationReport, VertexId, Violation};
pub use ideal::{ClosureError, ClosureOptions, IdealSet, LevelSet};
