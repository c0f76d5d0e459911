//! Exact derivation-based differential calculus for finite-dimensional
//! associative algebras.
//!
//! Everything is computed over cyclotomic fields Q(zeta_m) with exact
//! arithmetic: derivations, Hochschild cohomology and its relative and
//! constrained variants, derivation-based differential forms with the
//! Koszul differential and Cartan operations, the submanifold and quotient
//! manifold predicates, connections on central bimodules, and rewriting in
//! free algebras for finitely presented quotients.

pub mod algebra;
pub mod bimodule;
pub mod connection;
pub mod derivation;
pub mod error;
pub mod forms;
pub mod freealg;
pub mod geometry;
pub mod hochschild;
pub mod matrix;
pub mod samples;
pub mod scalar;
pub mod subspace;

pub use error::{Error, Result};
pub use matrix::{ExactMatrix, RrefBuilder, Vector};
pub use scalar::Cyclotomic;
pub use subspace::Subspace;
