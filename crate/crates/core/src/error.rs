//! Error type shared by every module of the library.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero in the scalar field")]
    DivisionByZero,

    #[error("cannot embed Q(zeta_{from}) into Q(zeta_{to}): {from} does not divide {to}")]
    BadEmbedding { from: u64, to: u64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("ambient dimension mismatch: {0} vs {1}")]
    AmbientMismatch(usize, usize),

    #[error("associativity fails at basis triple ({i},{j},{k}): (ei*ej)*ek = [{left}] but ei*(ej*ek) = [{right}]")]
    AssociativityViolation {
        i: usize,
        j: usize,
        k: usize,
        left: String,
        right: String,
    },

    #[error("unit law fails at basis index {0}")]
    UnitViolation(usize),

    #[error("the unit is contained in the ideal; the quotient would be zero")]
    UnitInIdeal,

    #[error("not a two-sided ideal")]
    NotIdeal,

    #[error("not a sub-bimodule: action leaves the subspace")]
    NotSubBimodule,

    #[error("not a unital subalgebra: {0}")]
    NotSubalgebra(String),

    #[error("degree {requested} exceeds the configured cap {cap}")]
    CapExceeded { requested: usize, cap: usize },

    #[error("constraint violated: the ideal is not contained in the annihilator ideal of the sub-bimodule")]
    ConstraintViolation,

    #[error("ideal is not maximal: the coset of basis element {0} generates a proper nonzero ideal of the quotient")]
    NotMaximal(usize),

    #[error("predicate not verified: {0}")]
    PredicateNotVerified(String),

    #[error("invalid splitting: {0}")]
    InvalidSplitting(String),

    #[error("no compatible splitting exists: {0}")]
    SplittingInfeasible(String),

    #[error("action is not equivariant: {0}")]
    NotEquivariant(String),

    #[error("the given derivations do not span a Lie subalgebra")]
    NotLieClosed,

    #[error("curvature does not vanish on the vertical subalgebra")]
    CurvatureObstruction,

    #[error("rewriting step cap {0} exceeded; the system may not terminate on this input")]
    StepCapExceeded(usize),

    #[error("confluence not established: need degree {required}, have {available:?}")]
    ConfluenceNotEstablished {
        required: usize,
        available: Option<usize>,
    },

    #[error("irreducible word count exceeds the cap {0}; the quotient is not known to be finite-dimensional")]
    QuotientNotFinite(usize),

    #[error("duplicate leading word in rewrite system: {0}")]
    DuplicateLeadingWord(String),

    #[error("relation cannot be oriented: {0}")]
    BadOrientation(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("internal invariant breach: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
