//! Error type shared by all modules.

use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("convolution sum is not guaranteed to converge for these representations")]
    NonSummable,
    #[error("polynomials are not coprime (resultant is zero)")]
    NotCoprime,
    #[error("resultant is not a unit: |delta| = {0}")]
    NotUnimodular(String),
    #[error("polynomial has a root on the unit circle (or too close to decide)")]
    NotHyperbolic,
    #[error("a root disk straddles the unit-circle tolerance band; retry with higher precision")]
    Indeterminate,
    #[error("could not certify root disks at the requested precision")]
    RootIsolationFailure,
    #[error("constant coefficient must be +-1 after shift normalization, got {0}")]
    UnsupportedConstantTerm(String),
    #[error("backward branch {branch} out of range (must be < {count})")]
    BranchOutOfRange { branch: u64, count: u64 },
    #[error("sequence does not satisfy the torus recursion: coding value {0} is not an integer")]
    NotAnOrbit(String),
    #[error("eigenvalue pairing requires simple roots")]
    RepeatedRoots,
    #[error("continued fraction of a rational has no period")]
    RationalInput,
    #[error("D must not be a perfect square")]
    SquareD,
    #[error("negative discriminant (complex quadratic roots) is not supported")]
    NegativeDiscriminant,
    #[error("operation is only defined for degree-2 polynomials in normal form, got degree {0}")]
    UnsupportedDegree(usize),
    #[error("window too short: convolution leaves no determined index")]
    WindowTooShort,
    #[error("window is inconsistent with the recursion at index {0}")]
    InconsistentWindow(i64),
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
