use thiserror::Error;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum Error {
    #[error("invalid tower: {0}")]
    InvalidTower(&'static str),
    #[error("division by zero")]
    DivisionByZero,
    #[error("element is not in the base field E0")]
    NotInBase,
    #[error("embedding index {index} out of range 1..={count}")]
    EmbeddingOutOfRange { index: usize, count: usize },
    #[error("zero input")]
    ZeroInput,
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("cannot add an E-linear and a conjugate-linear operator")]
    LinearityMismatch,
    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("half-dimension {n} unsupported (must be 1..={max})")]
    UnsupportedDimension { n: usize, max: usize },
    #[error("operator mixes even and odd degrees")]
    ParityMixing,
    #[error("n must be even, got {n}")]
    OddDimension { n: usize },
    #[error("forms are not compatible: a_{index}·a_(n+{index}) differs from a_1·a_(n+1)")]
    NotCompatible { index: usize },
    #[error("coefficient a_{index} must be a nonzero element of E0")]
    BadCoefficient { index: usize },
    #[error("delta must be nonzero")]
    ZeroDelta,
    #[error("parameter out of range: {0}")]
    ParameterRange(&'static str),
    #[error("matrix is not in so(W, b)")]
    NotInSoAlgebra,
    #[error("norm oracle returned a witness whose norm is not the queried value")]
    BadWitness,
}
