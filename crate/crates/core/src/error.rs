use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("Bessel order {0} is below -1/2")]
    BesselOrder(f64),
    #[error("Bessel argument {0} must be finite and nonnegative")]
    BesselArgument(f64),
    #[error("I_{order}({arg}) is infinite")]
    BesselPole { order: f64, arg: f64 },
    #[error("I_{order}({arg}) overflows f64; use log_bessel_i")]
    BesselOverflow { order: f64, arg: f64 },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid domain: {0}")]
    InvalidDomain(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("point {0:?} lies outside the closed domain")]
    OutsideDomain(Vec<f64>),
    #[error("point {0:?} is not in the open domain")]
    NotInDomain(Vec<f64>),
    #[error("direction has norm {0}, expected a unit vector")]
    NotUnitVector(f64),
    #[error("rejection sampler gave up after {0} proposals")]
    RejectionBudget(u64),
    #[error("walker produced a non-finite state at step {0}")]
    NonFiniteState(usize),
    #[error("boundary data is outside the exact-solution vocabulary: {0}")]
    NoExactSolution(String),
    #[error("lattice has no nodes")]
    EmptyGrid,
    #[error("time-stepped simulation exceeded {0} steps")]
    StepBudget(u64),
    #[error("unknown validation suite `{0}`")]
    UnknownSuite(String),
}

pub type Result<T> = std::result::Result<T, Error>;
