use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("r={r} and s={s} are not coprime")]
    NotCoprime { r: u32, s: u32 },
    #[error("expected {expected} coefficients, got {got}")]
    BadArity { expected: usize, got: usize },
    #[error("r must be smaller than s and at least 2")]
    BadDegrees,
    #[error("f(x) has a repeated root (discriminant {0:e})")]
    SingularCurve(f64),
    #[error("only r in {{2,3}} is supported here")]
    UnsupportedR,
    #[error("curve family not supported: need (2,2g+1) or (3,4)")]
    UnsupportedFamily,
    #[error("x = {0} is a branch point")]
    BranchPoint(String),
    #[error("root finding did not converge")]
    RootFindingFailure,
    #[error("analytic continuation step collapsed")]
    ContinuationStepCollapse,
    #[error("intersection matrix is not unimodular/reducible: {0}")]
    ReductionFailure(String),
    #[error("imaginary part of tau is not positive definite")]
    NonPositiveTau,
    #[error("generalized Legendre relation violated: residual {0:e}")]
    LegendreViolation(f64),
    #[error("no characteristic survived the theta-divisor test")]
    NoneFound,
    #[error("{0} characteristics survived the theta-divisor test")]
    AmbiguousCharacteristic(usize),
    #[error("normalization coefficient below noise floor ({0:e})")]
    NormalizationUnstable(f64),
    #[error("point lies on the theta divisor (|sigma| = {0:e})")]
    OnThetaDivisor(f64),
    #[error("degenerate configuration: {0}")]
    DegenerateConfiguration(String),
    #[error("root multiplicity could not be resolved")]
    RootMultiplicityUnresolved,
    #[error("trivialization one-form vanishes at the point")]
    TrivializationZero,
    #[error("path passes through a branch point")]
    PathThroughBranchPoint,
    #[error("slope regression inconclusive: {0}")]
    InconclusiveSlope(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
