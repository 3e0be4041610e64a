use thiserror::Error;

/// Errors raised anywhere in the pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("arity {arity} is smaller than the partition length {length}")]
    InsufficientArity { arity: usize, length: usize },
    #[error("genus must be at least {min}, got {got}")]
    GenusTooSmall { min: usize, got: usize },
    #[error("odd power-sum expansion violated: {0}")]
    NotOddPowerSums(String),

    #[error("polynomial degree {0} is not odd")]
    EvenDegree(usize),
    #[error("polynomial is not monic (leading coefficient {0})")]
    NonMonic(String),
    #[error("roots are not separated: min distance {min_dist:e} below {eps:e}")]
    NotSeparable { min_dist: f64, eps: f64 },
    #[error("root finder did not converge: {0}")]
    RootFinder(String),
    #[error("invalid curve input: {0}")]
    CurveInput(String),
    #[error("invalid root ordering: {0}")]
    Ordering(String),
    #[error("path passes through branch point {index} (distance {dist:e})")]
    PathThroughBranchPoint { index: usize, dist: f64 },

    #[error("quadrature did not converge: {0}")]
    Quadrature(String),
    #[error("period matrix failed validation: {0}")]
    BadPeriods(String),
    #[error("point is not on the curve: residual {0:e}")]
    NotOnCurve(f64),

    #[error("theta enumeration radius overflow: {0}")]
    RadiusOverflow(String),
    #[error("tolerance {tol:e} unreachable at working precision")]
    ToleranceUnreachable { tol: f64 },
    #[error("precision of {0} bits is not supported (this build evaluates in binary64)")]
    UnsupportedPrecision(u32),
    #[error("theta constant vanishes: {0}")]
    VanishingTheta(String),
    #[error("no unique vanishing characteristic: {0}")]
    RiemannCharacteristic(String),

    #[error("point must not be a Weierstrass point")]
    WeierstrassPoint,
    #[error("limit did not converge: {0}")]
    Limit(String),
    #[error("integration budget exhausted after {evals} evaluations (error estimate {err:e})")]
    Budget { evals: usize, err: f64 },

    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
