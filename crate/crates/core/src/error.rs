use thiserror::Error;

/// Errors raised by the geometric operations of this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid isometry: {0}")]
    InvalidIsometry(String),
    #[error("invalid cone angle {0}: must be finite and non-negative")]
    InvalidConeAngle(f64),
    #[error("metric undefined on the singular line (r = 0)")]
    SingularPoint,
    #[error("parameter out of range: {0}")]
    OutOfRange(String),
    #[error("invalid region: {0}")]
    InvalidRegion(String),
    #[error("invalid curve: {0}")]
    InvalidCurve(String),
    #[error("malformed BTZ decomposition: singular samples are not a prefix (first regular at {first_regular}, later singular at {late_singular})")]
    MalformedDecomposition { first_regular: usize, late_singular: usize },
    #[error("degenerate measure: estimated {side} measure is zero")]
    DegenerateMeasure { side: &'static str },
    #[error("unsupported ambient: {0}")]
    Unsupported(String),
    #[error("certification failed: {0}")]
    CertificationFailure(String),
    #[error("boundary trace mismatch: max deviation {deviation:e} exceeds {tolerance:e}")]
    BoundaryMismatch { deviation: f64, tolerance: f64 },
    #[error("chart cannot gain a BTZ line: {0}")]
    NotBtzExtendable(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("invalid chart: {0}")]
    InvalidChart(String),
    #[error("gluing mismatch on {pairing}: residual {residual:e}")]
    GluingMismatch { pairing: String, residual: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
