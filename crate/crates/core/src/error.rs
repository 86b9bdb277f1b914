use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("degree overflow: {left} + {right} exceeds 7")]
    DegreeOverflow { left: usize, right: usize },

    #[error("degree mismatch: expected {expected}, got {found}")]
    DegreeMismatch { expected: usize, found: usize },

    #[error("invalid degree {0} for this operation")]
    InvalidDegree(usize),

    #[error("expected {expected} coefficients, got {found}")]
    CoefficientCount { expected: usize, found: usize },

    #[error("index {0} out of range for a 7-dimensional space")]
    IndexOutOfRange(usize),

    #[error("singular or non-positive metric")]
    SingularMetric,

    #[error("not a positive G2 3-form: {0}")]
    NotPositive(String),

    #[error("no symmetric preimage: Omega^3_7 component has norm {0:e}")]
    NoSymmetricPreimage(f64),

    #[error("resolution too small for stencil along axis {axis}: {len} points")]
    ResolutionTooSmall { axis: usize, len: usize },

    #[error("indefinite metric at grid point {0:?}")]
    IndefiniteMetric([usize; 7]),

    #[error("non-positive 3-form at grid point {point:?}: {reason}")]
    NonPositiveAt { point: [usize; 7], reason: String },

    #[error("valence mismatch: {0}")]
    ValenceMismatch(String),

    #[error("chart mismatch between fields")]
    ChartMismatch,

    #[error("invalid chart: {0}")]
    InvalidChart(String),

    #[error("invalid pinching parameters: k1 = {k1}, k2 = {k2}")]
    InvalidPinching { k1: f64, k2: f64 },

    #[error("no geodesic bound implied: k1/k2 = {0} is at or below the pinching threshold")]
    NoGeodesicBound(f64),

    #[error("negative radius {0}")]
    NegativeRadius(f64),

    #[error("root bracketing failed: {0}")]
    Bracket(String),

    #[error("unknown report format {0:?}")]
    UnknownFormat(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("snapshot format error: {0}")]
    Snapshot(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
