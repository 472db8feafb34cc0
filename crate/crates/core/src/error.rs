use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("dimension mismatch: {left_what} has dimension {left}, {right_what} has dimension {right}")]
    DimensionMismatch {
        left_what: &'static str,
        left: usize,
        right_what: &'static str,
        right: usize,
    },

    #[error("degenerate polytope: {0}")]
    DegeneratePolytope(String),

    #[error("invalid norm: {0}")]
    InvalidNorm(String),

    #[error("no dual rule for {0}")]
    NoDualRule(String),

    #[error("invalid set: {0}")]
    InvalidSet(String),

    #[error("window {window} exceeds the set's bounding window {bound}")]
    WindowExceeds { window: String, bound: String },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("solver did not converge in {iterations} iterations (gap {gap:.3e}, target {target:.3e})")]
    NotConverged {
        iterations: usize,
        gap: f64,
        target: f64,
    },

    #[error("brute force refused: {cells} free cells exceeds the limit of {limit}")]
    TooManyCells { cells: usize, limit: usize },

    #[error("unknown scenario id `{0}`")]
    UnknownScenario(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn dims(left_what: &'static str, left: usize, right_what: &'static str, right: usize) -> Self {
        Error::DimensionMismatch {
            left_what,
            left,
            right_what,
            right,
        }
    }
}
