use thiserror::Error;

/// Errors produced by the library.
///
/// Input problems (`Parse`, `Length`, `NotMonotone`, `Interlacing`, `Bound`)
/// map to exit code 1 in the CLI; everything else indicates a failed
/// computation or an internal inconsistency.
#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot parse rational {text:?}: {reason}")]
    Parse { text: String, reason: &'static str },

    #[error("length mismatch: lambda has {lambda} entries, mu has {mu} (expected lambda = mu + 1, mu >= 1)")]
    Length { lambda: usize, mu: usize },

    #[error("{name} is not non-increasing at position {index}: {left} < {right}")]
    NotMonotone {
        name: &'static str,
        index: usize,
        left: String,
        right: String,
    },

    #[error("interlacing inequality {inequality} violated: {left} < {right}")]
    Interlacing {
        inequality: String,
        left: String,
        right: String,
    },

    #[error("{0} is not an entry of mu")]
    NotALabel(String),

    #[error("mu = {0} labels an M-shape; C is undefined there")]
    MShapeLabel(String),

    #[error("n = {n} exceeds the enumeration bound {max}")]
    Bound { n: usize, max: usize },

    #[error("matrix of order {0} is not Hermitian")]
    NotHermitian(usize),

    #[error("matrix order {0} too small (need at least 2)")]
    OrderTooSmall(usize),

    #[error("no parallelogram labels: nothing to check")]
    EmptyCheck,

    #[error("{0} did not converge within {1} sweeps")]
    NoConvergence(&'static str, usize),

    #[error("invalid unlabelled pattern: {0}")]
    InvalidPattern(String),

    #[error("internal consistency failure: {0}")]
    Internal(String),

    #[error("invalid input: {0}")]
    Input(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for errors caused by bad user input rather than a failed check.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Parse { .. }
                | Error::Length { .. }
                | Error::NotMonotone { .. }
                | Error::Interlacing { .. }
                | Error::NotALabel(_)
                | Error::Bound { .. }
                | Error::InvalidPattern(_)
                | Error::Input(_)
                | Error::Io(_)
                | Error::Json(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
