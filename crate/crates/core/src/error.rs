use thiserror::Error;

pub type Result<T, E = QError> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QError {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("grid index {k} outside [{k_min}, {k_max}]")]
    Range { k: i64, k_min: i64, k_max: i64 },

    #[error("evaluation error: {0}")]
    Evaluation(String),

    #[error("divergence: {0}")]
    Divergence(String),

    #[error("pole: {0}")]
    Pole(String),

    #[error("singular product: factor {factor:e} vanishes at j = {j}")]
    Singularity { j: i64, factor: f64 },

    #[error("near-singular pivot {pivot:e} at k = {k} (lambda = {lambda})")]
    NearSingularPivot { k: i64, lambda: String, pivot: f64 },

    #[error("ill-conditioned: {0}")]
    Conditioning(String),

    #[error("hypothesis not satisfied: {0}")]
    Hypothesis(String),

    #[error("value leaves the binary64 range: {0}")]
    Overflow(String),

    #[error("i/o: {0}")]
    Io(String),
}

impl From<std::io::Error> for QError {
    fn from(e: std::io::Error) -> Self {
        QError::Io(e.to_string())
    }
}

impl From<csv::Error> for QError {
    fn from(e: csv::Error) -> Self {
        QError::Io(e.to_string())
    }
}
