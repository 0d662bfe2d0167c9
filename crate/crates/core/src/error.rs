use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ScrewError {
    #[error("dimension mismatch in {op}: {detail}")]
    Dimension { op: &'static str, detail: String },

    #[error("field mismatch in {op}: {left} vs {right}")]
    FieldMismatch {
        op: &'static str,
        left: crate::algebra::Field,
        right: crate::algebra::Field,
    },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("singular matrix in {0}")]
    Singular(&'static str),

    #[error("matrix of size {size} exceeds the limit {limit} for {op}")]
    Capacity {
        op: &'static str,
        size: usize,
        limit: usize,
    },

    #[error("numerical failure: {0}")]
    Numeric(String),

    #[error("construction failed: {0}")]
    Construction(String),
}

pub type Result<T> = std::result::Result<T, ScrewError>;

pub(crate) fn dim_err(op: &'static str, detail: impl Into<String>) -> ScrewError {
    ScrewError::Dimension {
        op,
        detail: detail.into(),
    }
}
