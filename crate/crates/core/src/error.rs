use thiserror::Error;

/// Errors raised across the crate.
///
/// Variants split into two families: [`TqftError::is_user_error`] is true for
/// malformed input and guard violations, false for internal invariant
/// failures detected after a computation.
#[derive(Debug, Error)]
pub enum TqftError {
    #[error("unknown preset `{0}`")]
    UnknownPreset(String),

    #[error("group order {order} exceeds the configured cap {cap}")]
    OrderCap { order: usize, cap: usize },

    #[error("invalid Cayley table: {0}")]
    InvalidTable(String),

    #[error("index {index} out of range for size {size}")]
    OutOfRange { index: usize, size: usize },

    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),

    #[error("arity mismatch at slice {slice}: previous slice emits {emitted} circles, slice consumes {consumed}")]
    ArityMismatch {
        slice: usize,
        emitted: usize,
        consumed: usize,
    },

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("size guard exceeded: {0}")]
    Guard(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid triangulation: {0}")]
    Triangulation(String),

    #[error("invalid input: {0}")]
    Input(String),

    #[error("eigenspace separation failed after {attempts} attempts (min gap {gap:.3e})")]
    Diagonalization { attempts: usize, gap: f64 },

    #[error("invariant `{name}` violated: {detail}")]
    Invariant { name: &'static str, detail: String },
}

impl TqftError {
    pub fn invariant(name: &'static str, detail: impl Into<String>) -> Self {
        TqftError::Invariant {
            name,
            detail: detail.into(),
        }
    }

    /// True for errors caused by the caller's input rather than by a failed
    /// internal consistency check.
    pub fn is_user_error(&self) -> bool {
        !matches!(
            self,
            TqftError::Invariant { .. } | TqftError::Diagonalization { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, TqftError>;
