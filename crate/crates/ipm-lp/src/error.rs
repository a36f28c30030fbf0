use thiserror::Error;

#[derive(Debug, Error)]
pub enum LpError {
    /// The constraint set is empty; the path-following iteration has no
    /// central path to follow.
    #[error("linear program has no constraints")]
    EmptyProblem,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error(transparent)]
    Kkt(#[from] kkt::KktError),
}
