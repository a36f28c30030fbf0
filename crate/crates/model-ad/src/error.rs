use thiserror::Error;

#[derive(Debug, Error)]
pub enum ModelError {
    /// Evaluation left the operator's domain (log/sqrt of a negative,
    /// division by zero, fractional power of a nonpositive base).
    #[error("domain error in {kind} template {template}, instance {instance}: {message}")]
    Domain {
        kind: &'static str,
        template: usize,
        instance: usize,
        message: String,
    },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("instance {instance} of template {template} supplies {got} {what} slots, expression uses {expected}")]
    SlotArity {
        template: usize,
        instance: usize,
        what: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("instance {instance} of template {template} maps a slot to variable {index}, model has {n}")]
    VariableOutOfRange {
        template: usize,
        instance: usize,
        index: usize,
        n: usize,
    },
    #[error(transparent)]
    Sparse(#[from] sparse_core::SparseError),
}
