use sparse_core::SparseError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum KktError {
    #[error("problem has no variables")]
    EmptyProblem,

    #[error("dual condensed formulation requires a diagonal Hessian block (entry at ({row}, {col}))")]
    NonDiagonalHessian { row: usize, col: usize },

    #[error("Hessian block diagonal entry {index} is zero; cannot condense")]
    SingularHessianBlock { index: usize },

    #[error("iterate violates interior-point invariants: {0}")]
    InvalidIterate(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("workspace has not been factorized")]
    NotFactorized,

    #[error("primal condensed matrix is not positive definite (n_pos = {n_pos} of {n})")]
    NotPositiveDefinite { n_pos: usize, n: usize },

    #[error("dense KKT oracle: system is singular")]
    SingularDenseSystem,

    #[error(transparent)]
    Sparse(#[from] SparseError),
}
