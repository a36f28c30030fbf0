use thiserror::Error;

#[derive(Debug, Error)]
pub enum SparseError {
    #[error("invalid sparse structure: {0}")]
    Structure(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// A pivot fell below the zero tolerance with perturbation disabled.
    /// For KKT systems this signals that the matrix is not strongly
    /// factorizable at the current regularization.
    #[error("zero pivot at column {column} (|d| = {magnitude:e})")]
    ZeroPivot { column: usize, magnitude: f64 },

    /// The factorization carries a structurally zero diagonal entry
    /// (`n_zero > 0`); triangular solves cannot proceed.
    #[error("singular diagonal: factorization has {n_zero} zero pivots")]
    SingularDiagonal { n_zero: usize },

    #[error("matrix market parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}
