use thiserror::Error;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("scalable families need size >= 2, got {size}")]
    SizeTooSmall { size: usize },
    #[error("unknown problem family `{0}`")]
    UnknownFamily(String),
    #[error("sgm10 of an empty time vector")]
    EmptyTimes,
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Kkt(#[from] kkt::KktError),
    #[error(transparent)]
    Lp(#[from] ipm_lp::LpError),
    #[error(transparent)]
    Nlp(#[from] ipm_nlp::NlpError),
    #[error(transparent)]
    Model(#[from] model_ad::ModelError),
    #[error(transparent)]
    Sparse(#[from] sparse_core::SparseError),
}
