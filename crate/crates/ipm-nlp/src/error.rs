use thiserror::Error;

#[derive(Debug, Error)]
pub enum NlpError {
    /// Inertia correction walked delta_p past its upper bound without
    /// reaching the target inertia.
    #[error("regularization exhausted at delta_p = {delta:e}")]
    RegularizationExhausted { delta: f64 },
    #[error(transparent)]
    Model(#[from] model_ad::ModelError),
    #[error(transparent)]
    Kkt(#[from] kkt::KktError),
}
