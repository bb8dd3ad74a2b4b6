use thiserror::Error;

#[derive(Debug, Error)]
pub enum DynError {
    #[error("map does not cover {point}{detail}")]
    Incomplete { point: String, detail: String },
    #[error("evaluation failed at orbit step {step}: {source}")]
    AtStep {
        step: usize,
        #[source]
        source: Box<DynError>,
    },
    #[error("fragment budget exceeded: {0}")]
    Budget(String),
    #[error(transparent)]
    Core(#[from] dendrodyn_core::CoreError),
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, DynError>;
