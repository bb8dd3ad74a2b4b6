use thiserror::Error;

#[derive(Debug, Error)]
pub enum CoreError {
    #[error("expression error: {0}")]
    Expr(String),
    #[error("unknown family `{0}`")]
    UnknownFamily(String),
    #[error("no such vertex: {0}")]
    NoSuchVertex(String),
    #[error("no such edge: {0}")]
    NoSuchEdge(String),
    #[error("unresolvable point: {0}")]
    Unresolvable(String),
    #[error("empty input: {0}")]
    EmptyInput(&'static str),
    #[error("invalid presentation: {0}")]
    Invalid(String),
    #[error("budget exceeded: {0}")]
    Budget(String),
}

pub type Result<T> = std::result::Result<T, CoreError>;
