use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("contract violation: {0}")]
    Contract(String),
    #[error("size cap exceeded: {0}")]
    CapExceeded(String),
    #[error("graph is disconnected: congestion is unbounded")]
    Disconnected,
    #[error("no vertex cut exists (complete graph)")]
    NoVertexCut,
    #[error("generation failed: {0}")]
    Generation(String),
    #[error("standardness violation: {0}")]
    Standardness(String),
    #[error("linear program failed: {0}")]
    Lp(String),
}

pub type Result<T> = std::result::Result<T, Error>;
