use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error("unknown protocol id {0:?}")]
    UnknownProtocol(String),
    #[error("efficiency needs k >= 3 and m >= 1, got k = {k}, m = {m}")]
    InvalidSize { k: u64, m: u64 },
    #[error("unknown report format {0:?}")]
    UnknownFormat(String),
    #[error("report has no sections")]
    EmptyReport,
}
