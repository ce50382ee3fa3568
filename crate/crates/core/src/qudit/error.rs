use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EngineError {
    #[error("dimension must be at least 2, got {0}")]
    DimensionTooSmall(usize),
    #[error("subsystem count must be at least 1")]
    NoSubsystems,
    #[error("state of {dim}^{subsystems} amplitudes exceeds the cap of {cap}")]
    CapExceeded { dim: usize, subsystems: usize, cap: u64 },
    #[error("value {value} out of range 0..{dim}")]
    ValueOutOfRange { value: usize, dim: usize },
    #[error("position {position} out of range for {subsystems} subsystems")]
    PositionOutOfRange { position: usize, subsystems: usize },
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("shape mismatch: ({0}, {1}) vs ({2}, {3})")]
    ShapeMismatch(usize, usize, usize, usize),
    #[error("index tuple {0:?} does not fit the state shape")]
    BadIndex(Vec<usize>),
    #[error("amplitudes are not normalized (squared norm {0})")]
    NotNormalized(f64),
    #[error("matrix is not unitary (max deviation {0:e})")]
    NotUnitary(f64),
    #[error("matrix has {actual} entries, expected {expected}")]
    BadMatrixSize { expected: usize, actual: usize },
    #[error("outcome {0} has zero probability")]
    ImpossibleOutcome(usize),
    #[error("measurement left a zero-norm state; this is an engine bug")]
    DegeneratePostState,
    #[error("handle refers to register {0} which does not exist")]
    UnknownRegister(usize),
}
