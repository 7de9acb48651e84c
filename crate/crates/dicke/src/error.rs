use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("qubit index {index} out of range for {num_qubits} qubits")]
    QubitOutOfRange { index: usize, num_qubits: usize },
    #[error("qubit count mismatch: {0} vs {1}")]
    QubitCountMismatch(usize, usize),
    #[error("overlapping qubit sets")]
    Overlap,
    #[error("map is not injective")]
    NotInjective,
    #[error("insufficient ancilla: need {need}, have {have}")]
    InsufficientAncilla { need: usize, have: usize },
    #[error("not normalized: norm^2 = {0}")]
    NotNormalized(f64),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("simulator cap exceeded: {num_qubits} > {cap}")]
    CapExceeded { num_qubits: usize, cap: usize },
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
