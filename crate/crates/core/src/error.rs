use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("qubit index {qubit} out of range for {num_qubits}-qubit register")]
    QubitOutOfRange { qubit: usize, num_qubits: usize },

    #[error("CNOT control and target coincide on qubit {0}")]
    ControlEqualsTarget(usize),

    #[error("{requested} qubits requested, dense simulation supports at most {max}")]
    TooManyQubits { requested: usize, max: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not unitary (deviation {deviation:.3e})")]
    NotUnitary { deviation: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("partial trace needs at least one kept qubit")]
    EmptyKeepSet,

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("diagonalization failed: {0}")]
    Diagonalization(String),

    #[error("estimate is unphysical: overlap {overlap:.6} below tolerance")]
    UnphysicalEstimate { overlap: f64 },

    #[error("readout contrast eta = {0} is not positive, rescaling refused")]
    NonPositiveEta(f64),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("synthesis budget admits no candidate sequences")]
    InfeasibleBudget,
}

pub type Result<T> = std::result::Result<T, Error>;
