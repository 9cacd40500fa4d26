use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("LIM with zero scalar is not a group element")]
    ZeroScalar,

    #[error("both successor edges are ZERO")]
    BothZero,

    #[error("vector is all zero and cannot be normalised to a quantum state")]
    ZeroVector,

    #[error("vector length {0} is not a power of two >= 2")]
    NotPowerOfTwo(usize),

    #[error("too many qubits: {requested} (limit {limit})")]
    TooManyQubits { requested: usize, limit: usize },

    #[error("qubit {qubit} out of range for {num_qubits}-qubit register")]
    QubitOutOfRange { qubit: usize, num_qubits: usize },

    #[error("invalid gate: {0}")]
    InvalidGate(String),

    #[error("tower optimisation refused: {0}")]
    TowerRefused(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("JSON error at line {line}, column {column}: {msg}")]
    Json { line: usize, column: usize, msg: String },

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("invalid node handle {0}")]
    InvalidNode(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
