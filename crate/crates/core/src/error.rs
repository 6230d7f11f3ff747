use thiserror::Error;

/// Errors raised anywhere in the simulation stack.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid: {0}")]
    Invalid(String),

    #[error("simulation cap exceeded: {needed} qubits requested, cap is {cap}")]
    CapExceeded { needed: usize, cap: usize },

    #[error("unknown register `{0}`")]
    UnknownRegister(String),

    #[error("qubit {register}[{index}] out of range (width {width})")]
    QubitOutOfRange {
        register: String,
        index: usize,
        width: usize,
    },

    #[error("matrix is not unitary (deviation {0:.3e})")]
    NotUnitary(f64),

    #[error("not a valid density matrix: {0}")]
    NotDensity(String),

    #[error("precondition failed: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
