use thiserror::Error;

/// Errors produced anywhere in the laboratory.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("length mismatch: {left} bits vs {right} bits")]
    LengthMismatch { left: u32, right: u32 },

    #[error("dimension mismatch: {left} qubits vs {right} qubits")]
    DimensionMismatch { left: u32, right: u32 },

    #[error("{what} = {got} exceeds the supported limit of {limit}")]
    LimitExceeded {
        what: &'static str,
        got: u64,
        limit: u64,
    },

    #[error("value {value:#x} does not fit in {len} bits")]
    ValueOutOfRange { value: u64, len: u32 },

    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),

    #[error("invalid pure state: {0}")]
    InvalidPureState(String),

    #[error("measurement basis is not orthonormal: {0}")]
    NonOrthonormalBasis(String),

    #[error("invalid function family: {0}")]
    InvalidFamily(String),

    #[error("invalid scheme: {0}")]
    InvalidScheme(String),

    #[error("previous block has not been confirmed")]
    UnconfirmedBlock,

    #[error("no block is awaiting confirmation")]
    NothingToConfirm,

    #[error("randomness (r1, r2) = ({r1}, {r2}) was already used in this session")]
    RandomnessReuse { r1: String, r2: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
