use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: String, found: String },

    #[error("bad bipartition: {rows}x{cols} matrix cannot be split as {dim_a}x{dim_b}")]
    BadBipartition {
        rows: usize,
        cols: usize,
        dim_a: usize,
        dim_b: usize,
    },

    #[error("matrix is not Hermitian (max deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("not PSD: minimum eigenvalue {min_eigenvalue:.3e}")]
    NotPsd { min_eigenvalue: f64 },

    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),

    #[error("invalid resource state: {0}")]
    InvalidResource(String),

    #[error("state is not normalized (norm {norm})")]
    NotNormalized { norm: f64 },

    #[error("matrix contains non-finite entries")]
    NonFinite,

    #[error("not a measurement: completeness deviation {deviation:.3e}")]
    NotAMeasurement { deviation: f64 },

    #[error("correction {index} is not unitary (deviation {deviation:.3e})")]
    NotUnitary { index: usize, deviation: f64 },

    #[error("invalid dimension {dim}: {reason}")]
    InvalidDimension { dim: usize, reason: &'static str },

    #[error("d too large for μ construction (d = {0}, maximum 4)")]
    DimensionTooLarge(usize),

    #[error("{name} = {value} is outside [0, 1]")]
    OutOfRange { name: &'static str, value: f64 },

    #[error("at least 2 samples are required, got {0}")]
    TooFewSamples(usize),

    #[error("malformed matrix file: {0}")]
    Format(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
