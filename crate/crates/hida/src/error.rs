//! Error type shared by all modules of the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("dimension index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("coordinate vector has length {got}, expansion has dimension {expected}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("degree {degree} exceeds the cap {cap} (multi-index factorials are kept exact in 64-bit integers)")]
    DegreeCapExceeded { degree: usize, cap: usize },

    #[error("operand of degree {degree} would be clipped at max_degree {max_degree}; refusing silent truncation")]
    DegreeTooHigh { degree: usize, max_degree: usize },

    #[error("element is not Wick-invertible: |constant term| = {magnitude:e} <= {threshold:e}")]
    NonInvertible { magnitude: f64, threshold: f64 },

    #[error("operation undefined on the zero expansion")]
    ZeroExpansion,

    #[error("quadrature oracle limited to dimension <= {max}, got {got}")]
    DimensionTooLarge { max: usize, got: usize },

    #[error("quadrature rule of order {order} too coarse; need at least {required}")]
    QuadratureTooCoarse { order: usize, required: usize },

    #[error("quadrature rule failed the construction sanity check: {0}")]
    QuadratureInvalid(String),

    #[error("time {t} is not aligned to the grid (dt = {dt})")]
    UnalignedTime { t: f64, dt: f64 },

    #[error("coefficients must be real here; found imaginary part {magnitude:e} > {tolerance:e}")]
    ComplexCoefficients { magnitude: f64, tolerance: f64 },

    #[error("invalid expansion{}: {detail}", term_context(.term_index))]
    InvalidExpansion {
        detail: String,
        term_index: Option<usize>,
    },

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

fn term_context(ix: &Option<usize>) -> String {
    match ix {
        Some(i) => format!(" (term {i})"),
        None => String::new(),
    }
}

impl Error {
    /// Stable machine-readable code for structured error output.
    pub fn code(&self) -> &'static str {
        match self {
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::IndexOutOfRange { .. } => "index_out_of_range",
            Error::LengthMismatch { .. } => "length_mismatch",
            Error::DegreeCapExceeded { .. } => "degree_cap_exceeded",
            Error::DegreeTooHigh { .. } => "degree_too_high",
            Error::NonInvertible { .. } => "non_invertible",
            Error::ZeroExpansion => "zero_expansion",
            Error::DimensionTooLarge { .. } => "dimension_too_large",
            Error::QuadratureTooCoarse { .. } => "quadrature_too_coarse",
            Error::QuadratureInvalid(_) => "quadrature_invalid",
            Error::UnalignedTime { .. } => "unaligned_time",
            Error::ComplexCoefficients { .. } => "complex_coefficients",
            Error::InvalidExpansion { .. } => "invalid_expansion",
            Error::EmptyInput(_) => "empty_input",
            Error::InvalidConfig(_) => "invalid_config",
        }
    }
}
