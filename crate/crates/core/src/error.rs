use thiserror::Error;

/// Errors raised by the exact and numerical routines of this crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("element is not invertible (norm is zero)")]
    InvalidInversion,
    #[error("series division by a non-unit constant term")]
    DivisionByNonUnit,
    #[error("scalars live over different residue fields (q = {0} vs q = {1})")]
    FieldMismatch(u64, u64),
    #[error("invalid residue cardinality q = {0}; need q >= 2")]
    InvalidResidueCardinality(u64),
    #[error("invalid Satake parameters: {0}")]
    InvalidSatake(String),
    #[error("invalid Bessel datum: {0}")]
    InvalidBesselDatum(String),
    #[error("invalid GL2 datum: {0}")]
    InvalidGl2(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("unsupported case: {0}")]
    UnsupportedCase(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("argument {re} + {im}i is at or next to a pole of Gamma")]
    PoleError { re: f64, im: f64 },
    #[error("unsupported Whittaker parameters: {0}")]
    UnsupportedParameters(String),
    #[error("divergent parameters: {0}")]
    DivergentParameters(String),
    #[error("quadrature failed: {0}")]
    QuadratureError(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
