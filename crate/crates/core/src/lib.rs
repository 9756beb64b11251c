//! Exact and numerical verification of the local zeta integrals in the
//! GSp4 x GL2 integral representation.

pub mod arch;
pub mod bessel;
pub mod cosets;
pub mod error;
pub mod gl2;
pub mod global;
pub mod sampling;
pub mod scalar;
pub mod series;
pub mod zeta;

pub use error::{Error, Result};
pub use scalar::QScalar;
