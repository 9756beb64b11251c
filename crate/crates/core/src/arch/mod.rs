//! Floating-point side: complex Gamma, quadrature, Whittaker functions and
//! the archimedean zeta integral.

pub mod gamma;
pub mod quad;
pub mod whittaker;
pub mod zeta;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use gamma::{complex_gamma, gamma_quotient, gamma_selftest};
pub use whittaker::{mellin_whittaker_check, whittaker_w, MellinReport};
pub use zeta::{arch_zeta_closed, arch_zeta_closed_simplified, arch_zeta_quadrature, ArchReport, ArchSpec};

/// A complex number as it appears in JSON.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
pub struct ComplexValue {
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

impl From<Complex64> for ComplexValue {
    fn from(z: Complex64) -> Self {
        ComplexValue { re: z.re, im: z.im }
    }
}

impl From<ComplexValue> for Complex64 {
    fn from(z: ComplexValue) -> Self {
        Complex64::new(z.re, z.im)
    }
}

/// `|a - b| / |b|`, or `|a|` when `b = 0`.
pub fn rel_err(a: Complex64, b: Complex64) -> f64 {
    let d = (a - b).norm();
    if b.norm() == 0.0 {
        d
    } else {
        d / b.norm()
    }
}

/// `i^n`.
pub fn i_pow(n: i64) -> Complex64 {
    match n.rem_euclid(4) {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// `base^z` for a positive real base, principal branch.
pub fn real_pow(base: f64, z: Complex64) -> Complex64 {
    (z * base.ln()).exp()
}
