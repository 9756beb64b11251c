//! Complex Gamma by the Lanczos approximation (g = 7, nine terms).

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};

const G: f64 = 7.0;
const COEFFS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Distance below which an argument counts as a pole.
pub const POLE_EPS: f64 = 1e-12;

fn check_pole(z: Complex64) -> Result<()> {
    if z.re <= 0.5 && (z.re - z.re.round()).abs() < POLE_EPS && z.im.abs() < POLE_EPS {
        return Err(Error::PoleError { re: z.re, im: z.im });
    }
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::InvalidArgument(format!("non-finite Gamma argument {z}")));
    }
    Ok(())
}

/// `ln Gamma(z)` on `Re z >= 1/2` (principal branch of each log term).
fn ln_gamma_right(z: Complex64) -> Complex64 {
    let z = z - 1.0;
    let mut x = Complex64::new(COEFFS[0], 0.0);
    for (i, c) in COEFFS.iter().enumerate().skip(1) {
        x += c / (z + i as f64);
    }
    let t = z + G + 0.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + x.ln()
}

/// `Gamma(z)`, with reflection for `Re z < 1/2`.
pub fn complex_gamma(z: Complex64) -> Result<Complex64> {
    check_pole(z)?;
    if z.re < 0.5 {
        let s = (PI * z).sin();
        let g = ln_gamma_right(1.0 - z).exp();
        let v = PI / (s * g);
        return finite(v, z);
    }
    finite(ln_gamma_right(z).exp(), z)
}

fn finite(v: Complex64, z: Complex64) -> Result<Complex64> {
    if v.re.is_finite() && v.im.is_finite() {
        Ok(v)
    } else {
        Err(Error::InvalidArgument(format!("Gamma({z}) overflows")))
    }
}

/// `prod Gamma(num) / prod Gamma(den)` after cancelling arguments that agree
/// to within [`POLE_EPS`], so pole-over-pole pairs drop out.
pub fn gamma_quotient(num: &[Complex64], den: &[Complex64]) -> Result<Complex64> {
    let mut den: Vec<Option<Complex64>> = den.iter().copied().map(Some).collect();
    let mut out = Complex64::new(1.0, 0.0);
    for &a in num {
        let hit = den.iter_mut().find(|d| d.is_some_and(|d| (d - a).norm() < POLE_EPS));
        match hit {
            Some(slot) => *slot = None,
            None => out *= complex_gamma(a)?,
        }
    }
    for d in den.into_iter().flatten() {
        out /= complex_gamma(d)?;
    }
    Ok(out)
}

/// Outcome of the built-in Gamma checks.
#[derive(Debug, Clone, serde::Serialize)]
pub struct GammaSelfTest {
    pub name: String,
    pub rel_err: f64,
    pub pass: bool,
}

/// Recurrence, `Gamma(1/2)` and factorials; `samples` recurrence points on
/// `1/2 <= Re z <= 20`, `|Im z| <= 20` from a fixed linear congruential walk.
pub fn gamma_selftest(samples: usize, tol: f64) -> Vec<GammaSelfTest> {
    let mut out = Vec::new();
    let mut push = |name: String, got: Result<Complex64>, want: Complex64| {
        let rel_err = match got {
            Ok(g) => (g - want).norm() / want.norm(),
            Err(_) => f64::INFINITY,
        };
        out.push(GammaSelfTest { name, rel_err, pass: rel_err <= tol });
    };
    push("gamma(1/2)".into(), complex_gamma(Complex64::new(0.5, 0.0)), Complex64::new(PI.sqrt(), 0.0));
    let mut fact = 1.0f64;
    for n in 1..=20u32 {
        push(format!("gamma({n})"), complex_gamma(Complex64::new(n as f64, 0.0)), Complex64::new(fact, 0.0));
        fact *= n as f64;
    }
    let mut state: u64 = 0x9e37_79b9_7f4a_7c15;
    let mut next = || {
        state = state.wrapping_mul(6_364_136_223_846_793_005).wrapping_add(1_442_695_040_888_963_407);
        (state >> 11) as f64 / (1u64 << 53) as f64
    };
    for k in 0..samples {
        let z = Complex64::new(0.5 + 19.0 * next(), -20.0 + 40.0 * next());
        let ratio = complex_gamma(z + 1.0).and_then(|a| complex_gamma(z).map(|b| a / b));
        push(format!("recurrence #{k} at {z}"), ratio, z);
    }
    out
}
