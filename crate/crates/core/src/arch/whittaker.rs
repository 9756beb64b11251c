//! The classical Whittaker function `W_{kappa,mu}(x)` in two regimes, and the
//! Mellin-type integral `int_0^inf W(x) e^(-x/2) x^(sigma-1) dx`.

use num_complex::Complex64;
use serde::Serialize;

use super::gamma::{complex_gamma, gamma_quotient};
use super::quad::{integrate_semi_infinite_weighted, integrate_unit_weighted};
use super::ComplexValue;
use crate::error::{Error, Result};

const EPS: f64 = 1e-12;
const INNER_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WhittakerRegime {
    /// `Re(mu - kappa + 1/2) > 0`: Laplace-type integral.
    Integral,
    /// `kappa = l1/2`, `mu = +-(l1-1)/2`: `e^(-x/2) x^(l1/2)`.
    ClosedForm,
}

fn is_closed_form(kappa: Complex64, mu: Complex64) -> bool {
    if kappa.im.abs() > EPS || mu.im.abs() > EPS {
        return false;
    }
    let l1 = 2.0 * kappa.re;
    (l1 - l1.round()).abs() < EPS && (mu.re.abs() - (l1 - 1.0).abs() / 2.0).abs() < EPS
}

pub fn whittaker_regime(kappa: Complex64, mu: Complex64) -> Result<WhittakerRegime> {
    if is_closed_form(kappa, mu) {
        Ok(WhittakerRegime::ClosedForm)
    } else if (mu - kappa).re + 0.5 > 0.0 {
        Ok(WhittakerRegime::Integral)
    } else {
        Err(Error::UnsupportedParameters(format!(
            "kappa = {kappa}, mu = {mu}: neither Re(mu - kappa + 1/2) > 0 nor the closed-form pair"
        )))
    }
}

/// `W_{kappa,mu}(x) e^(x/2) x^(-kappa)`, which stays bounded for large `x`.
pub fn whittaker_reduced(kappa: Complex64, mu: Complex64, x: f64) -> Result<Complex64> {
    whittaker_reduced_scaled(kappa, mu, x, Complex64::new(0.0, 0.0))
}

/// `exp(log_scale)` times [`whittaker_reduced`], with the scale folded into
/// the integrand so that neither factor overflows on its own.
pub fn whittaker_reduced_scaled(kappa: Complex64, mu: Complex64, x: f64, log_scale: Complex64) -> Result<Complex64> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::InvalidArgument(format!("Whittaker argument x = {x} must be positive")));
    }
    whittaker_reduced_scaled_ln(kappa, mu, x.ln(), log_scale)
}

/// `ln(e^p + e^q)`.
fn ln_add(p: f64, q: f64) -> f64 {
    let (hi, lo) = if p >= q { (p, q) } else { (q, p) };
    hi + (lo - hi).exp().ln_1p()
}

/// [`whittaker_reduced_scaled`] at `x = e^ln_x`, usable where `x` itself
/// under- or overflows.
pub fn whittaker_reduced_scaled_ln(kappa: Complex64, mu: Complex64, ln_x: f64, log_scale: Complex64) -> Result<Complex64> {
    if !ln_x.is_finite() {
        return Err(Error::InvalidArgument(format!("Whittaker argument ln x = {ln_x} must be finite")));
    }
    match whittaker_regime(kappa, mu)? {
        WhittakerRegime::ClosedForm => Ok(log_scale.exp()),
        WhittakerRegime::Integral => {
            // int_0^inf t^a (1 + t/x)^b e^-t dt, split at t = x
            let a = mu - kappa - 0.5;
            let b = mu + kappa - 0.5;
            let x = ln_x.exp();
            let head = log_scale + (a + 1.0) * ln_x;
            // t = x v on [0, x]
            let near = integrate_unit_weighted(
                |v, lv, lw| (head + a * lv + b * v.ln_1p() - x * v + lw).exp(),
                INNER_TOL,
            )?;
            let far = if (a + b).re < -1.0 && x < 1.0 {
                // mass next to t = x: t = x (1 + w)
                integrate_semi_infinite_weighted(
                    |_, lw_, lw| {
                        let l1 = ln_add(0.0, lw_);
                        let l2 = ln_add(std::f64::consts::LN_2, lw_);
                        (head + a * l1 + b * l2 - (ln_x + l1).exp() + lw).exp()
                    },
                    INNER_TOL,
                )?
            } else {
                // mass near t = 1: t = x + s, (1 + t/x)^b = x^-b (2x + s)^b
                integrate_semi_infinite_weighted(
                    |s, ls, lw| {
                        let l1 = ln_add(ln_x, ls);
                        let l2 = ln_add(ln_x + std::f64::consts::LN_2, ls);
                        (log_scale - b * ln_x + a * l1 + b * l2 - x - s + lw).exp()
                    },
                    INNER_TOL,
                )?
            };
            Ok((near + far) / complex_gamma(mu - kappa + 0.5)?)
        }
    }
}

/// `W_{kappa,mu}(x)` for `x > 0`.
pub fn whittaker_w(kappa: Complex64, mu: Complex64, x: f64) -> Result<Complex64> {
    Ok(whittaker_reduced(kappa, mu, x)? * (kappa * x.ln() - x / 2.0).exp())
}

#[derive(Debug, Clone, Serialize)]
pub struct MellinReport {
    pub kappa: ComplexValue,
    pub mu: ComplexValue,
    pub sigma: ComplexValue,
    pub regime: WhittakerRegime,
    pub quadrature: ComplexValue,
    pub closed: ComplexValue,
    pub rel_err: f64,
}

/// Compares `int_0^inf W(x) e^(-x/2) x^(sigma-1) dx` with
/// `Gamma(sigma+1/2+mu) Gamma(sigma+1/2-mu) / Gamma(sigma-kappa+1)`.
pub fn mellin_whittaker_check(kappa: Complex64, mu: Complex64, sigma: Complex64) -> Result<MellinReport> {
    let regime = whittaker_regime(kappa, mu)?;
    // near 0, W behaves like x^(1/2 - |Re mu|) in general but like x^kappa in
    // the closed-form regime
    let convergent = match regime {
        WhittakerRegime::Integral => (sigma + 0.5 + mu).re > 0.0 && (sigma + 0.5 - mu).re > 0.0,
        WhittakerRegime::ClosedForm => (sigma + kappa).re > 0.0,
    };
    if !convergent {
        return Err(Error::DivergentParameters(format!(
            "integral diverges at 0 for kappa = {kappa}, mu = {mu}, sigma = {sigma}"
        )));
    }
    let mut err = None;
    let quadrature = integrate_semi_infinite_weighted(
        |x, lx, lw| match whittaker_reduced_scaled_ln(kappa, mu, lx, (kappa + sigma - 1.0) * lx - x + lw) {
            Ok(v) => v,
            Err(e) => {
                err.get_or_insert(e);
                Complex64::new(0.0, 0.0)
            }
        },
        1e-10,
    )?;
    if let Some(e) = err {
        return Err(e);
    }
    let closed = gamma_quotient(&[sigma + 0.5 + mu, sigma + 0.5 - mu], &[sigma - kappa + 1.0])?;
    Ok(MellinReport {
        kappa: kappa.into(),
        mu: mu.into(),
        sigma: sigma.into(),
        regime,
        quadrature: quadrature.into(),
        closed: closed.into(),
        rel_err: (quadrature - closed).norm() / closed.norm(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    /// `K_0(z) = int_0^inf exp(-z cosh t) dt`, composite Simpson on [0, 12].
    fn bessel_k0(z: f64) -> f64 {
        let n = 24_000;
        let h = 12.0 / n as f64;
        let f = |t: f64| (-z * t.cosh()).exp();
        let mut s = f(0.0) + f(12.0);
        for k in 1..n {
            s += f(k as f64 * h) * if k % 2 == 1 { 4.0 } else { 2.0 };
        }
        s * h / 3.0
    }

    #[test]
    fn closed_form_value() {
        let w = whittaker_w(c(5.0), c(4.5), 1.0).unwrap();
        assert!((w.re - 0.606_530_659_712_633_4).abs() < 1e-12);
        assert_eq!(whittaker_regime(c(5.0), c(-4.5)).unwrap(), WhittakerRegime::ClosedForm);
    }

    #[test]
    fn w00_against_k0() {
        for x in [0.5, 1.0, 3.0] {
            let w = whittaker_w(c(0.0), c(0.0), x).unwrap();
            let oracle = (x / PI).sqrt() * bessel_k0(x / 2.0);
            assert!((w.re - oracle).abs() / oracle < 1e-9, "x = {x}: {} vs {oracle}", w.re);
            assert!(w.im.abs() < 1e-14);
        }
    }

    #[test]
    fn large_x_asymptotics() {
        // W ~ e^(-x/2) x^kappa (1 + (mu^2 - (kappa - 1/2)^2)/x + ...)
        let (kappa, mu) = (0.3, 0.8);
        let first = mu * mu - (kappa - 0.5) * (kappa - 0.5);
        for x in [50.0, 100.0] {
            let ratio = whittaker_reduced(c(kappa), c(mu), x).unwrap().re;
            assert!((ratio - 1.0 - first / x).abs() < 5.0 / (x * x), "x = {x}: {ratio}");
        }
    }

    #[test]
    fn unsupported_pair() {
        assert!(matches!(whittaker_w(c(3.0), c(0.2), 1.0), Err(Error::UnsupportedParameters(_))));
        assert!(whittaker_w(c(0.0), c(0.0), 0.0).is_err());
    }

    #[test]
    fn mellin_examples() {
        let r = mellin_whittaker_check(c(0.0), c(0.0), c(0.5)).unwrap();
        assert!((r.closed.re - 2.0 / PI.sqrt()).abs() < 1e-12);
        assert!(r.rel_err < 1e-8, "{r:?}");
        let r = mellin_whittaker_check(c(5.0), c(4.5), c(3.0)).unwrap();
        assert!((r.closed.re - 5040.0).abs() < 1e-8);
        assert!(r.rel_err < 1e-8, "{r:?}");
        assert!(mellin_whittaker_check(c(0.0), c(2.0), c(1.0)).is_err());
    }

    #[test]
    fn mellin_complex_parameters() {
        let r = mellin_whittaker_check(Complex64::new(0.2, 0.3), Complex64::new(0.4, -0.5), Complex64::new(1.1, 0.7)).unwrap();
        assert!(r.rel_err < 1e-8, "{r:?}");
    }
}
