//! Double-exponential quadrature for smooth complex integrands: tanh-sinh
//! on finite intervals and exp-sinh on `[a, inf)`. The step is halved until
//! two successive estimates agree.

use num_complex::Complex64;
use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};

const MAX_LEVEL: u32 = 12;
const MIN_LEVEL: u32 = 3;
const T_MAX: f64 = 8.0;
/// Tails may be cut only beyond this `|t|`, so a small integrand near the
/// centre does not hide mass further out.
const T_CUT: f64 = 3.0;

/// A node `t -> (x, w)` of the transformed trapezoid rule, or `None` once
/// the abscissa has collapsed onto an endpoint.
trait Map {
    fn node(&self, t: f64) -> Option<(f64, f64)>;
}

struct ExpSinh {
    a: f64,
}

impl Map for ExpSinh {
    fn node(&self, t: f64) -> Option<(f64, f64)> {
        let e = (FRAC_PI_2 * t.sinh()).exp();
        let w = FRAC_PI_2 * t.cosh() * e;
        if e < f64::MIN_POSITIVE || !w.is_finite() {
            return None;
        }
        Some((self.a + e, w))
    }
}

struct TanhSinh {
    mid: f64,
    half: f64,
}

impl Map for TanhSinh {
    fn node(&self, t: f64) -> Option<(f64, f64)> {
        let u = FRAC_PI_2 * t.sinh();
        // distance to the nearer endpoint, 2 half / (1 + e^(2|u|))
        let dist = 2.0 * self.half / (1.0 + (2.0 * u.abs()).exp());
        if dist < f64::MIN_POSITIVE {
            return None;
        }
        let x = if u >= 0.0 { self.mid + self.half - dist } else { self.mid - self.half + dist };
        let ch = u.cosh();
        Some((x, self.half * FRAC_PI_2 * t.cosh() / (ch * ch)))
    }
}

/// Sum of the terms at `t = t0 + k step`, `k >= 0`, walking away from zero
/// in direction `dir`. A term of `None` means the abscissa has collapsed.
/// With `reach = None` the walk stops once the terms are negligible;
/// otherwise it runs out to `|t| = reach`. Returns the sum and the `|t|` of
/// the cut, or `T_MAX` if the walk ran out of nodes instead.
fn tail<T>(term: &mut T, t0: f64, step: f64, dir: f64, scale: f64, reach: Option<f64>) -> Result<(Complex64, f64)>
where
    T: FnMut(f64) -> Option<Complex64>,
{
    let mut sum = Complex64::new(0.0, 0.0);
    let mut small = 0;
    let mut k = 0;
    let mut last = T_MAX;
    loop {
        let t = dir * (t0 + k as f64 * step);
        if t.abs() > reach.unwrap_or(T_MAX) {
            break;
        }
        let Some(v) = term(t) else { break };
        if !(v.re.is_finite() && v.im.is_finite()) {
            return Err(Error::QuadratureError(format!("integrand not finite at node t = {t}")));
        }
        sum += v;
        if reach.is_none() {
            if t.abs() >= T_CUT && v.norm() <= 1e-18 * (scale.max(sum.norm())) {
                small += 1;
                if small >= 3 {
                    last = t.abs();
                    break;
                }
            } else {
                small = 0;
            }
        }
        k += 1;
    }
    Ok((sum, last))
}

/// Trapezoid sums of `term(t)` with halving step until two successive
/// estimates agree.
fn integrate_terms<T>(mut term: T, tol: f64) -> Result<Complex64>
where
    T: FnMut(f64) -> Option<Complex64>,
{
    let mut h = 1.0;
    // raw sum over all nodes at the current spacing
    let centre = term(0.0).unwrap_or_default();
    let (right, r_reach) = tail(&mut term, 1.0, 1.0, 1.0, centre.norm(), None)?;
    let (left, l_reach) = tail(&mut term, 1.0, 1.0, -1.0, centre.norm(), None)?;
    // finer levels reuse the extent found here: their first few terms can be
    // tiny next to the running total while a peak still lies further out
    let mut raw = centre + right + left;
    let mut prev = raw * h;
    for level in 1..=MAX_LEVEL {
        // new nodes sit at odd multiples of h/2
        let odd = tail(&mut term, h / 2.0, h, 1.0, 0.0, Some(r_reach))?.0
            + tail(&mut term, h / 2.0, h, -1.0, 0.0, Some(l_reach))?.0;
        raw += odd;
        h /= 2.0;
        let est = raw * h;
        let diff = (est - prev).norm();
        if level >= MIN_LEVEL && diff <= tol * est.norm().max(1e-300) {
            return Ok(est);
        }
        prev = est;
    }
    Err(Error::QuadratureError(format!(
        "no convergence to {tol:e} after {MAX_LEVEL} halvings (last estimate {prev})"
    )))
}

fn integrate<F, M>(mut f: F, map: M, tol: f64) -> Result<Complex64>
where
    F: FnMut(f64) -> Complex64,
    M: Map,
{
    integrate_terms(|t| map.node(t).map(|(x, w)| f(x) * w), tol)
}

/// `int_a^inf f(x) dx`.
pub fn integrate_semi_infinite<F>(f: F, a: f64, tol: f64) -> Result<Complex64>
where
    F: FnMut(f64) -> Complex64,
{
    integrate(f, ExpSinh { a }, tol)
}

/// `int_a^b f(x) dx`.
pub fn integrate_finite<F>(f: F, a: f64, b: f64, tol: f64) -> Result<Complex64>
where
    F: FnMut(f64) -> Complex64,
{
    if !(a < b) {
        return Err(Error::InvalidArgument(format!("empty interval [{a}, {b}]")));
    }
    integrate(f, TanhSinh { mid: 0.5 * (a + b), half: 0.5 * (b - a) }, tol)
}

/// `ln(1 + e^z)` without overflow.
fn ln1p_exp(z: f64) -> f64 {
    if z > 0.0 { z + (-z).exp().ln_1p() } else { z.exp().ln_1p() }
}

/// `int_0^inf f(x) dx` where `term(x, ln x, ln w)` returns `w f(x)` for the
/// quadrature weight `w`. Nodes and weights are handed over in log form, so
/// the integrand can be assembled in the exponent when `f` or `w` alone
/// would over- or underflow.
pub fn integrate_semi_infinite_weighted<F>(mut term: F, tol: f64) -> Result<Complex64>
where
    F: FnMut(f64, f64, f64) -> Complex64,
{
    integrate_terms(
        |t| {
            let ln_x = FRAC_PI_2 * t.sinh();
            Some(term(ln_x.exp(), ln_x, (FRAC_PI_2 * t.cosh()).ln() + ln_x))
        },
        tol,
    )
}

/// `int_0^1 f(x) dx` with the calling convention of
/// [`integrate_semi_infinite_weighted`].
pub fn integrate_unit_weighted<F>(mut term: F, tol: f64) -> Result<Complex64>
where
    F: FnMut(f64, f64, f64) -> Complex64,
{
    integrate_terms(
        |t| {
            let u = FRAC_PI_2 * t.sinh();
            // ln of the distance 1 / (1 + e^(2|u|)) to the nearer endpoint
            let ln_dist = -ln1p_exp(2.0 * u.abs());
            let dist = ln_dist.exp();
            let (x, ln_x) = if u >= 0.0 { (1.0 - dist, (-dist).ln_1p()) } else { (dist, ln_dist) };
            let ln_cosh_u = u.abs() + (-2.0 * u.abs()).exp().ln_1p() - std::f64::consts::LN_2;
            Some(term(x, ln_x, (0.5 * FRAC_PI_2 * t.cosh()).ln() - 2.0 * ln_cosh_u))
        },
        tol,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn re(f: impl Fn(f64) -> f64) -> impl FnMut(f64) -> Complex64 {
        move |x| Complex64::new(f(x), 0.0)
    }

    #[test]
    fn semi_infinite() {
        let v = integrate_semi_infinite(re(|x| (-x).exp()), 0.0, 1e-12).unwrap();
        assert!((v.re - 1.0).abs() < 1e-12);
        // int_0^inf x^(-1/2) e^-x = sqrt(pi)
        let v = integrate_semi_infinite(re(|x| x.powf(-0.5) * (-x).exp()), 0.0, 1e-12).unwrap();
        assert!((v.re - PI.sqrt()).abs() < 1e-11);
        // algebraic decay: int_1^inf x^-3 = 1/2
        let v = integrate_semi_infinite(re(|x| x.powi(-3)), 1.0, 1e-12).unwrap();
        assert!((v.re - 0.5).abs() < 1e-12);
        // int_0^inf x^4 e^-x = 24
        let v = integrate_semi_infinite(re(|x| (4.0 * x.ln() - x).exp()), 0.0, 1e-12).unwrap();
        assert!((v.re - 24.0).abs() < 1e-10);
        // mass far from x = 1: int_0^inf x^30 e^-x = 30!
        let v = integrate_semi_infinite(re(|x| (30.0 * x.ln() - x).exp()), 0.0, 1e-12).unwrap();
        assert!((v.re / 2.652_528_598_121_910_6e32 - 1.0).abs() < 1e-11);
    }

    #[test]
    fn finite() {
        let v = integrate_finite(re(|x| x.sin()), 0.0, PI, 1e-12).unwrap();
        assert!((v.re - 2.0).abs() < 1e-12);
        let v = integrate_finite(re(|x| 1.0 / x.sqrt()), 0.0, 1.0, 1e-12).unwrap();
        assert!((v.re - 2.0).abs() < 1e-10);
        assert!(integrate_finite(re(|x| x), 1.0, 1.0, 1e-12).is_err());
    }

    #[test]
    fn weighted_forms() {
        // int_0^inf x^(-1/2) e^-x = sqrt(pi), assembled in the exponent
        let v = integrate_semi_infinite_weighted(|x, lx, lw| Complex64::new(-0.5 * lx - x + lw, 0.0).exp(), 1e-12).unwrap();
        assert!((v.re - PI.sqrt()).abs() < 1e-11);
        // int_0^inf x^699 e^-x = 699!, far beyond f64 pointwise
        let v = integrate_semi_infinite_weighted(
            |x, lx, lw| Complex64::new(699.0 * lx - x + lw - 3884.0, 0.0).exp(),
            1e-12,
        )
        .unwrap();
        let ln_fact: f64 = (1..=699).map(|k| (k as f64).ln()).sum();
        assert!((v.re.ln() - (ln_fact - 3884.0)).abs() < 1e-11);
        // int_0^1 x^(-0.9) = 10, singular at 0
        let v = integrate_unit_weighted(|_, lx, lw| Complex64::new(-0.9 * lx + lw, 0.0).exp(), 1e-12).unwrap();
        assert!((v.re - 10.0).abs() < 1e-9, "{v}");
        let v = integrate_unit_weighted(|x, _, lw| Complex64::new(x * x, 0.0) * lw.exp(), 1e-12).unwrap();
        assert!((v.re - 1.0 / 3.0).abs() < 1e-13);
    }

    #[test]
    fn complex_oscillation() {
        // int_0^inf e^{-(1 - i) x} dx = 1 / (1 - i)
        let v = integrate_semi_infinite(|x| (Complex64::new(-1.0, 1.0) * x).exp(), 0.0, 1e-12).unwrap();
        let want = 1.0 / Complex64::new(1.0, -1.0);
        assert!((v - want).norm() < 1e-11);
    }
}
