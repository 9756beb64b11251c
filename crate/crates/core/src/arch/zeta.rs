//! The archimedean zeta integral: its closed Gamma form and a direct
//! quadrature of the `(lambda, u)` double integral.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use super::gamma::gamma_quotient;
use super::quad::{integrate_semi_infinite, integrate_semi_infinite_weighted};
use super::whittaker::{whittaker_reduced, whittaker_reduced_scaled_ln};
use super::{i_pow, real_pow, rel_err, ComplexValue};
use crate::error::{Error, Result};

/// Parameters of the archimedean integral.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArchSpec {
    /// GSp4 weight.
    pub l: i64,
    /// GL2 weight.
    pub l1: i64,
    /// Must equal the derived value when present.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l2: Option<i64>,
    #[serde(rename = "D")]
    pub d: u64,
    /// `omega_tau(y) = y^q` for `y > 0`.
    #[serde(default)]
    pub q_exp: ComplexValue,
    /// Casimir datum `r`; the Whittaker index is `i r / 2`.
    pub r_param: ComplexValue,
    pub a_plus: ComplexValue,
    pub s: ComplexValue,
}

impl ArchSpec {
    /// Holomorphic discrete series: `i r = l1 - 1`, `q = 0`, `a+ = (4 pi)^(-l1/2)`.
    pub fn discrete_series(l: i64, l1: i64, d: u64, s: Complex64) -> Self {
        ArchSpec {
            l,
            l1,
            l2: None,
            d,
            q_exp: ComplexValue::default(),
            r_param: Complex64::new(0.0, -(l1 as f64 - 1.0)).into(),
            a_plus: Complex64::new((4.0 * PI).powf(-(l1 as f64) / 2.0), 0.0).into(),
            s: s.into(),
        }
    }

    pub fn with_s(&self, s: Complex64) -> Self {
        ArchSpec { s: s.into(), ..*self }
    }

    /// `l2 = l1 - 2l` if `l <= l1`, else `-l1`.
    pub fn derived_l2(&self) -> i64 {
        if self.l <= self.l1 {
            self.l1 - 2 * self.l
        } else {
            -self.l1
        }
    }

    pub fn ir(&self) -> Complex64 {
        Complex64::i() * Complex64::from(self.r_param)
    }

    fn s(&self) -> Complex64 {
        self.s.into()
    }

    fn q(&self) -> Complex64 {
        self.q_exp.into()
    }

    pub fn validate(&self) -> Result<i64> {
        if self.l < 2 {
            return Err(Error::InvalidArgument(format!("weight l = {} must be at least 2", self.l)));
        }
        if self.d == 0 || !matches!(self.d % 4, 0 | 3) {
            return Err(Error::InvalidArgument(format!("D = {} must be positive and 0 or 3 mod 4", self.d)));
        }
        let l2 = self.derived_l2();
        if let Some(given) = self.l2 {
            if given != l2 {
                return Err(Error::InvalidArgument(format!("l2 = {given} but l, l1 give {l2}")));
            }
        }
        debug_assert_eq!((self.l1 - l2).rem_euclid(2), 0);
        Ok(l2)
    }

    /// `6s + 2l + l2 - q - 1`, whose real part must be positive.
    pub fn gate(&self) -> Result<Complex64> {
        let l2 = self.validate()?;
        let g = 6.0 * self.s() + (2 * self.l + l2 - 1) as f64 - self.q();
        if g.re > 0.0 {
            Ok(g)
        } else {
            Err(Error::DivergentParameters(format!("Re(6s + 2l + l2 - q - 1) = {} <= 0", g.re)))
        }
    }

    fn gamma_args(&self) -> [Complex64; 3] {
        let base = 3.0 * self.s() + self.l as f64 - self.q() / 2.0;
        let half_ir = self.ir() / 2.0;
        [base - 1.0 + half_ir, base - 1.0 - half_ir, base - self.l1 as f64 / 2.0 - 0.5]
    }

    /// `pi D^(-3s-l/2+q/2) (4 pi)^(-3s+3/2-l+q)`.
    fn power_part(&self) -> Complex64 {
        let s = self.s();
        let q = self.q();
        let l = self.l as f64;
        PI * real_pow(self.d as f64, -3.0 * s - l / 2.0 + q / 2.0) * real_pow(4.0 * PI, -3.0 * s + 1.5 - l + q)
    }
}

/// The closed Gamma form of the integral.
pub fn arch_zeta_closed(spec: &ArchSpec) -> Result<Complex64> {
    let gate = spec.gate()?;
    let l2 = spec.derived_l2();
    let [g1, g2, g3] = spec.gamma_args();
    let a_plus: Complex64 = spec.a_plus.into();
    Ok(i_pow(spec.l + l2) * a_plus * spec.power_part() / gate * gamma_quotient(&[g1, g2], &[g3])?)
}

/// The simplified form valid for `l >= l1`, where the linear denominator is
/// absorbed into the Gamma function.
pub fn arch_zeta_closed_simplified(spec: &ArchSpec) -> Result<Complex64> {
    if spec.l < spec.l1 {
        return Err(Error::InvalidArgument(format!(
            "simplified form needs l >= l1, got l = {}, l1 = {}",
            spec.l, spec.l1
        )));
    }
    spec.gate()?;
    let [g1, g2, g3] = spec.gamma_args();
    let a_plus: Complex64 = spec.a_plus.into();
    Ok(i_pow(spec.l - spec.l1) * a_plus / 2.0 * spec.power_part() * gamma_quotient(&[g1, g2], &[g3 + 1.0])?)
}

/// Direct quadrature of
/// `i^(l+l2) a+ pi D^(-3s/2-3/4+q/4) (4 pi)^(q/2) int_1^inf int_0^inf
///  lambda^(3s-3/2+l-q/2) u^(-3s-3/2+q/2-l-l2) W(4 pi lambda sqrt(D) u)
///  e^(-2 pi lambda sqrt(D) u) dlambda/lambda du`, with `W = W_{l1/2, ir/2}`.
///
/// Only `D = 0 mod 4` is integrated; `D = 3 mod 4` is `Unsupported`.
pub fn arch_zeta_quadrature(spec: &ArchSpec, tol: f64) -> Result<Complex64> {
    spec.gate()?;
    if spec.d % 4 != 0 {
        return Err(Error::Unsupported(format!(
            "quadrature is implemented for D = 0 mod 4 only (D = {})",
            spec.d
        )));
    }
    let l2 = spec.derived_l2();
    let s = spec.s();
    let q = spec.q();
    let l = spec.l as f64;
    let kappa = Complex64::new(spec.l1 as f64 / 2.0, 0.0);
    let mu = spec.ir() / 2.0;
    let lam_exp = 3.0 * s - 1.5 + l - q / 2.0;
    let u_exp = -3.0 * s - 1.5 + q / 2.0 - l - l2 as f64;
    let root_d = (spec.d as f64).sqrt();
    // fail early on unsupported Whittaker parameters
    whittaker_reduced(kappa, mu, 1.0)?;

    let mut failure: Option<Error> = None;
    let inner = |u: f64, failure: &mut Option<Error>| -> Complex64 {
        let c = 4.0 * PI * root_d * u;
        let ln_c = c.ln();
        // nodes placed in x = c lambda, the integrand still evaluated in lambda
        let r = integrate_semi_infinite_weighted(
            |x, lx, lw| {
                // lambda^(e-1) W(x) e^(-x/2) dlambda, W = e^(-x/2) x^kappa W_red
                let log_scale = (lam_exp - 1.0) * (lx - ln_c) + kappa * lx - x + lw - ln_c;
                match whittaker_reduced_scaled_ln(kappa, mu, lx, log_scale) {
                    Ok(v) => v,
                    Err(e) => {
                        failure.get_or_insert(e);
                        Complex64::new(0.0, 0.0)
                    }
                }
            },
            tol * 1e-2,
        );
        match r {
            Ok(v) => v,
            Err(e) => {
                failure.get_or_insert(e);
                Complex64::new(0.0, 0.0)
            }
        }
    };
    let outer = integrate_semi_infinite(|u| inner(u, &mut failure) * (u_exp * u.ln()).exp(), 1.0, tol)?;
    if let Some(e) = failure {
        return Err(e);
    }
    let a_plus: Complex64 = spec.a_plus.into();
    let pre = i_pow(spec.l + l2)
        * a_plus
        * PI
        * real_pow(spec.d as f64, -1.5 * s - 0.75 + q / 4.0)
        * real_pow(4.0 * PI, q / 2.0);
    Ok(pre * outer)
}

/// Quadrature against closed form for one spec.
#[derive(Debug, Clone, Serialize)]
pub struct ArchReport {
    pub spec: ArchSpec,
    pub l2: i64,
    pub closed: ComplexValue,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub simplified: Option<ComplexValue>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub simplified_rel_err: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quadrature: Option<ComplexValue>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rel_err: Option<f64>,
    /// Why the quadrature was skipped, if it was.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    pub tol: f64,
    pub pass: bool,
}

/// Closed form, simplified form (when `l >= l1`) and quadrature
/// (when `D = 0 mod 4`) side by side.
pub fn arch_verify(spec: &ArchSpec, tol: f64) -> Result<ArchReport> {
    let closed = arch_zeta_closed(spec)?;
    let simplified = if spec.l >= spec.l1 { Some(arch_zeta_closed_simplified(spec)?) } else { None };
    let simplified_rel_err = simplified.map(|v| rel_err(v, closed));
    let (quadrature, note) = match arch_zeta_quadrature(spec, 1e-10) {
        Ok(v) => (Some(v), None),
        Err(Error::Unsupported(m)) => (None, Some(m)),
        Err(e) => return Err(e),
    };
    let rel = quadrature.map(|v| rel_err(v, closed));
    let pass = rel.is_none_or(|e| e <= tol) && simplified_rel_err.is_none_or(|e| e <= 1e-12);
    Ok(ArchReport {
        spec: *spec,
        l2: spec.derived_l2(),
        closed: closed.into(),
        simplified: simplified.map(Into::into),
        simplified_rel_err,
        quadrature: quadrature.map(Into::into),
        rel_err: rel,
        note,
        tol,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn worked() -> ArchSpec {
        ArchSpec::discrete_series(10, 10, 4, c(7.0 / 6.0, 0.0))
    }

    /// Digamma by recurrence up to `Re z >= 10` and the asymptotic series.
    fn digamma(mut z: Complex64) -> Complex64 {
        let mut acc = c(0.0, 0.0);
        while z.re < 10.0 {
            acc -= 1.0 / z;
            z += 1.0;
        }
        let z2 = 1.0 / (z * z);
        acc + z.ln() - 0.5 / z - z2 * (1.0 / 12.0 - z2 * (1.0 / 120.0 - z2 * (1.0 / 252.0 - z2 / 240.0)))
    }

    #[test]
    fn l2_rule() {
        assert_eq!(worked().derived_l2(), -10);
        assert_eq!(ArchSpec::discrete_series(4, 10, 4, c(1.0, 0.0)).derived_l2(), 2);
        assert_eq!(ArchSpec::discrete_series(12, 7, 4, c(1.0, 0.0)).derived_l2(), -7);
        let mut bad = worked();
        bad.l2 = Some(3);
        assert!(arch_zeta_closed(&bad).is_err());
    }

    #[test]
    fn worked_spec_gamma_subterm() {
        let sp = worked();
        let [g1, g2, g3] = sp.gamma_args();
        assert!((g3 + 1.0 - c(9.0, 0.0)).norm() < 1e-12);
        assert!((g2 - g3).norm() < 1e-12);
        assert!((g1 - c(17.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn closed_forms_agree() {
        for sp in [worked(), ArchSpec::discrete_series(12, 7, 3, c(0.9, 0.4)), worked().with_s(c(4.0 / 3.0, 0.0))] {
            let a = arch_zeta_closed(&sp).unwrap();
            let b = arch_zeta_closed_simplified(&sp).unwrap();
            assert!(rel_err(b, a) < 1e-12);
        }
        assert!(arch_zeta_closed_simplified(&ArchSpec::discrete_series(4, 10, 4, c(2.0, 0.0))).is_err());
    }

    #[test]
    fn quadrature_matches_worked_spec() {
        for s in [7.0 / 6.0, 4.0 / 3.0] {
            let sp = worked().with_s(c(s, 0.0));
            let q = arch_zeta_quadrature(&sp, 1e-10).unwrap();
            let cl = arch_zeta_closed(&sp).unwrap();
            assert!(rel_err(q, cl) < 1e-6, "s = {s}: {q} vs {cl}");
        }
    }

    #[test]
    fn quadrature_off_the_real_axis() {
        let sp = ArchSpec::discrete_series(6, 9, 8, c(0.8, 1.3));
        let q = arch_zeta_quadrature(&sp, 1e-10).unwrap();
        let cl = arch_zeta_closed(&sp).unwrap();
        assert!(rel_err(q, cl) < 1e-6, "{q} vs {cl}");
    }

    #[test]
    fn gate_and_unsupported() {
        let sp = worked().with_s(c(-2.0, 0.0));
        assert!(matches!(arch_zeta_closed(&sp), Err(Error::DivergentParameters(_))));
        assert!(matches!(arch_zeta_quadrature(&sp, 1e-10), Err(Error::DivergentParameters(_))));
        let d3 = ArchSpec::discrete_series(10, 10, 3, c(7.0 / 6.0, 0.0));
        assert!(matches!(arch_zeta_quadrature(&d3, 1e-10), Err(Error::Unsupported(_))));
        let r = arch_verify(&d3, 1e-6).unwrap();
        assert!(r.pass && r.quadrature.is_none() && r.note.is_some());
        let mut bad = worked();
        bad.d = 5;
        assert!(matches!(arch_zeta_closed(&bad), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn linear_in_a_plus() {
        let sp = worked();
        let mut twice = sp;
        twice.a_plus = (Complex64::from(sp.a_plus) * 2.0).into();
        let a = arch_zeta_closed(&sp).unwrap();
        assert!(rel_err(arch_zeta_closed(&twice).unwrap(), 2.0 * a) < 1e-14);
    }

    #[test]
    fn symmetric_in_ir() {
        let mut sp = ArchSpec::discrete_series(8, 5, 12, c(1.2, -0.6));
        sp.r_param = c(0.7, -2.3).into();
        let mut flipped = sp;
        flipped.r_param = (-Complex64::from(sp.r_param)).into();
        let a = arch_zeta_closed(&sp).unwrap();
        assert!(rel_err(arch_zeta_closed(&flipped).unwrap(), a) < 1e-13);
    }

    #[test]
    fn holomorphic_in_s() {
        let mut sp = ArchSpec::discrete_series(9, 6, 7, c(0.0, 0.0));
        sp.q_exp = c(0.3, 0.2).into();
        sp.r_param = c(1.1, -0.4).into();
        for s0 in [c(1.1, 0.3), c(0.9, -0.8)] {
            let h = 1e-5;
            let f = |s: Complex64| arch_zeta_closed(&sp.with_s(s)).unwrap();
            let fd = (f(s0 + h) - f(s0 - h)) / (2.0 * h);
            let fd_im = (f(s0 + c(0.0, h)) - f(s0 - c(0.0, h))) / c(0.0, 2.0 * h);
            let sp0 = sp.with_s(s0);
            let [g1, g2, g3] = sp0.gamma_args();
            let gate = sp0.gate().unwrap();
            let log_deriv = -3.0 * (sp.d as f64).ln() - 3.0 * (4.0 * PI).ln() - 6.0 / gate
                + 3.0 * (digamma(g1) + digamma(g2) - digamma(g3));
            let exact = f(s0) * log_deriv;
            assert!(rel_err(fd, exact) < 1e-4, "{fd} vs {exact}");
            assert!(rel_err(fd_im, exact) < 1e-4);
        }
    }
}
