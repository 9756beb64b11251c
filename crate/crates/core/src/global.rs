//! Global constants: the Bessel-period sum `a(Lambda)`, the archimedean
//! factor `Y_inf(s)` and the special-value constant `C`.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::arch::gamma::complex_gamma;
use crate::arch::{real_pow, ComplexValue};
use crate::error::{Error, Result};
use crate::scalar::QScalar;
use crate::zeta::{y_factor, InstanceRepr, LocalInstance};

/// One ideal class: `Lambda(t_j)` and the Fourier coefficient `a(S_j)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassDatum {
    pub lambda_t: ComplexValue,
    pub a_s: ComplexValue,
}

/// A prime dividing the level, with `Y_p` at the special point either given
/// directly or computed from a local instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BadPrime {
    pub p: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y_p: Option<ComplexValue>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub instance: Option<InstanceRepr>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GlobalSpec {
    pub l: i64,
    #[serde(rename = "D")]
    pub d: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a_lambda: Option<ComplexValue>,
    #[serde(default)]
    pub bad_primes: Vec<BadPrime>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub class_data: Option<Vec<ClassDatum>>,
}

impl GlobalSpec {
    pub fn new(l: i64, d: u64, a: Complex64) -> Self {
        GlobalSpec { l, d, a_lambda: Some(a.into()), bad_primes: Vec::new(), class_data: None }
    }

    pub fn validate(&self) -> Result<()> {
        if self.d == 0 || !matches!(self.d % 4, 0 | 3) {
            return Err(Error::InvalidArgument(format!("D = {} must be positive and 0 or 3 mod 4", self.d)));
        }
        Ok(())
    }

    /// `a(Lambda)`, given directly or summed from the class data.
    pub fn resolve_a_lambda(&self) -> Result<Complex64> {
        match (&self.a_lambda, &self.class_data) {
            (Some(a), _) => Ok((*a).into()),
            (None, Some(data)) => a_lambda(data),
            (None, None) => Err(Error::InvalidArgument("need a_lambda or class_data".into())),
        }
    }
}

/// `a(Lambda) = sum_j Lambda(t_j) a(S_j)`.
pub fn a_lambda(data: &[ClassDatum]) -> Result<Complex64> {
    if data.is_empty() {
        return Err(Error::InvalidArgument("empty class list".into()));
    }
    Ok(data
        .iter()
        .map(|c| Complex64::from(c.lambda_t) * Complex64::from(c.a_s))
        .sum())
}

/// `conj(a(Lambda)) pi D^(-3s-l/2) (4 pi)^(-3s+3/2-3l/2) Gamma(3s+3l/2-3/2) / (6s+l-1)`.
pub fn y_infty(s: Complex64, spec: &GlobalSpec) -> Result<Complex64> {
    spec.validate()?;
    let a = spec.resolve_a_lambda()?;
    let l = spec.l as f64;
    let lin = 6.0 * s + l - 1.0;
    if lin.norm() < 1e-12 {
        return Err(Error::PoleError { re: s.re, im: s.im });
    }
    Ok(a.conj()
        * PI
        * real_pow(spec.d as f64, -3.0 * s - l / 2.0)
        * real_pow(4.0 * PI, -3.0 * s + 1.5 - 1.5 * l)
        * complex_gamma(3.0 * s + 1.5 * l - 1.5)?
        / lin)
}

/// `T = q^(-3s)` at `s = l/6 - 1/2`, i.e. `q^(-(l-3)/2)`.
pub fn special_point(q: u64, l: i64) -> QScalar {
    QScalar::q_half_power(q, 3 - l)
}

/// `Y_p(l/6 - 1/2)` of a local instance, exactly.
pub fn y_p_at_special_point(inst: &LocalInstance, l: i64) -> Result<QScalar> {
    y_factor(inst)?.eval(&special_point(inst.q(), l))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BadPrimeValue {
    pub p: u64,
    pub y_p: ComplexValue,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub y_p_exact: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpecialValueConstant {
    pub l: i64,
    #[serde(rename = "D")]
    pub d: u64,
    pub a_lambda: ComplexValue,
    /// `D^-(l-1) 2^(6-4l) (2l-5)!`; the constant is this times `sqrt(D)`,
    /// `conj(a(Lambda))` and the `Y_p`.
    pub mantissa_exact: String,
    pub mantissa: f64,
    pub bad_primes: Vec<BadPrimeValue>,
    pub value: ComplexValue,
}

fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

fn pow_rational(base: u64, exp: i64) -> BigRational {
    let b = BigRational::from_integer(BigInt::from(base));
    if exp >= 0 {
        num_traits::pow(b, exp as usize)
    } else {
        num_traits::pow(b.recip(), (-exp) as usize)
    }
}

/// `D^-(l-1) 2^(6-4l) (2l-5)!`.
pub fn constant_mantissa(l: i64, d: u64) -> Result<BigRational> {
    if l < 3 {
        return Err(Error::InvalidArgument(format!("l = {l}: (2l-5)! needs l >= 3")));
    }
    Ok(pow_rational(d, 1 - l) * pow_rational(2, 6 - 4 * l) * BigRational::from_integer(factorial((2 * l - 5) as u64)))
}

/// `C = conj(a(Lambda)) D^(-l+3/2) 2^(-4l+6) (2l-5)! prod_p Y_p(l/6 - 1/2)`.
pub fn special_value_constant(spec: &GlobalSpec) -> Result<SpecialValueConstant> {
    spec.validate()?;
    let a = spec.resolve_a_lambda()?;
    let mantissa_exact = constant_mantissa(spec.l, spec.d)?;
    let mantissa = mantissa_exact
        .to_f64()
        .ok_or_else(|| Error::InvalidArgument("mantissa is out of f64 range".into()))?;
    let mut bad = Vec::with_capacity(spec.bad_primes.len());
    let mut product = Complex64::new(1.0, 0.0);
    for bp in &spec.bad_primes {
        let (y, exact) = match (&bp.y_p, &bp.instance) {
            (Some(v), _) => (Complex64::from(*v), None),
            (None, Some(inst)) => {
                let inst = LocalInstance::from_repr(inst)?;
                let y = y_p_at_special_point(&inst, spec.l)?;
                (Complex64::new(y.to_f64(), 0.0), Some(y.to_string()))
            }
            (None, None) => {
                return Err(Error::InvalidArgument(format!("no Y_p given for bad prime {}", bp.p)));
            }
        };
        product *= y;
        bad.push(BadPrimeValue { p: bp.p, y_p: y.into(), y_p_exact: exact });
    }
    let value = a.conj() * mantissa * (spec.d as f64).sqrt() * product;
    Ok(SpecialValueConstant {
        l: spec.l,
        d: spec.d,
        a_lambda: a.into(),
        mantissa_exact: mantissa_exact.to_string(),
        mantissa,
        bad_primes: bad,
        value: value.into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arch::{arch_zeta_closed, rel_err, ArchSpec};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn cd(lt: Complex64, a: Complex64) -> ClassDatum {
        ClassDatum { lambda_t: lt.into(), a_s: a.into() }
    }

    #[test]
    fn a_lambda_sums() {
        let x = c(0.3, -1.2);
        assert_eq!(a_lambda(&[cd(c(1.0, 0.0), x)]).unwrap(), x);
        assert_eq!(a_lambda(&[cd(c(1.0, 0.0), x), cd(c(-1.0, 0.0), x)]).unwrap(), c(0.0, 0.0));
        assert!(matches!(a_lambda(&[]), Err(Error::InvalidArgument(_))));
        let data = [cd(c(0.5, 0.5), c(2.0, 1.0)), cd(c(-0.2, 0.9), c(0.1, -3.0)), cd(c(1.0, 0.0), c(-1.5, 0.25))];
        let mut direct = c(0.0, 0.0);
        for d in &data {
            direct += Complex64::from(d.lambda_t) * Complex64::from(d.a_s);
        }
        assert!((a_lambda(&data).unwrap() - direct).norm() < 1e-15);
    }

    #[test]
    fn y_infty_worked_value() {
        let spec = GlobalSpec::new(10, 3, c(1.0, 0.0));
        let got = y_infty(c(7.0 / 6.0, 0.0), &spec).unwrap();
        let want = PI * 3f64.powf(-8.5) * (4.0 * PI).powi(-17) * 20_922_789_888_000.0 / 16.0;
        assert!((got.re / want - 1.0).abs() < 1e-12 && got.im.abs() < 1e-12 * want);
        let doubled = y_infty(c(7.0 / 6.0, 0.0), &GlobalSpec::new(10, 3, c(2.0, 0.0))).unwrap();
        assert!((doubled.norm() / got.norm() - 2.0).abs() < 1e-14);
        assert!(matches!(y_infty(c(-1.5, 0.0), &spec), Err(Error::PoleError { .. })));
    }

    #[test]
    fn y_infty_matches_arch_closed_form() {
        let a = c(0.4, -0.9);
        for (l, d, s) in [(10, 3, c(7.0 / 6.0, 0.0)), (12, 4, c(0.7, 1.1)), (11, 8, c(1.3, -0.4))] {
            let spec = GlobalSpec::new(l, d, a);
            let y = y_infty(s, &spec).unwrap();
            let arch = arch_zeta_closed(&ArchSpec::discrete_series(l, l, d, s)).unwrap();
            assert!(rel_err(y, arch * a.conj()) < 1e-10);
        }
    }

    #[test]
    fn constant_worked_value() {
        let sv = special_value_constant(&GlobalSpec::new(10, 3, c(1.0, 0.0))).unwrap();
        let oracle = BigRational::new(BigInt::from(1_307_674_368_000u64), BigInt::from(19683u64) * BigInt::from(1u64 << 34));
        assert_eq!(sv.mantissa_exact, oracle.to_string());
        let want = 3f64.powf(-8.5) * 2f64.powi(-34) * 1_307_674_368_000.0;
        assert!((sv.value.re / want - 1.0).abs() < 1e-14);
        assert!(constant_mantissa(2, 3).is_err());
    }

    #[test]
    fn bad_primes() {
        let mut spec = GlobalSpec::new(10, 3, c(1.0, 0.0));
        let base = special_value_constant(&spec).unwrap().value;
        spec.bad_primes.push(BadPrime { p: 5, y_p: Some(c(1.0, 0.0).into()), instance: None });
        assert_eq!(special_value_constant(&spec).unwrap().value, base);
        spec.bad_primes.push(BadPrime { p: 7, y_p: Some(c(0.5, 0.25).into()), instance: None });
        spec.bad_primes.push(BadPrime { p: 11, y_p: Some(c(-2.0, 1.0).into()), instance: None });
        let forward = Complex64::from(special_value_constant(&spec).unwrap().value);
        spec.bad_primes.reverse();
        let backward = Complex64::from(special_value_constant(&spec).unwrap().value);
        assert!(rel_err(forward, backward) < 1e-15);
        assert!(rel_err(forward, Complex64::from(base) * c(0.5, 0.25) * c(-2.0, 1.0)) < 1e-15);
        spec.bad_primes.push(BadPrime { p: 13, y_p: None, instance: None });
        assert!(matches!(special_value_constant(&spec), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn y_p_from_instance() {
        use crate::bessel::{BesselDatum, SatakeParams};
        use crate::gl2::Gl2Local;
        let q = 4;
        let inst = LocalInstance::new(
            SatakeParams::new(q, [2, 1, 1, 2].map(|x| QScalar::from_int(q, x))).unwrap(),
            BesselDatum::inert(QScalar::from_int(q, 2)).unwrap(),
            Gl2Local::ramified_ps(QScalar::one(q), QScalar::from_int(q, 3), 1, false).unwrap(),
            12,
        )
        .unwrap();
        // Y = (1 - T^2/24)^-1 and T = 4^(-7/2) = 1/128 at l = 10
        let y = y_p_at_special_point(&inst, 10).unwrap();
        assert_eq!(special_point(q, 10).specialize().unwrap(), BigRational::new(1.into(), 128.into()));
        let t2 = 1.0 / (128.0f64 * 128.0);
        assert!((y.to_f64() - 1.0 / (1.0 - t2 / 24.0)).abs() < 1e-15);
        let mut spec = GlobalSpec::new(10, 3, c(1.0, 0.0));
        spec.bad_primes.push(BadPrime { p: 2, y_p: None, instance: Some(inst.to_repr()) });
        let sv = special_value_constant(&spec).unwrap();
        assert!(sv.bad_primes[0].y_p_exact.is_some());
    }

    #[test]
    fn spec_json() {
        let text = r#"{"l": 10, "D": 3, "class_data": [{"lambda_t": {"re": 1}, "a_s": {"re": 2, "im": 1}}],
                       "bad_primes": [{"p": 5, "y_p": {"re": 1}}]}"#;
        let spec: GlobalSpec = serde_json::from_str(text).unwrap();
        assert_eq!(spec.resolve_a_lambda().unwrap(), c(2.0, 1.0));
        assert!(serde_json::from_str::<GlobalSpec>(r#"{"l": 10, "D": 3, "bogus": 1}"#).is_err());
    }
}
