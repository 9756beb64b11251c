//! Local GL2 data: newform Whittaker values along `diag(varpi^l, 1)` and the
//! dimension counts of fixed vectors.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{QScalar, QScalarRepr};

/// A generic irreducible representation `tau` of `GL2(F)`, recorded through
/// the character values its newform depends on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Gl2Local {
    /// `alpha x beta` with both characters unramified; conductor exponent 0.
    UnramifiedPS { alpha: QScalar, beta: QScalar },
    /// `alpha x beta` with `alpha` unramified and `beta` ramified.
    ///
    /// `beta_chi_unramified` records whether `beta chi_{L/F}` is unramified;
    /// it only matters when `L/F` is ramified.
    RamifiedPSUnramAlpha {
        alpha: QScalar,
        beta: QScalar,
        conductor: u32,
        beta_chi_unramified: bool,
    },
    /// `Omega St` with `Omega` unramified; conductor exponent 1.
    SteinbergUnramified { omega: QScalar },
    /// Supercuspidals, ramified twists of Steinberg, and principal series with
    /// both characters ramified.
    RamifiedOther { omega_tau: QScalar, conductor: u32 },
}

impl Gl2Local {
    pub fn unramified_ps(alpha: QScalar, beta: QScalar) -> Result<Self> {
        Self::checked(Gl2Local::UnramifiedPS { alpha, beta })
    }

    pub fn ramified_ps(
        alpha: QScalar,
        beta: QScalar,
        conductor: u32,
        beta_chi_unramified: bool,
    ) -> Result<Self> {
        Self::checked(Gl2Local::RamifiedPSUnramAlpha {
            alpha,
            beta,
            conductor,
            beta_chi_unramified,
        })
    }

    pub fn steinberg(omega: QScalar) -> Result<Self> {
        Self::checked(Gl2Local::SteinbergUnramified { omega })
    }

    pub fn ramified_other(omega_tau: QScalar, conductor: u32) -> Result<Self> {
        Self::checked(Gl2Local::RamifiedOther { omega_tau, conductor })
    }

    fn checked(rep: Gl2Local) -> Result<Self> {
        let values: Vec<&QScalar> = match &rep {
            Gl2Local::UnramifiedPS { alpha, beta } => vec![alpha, beta],
            Gl2Local::RamifiedPSUnramAlpha { alpha, beta, conductor, .. } => {
                if *conductor == 0 {
                    return Err(Error::InvalidGl2(
                        "a ramified beta forces conductor exponent >= 1".into(),
                    ));
                }
                vec![alpha, beta]
            }
            Gl2Local::SteinbergUnramified { omega } => vec![omega],
            Gl2Local::RamifiedOther { omega_tau, conductor } => {
                if *conductor == 0 {
                    return Err(Error::InvalidGl2(
                        "ramified representations have conductor exponent >= 1".into(),
                    ));
                }
                vec![omega_tau]
            }
        };
        let q = values[0].q();
        for v in values {
            if v.q() != q {
                return Err(Error::FieldMismatch(q, v.q()));
            }
            if !v.is_unit() {
                return Err(Error::InvalidGl2(format!("character value {v} is not invertible")));
            }
        }
        Ok(rep)
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Gl2Local::UnramifiedPS { .. } => "UnramifiedPS",
            Gl2Local::RamifiedPSUnramAlpha { .. } => "RamifiedPSUnramAlpha",
            Gl2Local::SteinbergUnramified { .. } => "SteinbergUnramified",
            Gl2Local::RamifiedOther { .. } => "RamifiedOther",
        }
    }

    pub fn q(&self) -> u64 {
        match self {
            Gl2Local::UnramifiedPS { alpha, .. } | Gl2Local::RamifiedPSUnramAlpha { alpha, .. } => {
                alpha.q()
            }
            Gl2Local::SteinbergUnramified { omega } => omega.q(),
            Gl2Local::RamifiedOther { omega_tau, .. } => omega_tau.q(),
        }
    }

    /// `omega_tau(varpi)`: `alpha beta`, `Omega^2`, or the supplied value.
    pub fn omega_tau(&self) -> QScalar {
        match self {
            Gl2Local::UnramifiedPS { alpha, beta }
            | Gl2Local::RamifiedPSUnramAlpha { alpha, beta, .. } => alpha * beta,
            Gl2Local::SteinbergUnramified { omega } => omega * omega,
            Gl2Local::RamifiedOther { omega_tau, .. } => omega_tau.clone(),
        }
    }

    pub fn conductor(&self) -> u32 {
        match self {
            Gl2Local::UnramifiedPS { .. } => 0,
            Gl2Local::SteinbergUnramified { .. } => 1,
            Gl2Local::RamifiedPSUnramAlpha { conductor, .. }
            | Gl2Local::RamifiedOther { conductor, .. } => *conductor,
        }
    }

    pub fn to_repr(&self) -> Gl2Repr {
        let mut r = Gl2Repr {
            kind: self.kind_name().to_string(),
            alpha: None,
            beta: None,
            omega: None,
            omega_tau: None,
            n: None,
            beta_chi_unramified: None,
        };
        match self {
            Gl2Local::UnramifiedPS { alpha, beta } => {
                r.alpha = Some(alpha.to_repr());
                r.beta = Some(beta.to_repr());
            }
            Gl2Local::RamifiedPSUnramAlpha { alpha, beta, conductor, beta_chi_unramified } => {
                r.alpha = Some(alpha.to_repr());
                r.beta = Some(beta.to_repr());
                r.n = Some(*conductor);
                r.beta_chi_unramified = Some(*beta_chi_unramified);
            }
            Gl2Local::SteinbergUnramified { omega } => r.omega = Some(omega.to_repr()),
            Gl2Local::RamifiedOther { omega_tau, conductor } => {
                r.omega_tau = Some(omega_tau.to_repr());
                r.n = Some(*conductor);
            }
        }
        r
    }

    pub fn from_repr(q: u64, r: &Gl2Repr) -> Result<Self> {
        let need = |v: &Option<QScalarRepr>, name: &str| -> Result<QScalar> {
            match v {
                Some(x) => QScalar::from_repr(q, x),
                None => Err(Error::InvalidGl2(format!("kind {} needs field {name:?}", r.kind))),
            }
        };
        let need_n = || {
            r.n.ok_or_else(|| Error::InvalidGl2(format!("kind {} needs field \"n\"", r.kind)))
        };
        match r.kind.as_str() {
            "UnramifiedPS" => {
                if r.n.is_some_and(|n| n != 0) {
                    return Err(Error::InvalidGl2("UnramifiedPS has conductor exponent 0".into()));
                }
                Gl2Local::unramified_ps(need(&r.alpha, "alpha")?, need(&r.beta, "beta")?)
            }
            "RamifiedPSUnramAlpha" => Gl2Local::ramified_ps(
                need(&r.alpha, "alpha")?,
                need(&r.beta, "beta")?,
                need_n()?,
                r.beta_chi_unramified.unwrap_or(false),
            ),
            "SteinbergUnramified" => {
                if r.n.is_some_and(|n| n != 1) {
                    return Err(Error::InvalidGl2(
                        "SteinbergUnramified has conductor exponent 1".into(),
                    ));
                }
                Gl2Local::steinberg(need(&r.omega, "omega")?)
            }
            "RamifiedOther" => {
                Gl2Local::ramified_other(need(&r.omega_tau, "omega_tau")?, need_n()?)
            }
            other => Err(Error::InvalidGl2(format!("unknown kind {other:?}"))),
        }
    }
}

/// JSON form; fields a kind does not use are omitted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gl2Repr {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<QScalarRepr>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<QScalarRepr>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega: Option<QScalarRepr>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega_tau: Option<QScalarRepr>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta_chi_unramified: Option<bool>,
}

/// Value of the normalized newform `W^(0)` at `diag(varpi^l, 1)`.
pub fn newform_value(rep: &Gl2Local, l: i64) -> QScalar {
    let q = rep.q();
    if l < 0 {
        return QScalar::zero(q);
    }
    let pow = |x: &QScalar| x.pow(l).expect("non-negative exponent");
    match rep {
        Gl2Local::RamifiedOther { .. } => {
            if l == 0 {
                QScalar::one(q)
            } else {
                QScalar::zero(q)
            }
        }
        Gl2Local::RamifiedPSUnramAlpha { beta, .. } => pow(&(beta * &QScalar::q_half_power(q, -1))),
        Gl2Local::SteinbergUnramified { omega } => pow(&(omega * &QScalar::q_half_power(q, -2))),
        Gl2Local::UnramifiedPS { alpha, beta } => {
            // complete homogeneous sum alpha^k beta^(l-k)
            let mut sum = QScalar::zero(q);
            let mut a_pow = QScalar::one(q);
            for k in 0..=l {
                sum += &(&a_pow * &beta.pow(l - k).expect("non-negative exponent"));
                a_pow = &a_pow * alpha;
            }
            &QScalar::q_half_power(q, -l) * &sum
        }
    }
}

fn non_negative(n: i64, r: i64) -> Result<()> {
    if n < 0 || r < 0 {
        Err(Error::InvalidArgument(format!(
            "levels must be non-negative (n = {n}, r = {r})"
        )))
    } else {
        Ok(())
    }
}

/// `dim V_tau(r)` for a representation of conductor exponent `n`.
pub fn newform_space_dim(n: i64, r: i64) -> Result<u64> {
    non_negative(n, r)?;
    Ok(if r >= n { (r - n + 1) as u64 } else { 0 })
}

/// Dimension of the `K^H Gamma(P^r)`-invariants in the induced representation.
pub fn induced_invariant_dim(n: i64, r: i64) -> Result<u64> {
    non_negative(n, r)?;
    Ok(if r >= n {
        let k = (r - n) as u64;
        (k + 1) * (k + 2) / 2
    } else {
        0
    })
}

/// `induced_invariant_dim(n, r)` and `sum_{m=0}^{r} newform_space_dim(n, r - m)`.
pub fn dimension_identity(n: i64, r: i64) -> Result<(u64, u64)> {
    let sum = (0..=r).map(|m| newform_space_dim(n, r - m)).sum::<Result<u64>>()?;
    Ok((induced_invariant_dim(n, r)?, sum))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(q: u64, n: i64, d: i64) -> QScalar {
        QScalar::from_ratio(q, n, d)
    }

    #[test]
    fn case_values() {
        let q = 5;
        let beta = r(q, 3, 2);
        let rep = Gl2Local::ramified_ps(r(q, 7, 1), beta.clone(), 2, false).unwrap();
        let expect = (&beta * &QScalar::q_half_power(q, -1)).pow(3).unwrap();
        assert_eq!(newform_value(&rep, 3), expect);

        let (a, b) = (r(q, 2, 3), r(q, -4, 1));
        let rep = Gl2Local::unramified_ps(a.clone(), b.clone()).unwrap();
        assert_eq!(newform_value(&rep, 1), &QScalar::q_half_power(q, -1) * &(&a + &b));

        let rep = Gl2Local::steinberg(r(q, 2, 1)).unwrap();
        assert_eq!(newform_value(&rep, 2), r(q, 4, 25));

        let rep = Gl2Local::ramified_other(r(q, 3, 1), 3).unwrap();
        assert!(newform_value(&rep, 0).is_one());
        assert!(newform_value(&rep, 1).is_zero());
    }

    #[test]
    fn negative_index_vanishes() {
        let q = 3;
        for rep in [
            Gl2Local::unramified_ps(r(q, 2, 1), r(q, 5, 1)).unwrap(),
            Gl2Local::ramified_ps(r(q, 2, 1), r(q, 5, 1), 1, true).unwrap(),
            Gl2Local::steinberg(r(q, 2, 1)).unwrap(),
            Gl2Local::ramified_other(r(q, 2, 1), 4).unwrap(),
        ] {
            assert!(newform_value(&rep, -2).is_zero());
            assert!(newform_value(&rep, 0).is_one());
        }
    }

    #[test]
    fn dimension_examples() {
        assert_eq!(newform_space_dim(0, 0).unwrap(), 1);
        assert_eq!(newform_space_dim(3, 2).unwrap(), 0);
        assert_eq!(newform_space_dim(2, 5).unwrap(), 4);
        assert_eq!(induced_invariant_dim(2, 4).unwrap(), 6);
        assert_eq!(induced_invariant_dim(1, 0).unwrap(), 0);
        assert_eq!(induced_invariant_dim(0, 0).unwrap(), 1);
        assert!(matches!(newform_space_dim(-1, 2), Err(Error::InvalidArgument(_))));
        assert!(matches!(induced_invariant_dim(1, -2), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn invariant_dim_is_sum_of_newform_dims() {
        for n in 0..=6 {
            for rr in n..=12 {
                let sum: u64 = (0..=rr).map(|m| newform_space_dim(n, rr - m).unwrap()).sum();
                assert_eq!(induced_invariant_dim(n, rr).unwrap(), sum, "n={n} r={rr}");
            }
        }
    }

    #[test]
    fn validation() {
        let q = 4;
        assert!(Gl2Local::ramified_ps(r(q, 1, 1), r(q, 1, 1), 0, false).is_err());
        assert!(Gl2Local::ramified_other(r(q, 1, 1), 0).is_err());
        assert!(Gl2Local::steinberg(QScalar::zero(q)).is_err());
        // 2 - sqrt(4) is a zero divisor
        let zd = &QScalar::from_int(q, 2) - &QScalar::sqrt_q(q);
        assert!(Gl2Local::unramified_ps(zd, r(q, 1, 1)).is_err());
    }

    #[test]
    fn repr_round_trip_and_schema() {
        let q = 7;
        for rep in [
            Gl2Local::unramified_ps(r(q, 2, 1), r(q, 5, 3)).unwrap(),
            Gl2Local::ramified_ps(r(q, 2, 1), r(q, 5, 1), 2, true).unwrap(),
            Gl2Local::steinberg(r(q, -2, 1)).unwrap(),
            Gl2Local::ramified_other(r(q, 2, 9), 4).unwrap(),
        ] {
            assert_eq!(Gl2Local::from_repr(q, &rep.to_repr()).unwrap(), rep);
        }
        let json = serde_json::to_value(Gl2Local::steinberg(r(q, 3, 1)).unwrap().to_repr()).unwrap();
        assert_eq!(json, serde_json::json!({"kind": "SteinbergUnramified", "omega": {"rat": "3", "sqrt": "0"}}));
        let bad: Gl2Repr = serde_json::from_str(r#"{"kind": "Mystery"}"#).unwrap();
        assert!(Gl2Local::from_repr(q, &bad).is_err());
        let missing: Gl2Repr = serde_json::from_str(r#"{"kind": "RamifiedOther", "n": 2}"#).unwrap();
        assert!(Gl2Local::from_repr(q, &missing).is_err());
    }

    proptest! {
        #[test]
        fn unramified_values_symmetric(q in 2u64..10, a in 1i64..9, b in -9i64..-1, l in 0i64..10) {
            let x = Gl2Local::unramified_ps(QScalar::from_int(q, a), QScalar::from_int(q, b)).unwrap();
            let y = Gl2Local::unramified_ps(QScalar::from_int(q, b), QScalar::from_int(q, a)).unwrap();
            prop_assert_eq!(newform_value(&x, l), newform_value(&y, l));
        }
    }
}
