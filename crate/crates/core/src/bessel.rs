//! Spherical Bessel values `B(h(l,0))` from Sugano's generating function
//! `sum_l B(h(l,0)) y^l = H(y) / Q(y)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{check_q, QScalar, QScalarRepr};
use crate::series::{series_div, Poly, Series};

/// Satake parameters `gamma^(1..4)` of an unramified representation of GSp4.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SatakeParams {
    q: u64,
    gamma: [QScalar; 4],
}

impl SatakeParams {
    /// Checks invertibility and the pairing `gamma1 * gamma3 = gamma2 * gamma4`.
    pub fn new(q: u64, gamma: [QScalar; 4]) -> Result<Self> {
        check_q(q)?;
        for (i, g) in gamma.iter().enumerate() {
            if g.q() != q {
                return Err(Error::FieldMismatch(q, g.q()));
            }
            if !g.is_unit() {
                return Err(Error::InvalidSatake(format!(
                    "gamma^({}) = {g} is not invertible",
                    i + 1
                )));
            }
        }
        if &gamma[0] * &gamma[2] != &gamma[1] * &gamma[3] {
            return Err(Error::InvalidSatake(
                "gamma^(1) gamma^(3) must equal gamma^(2) gamma^(4)".into(),
            ));
        }
        Ok(SatakeParams { q, gamma })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn gamma(&self) -> &[QScalar; 4] {
        &self.gamma
    }

    /// `omega_pi(varpi) = gamma^(1) gamma^(3)`.
    pub fn central_character(&self) -> QScalar {
        &self.gamma[0] * &self.gamma[2]
    }

    /// Same representation, parameters listed with `gamma^(2)` and `gamma^(4)` swapped.
    pub fn swap_pair(&self) -> SatakeParams {
        let [a, b, c, d] = self.gamma.clone();
        SatakeParams { q: self.q, gamma: [a, d, c, b] }
    }

    pub fn to_repr(&self) -> SatakeRepr {
        SatakeRepr {
            gamma: self.gamma.iter().map(QScalar::to_repr).collect(),
        }
    }

    pub fn from_repr(q: u64, repr: &SatakeRepr) -> Result<Self> {
        let v: Vec<QScalar> = repr
            .gamma
            .iter()
            .map(|g| QScalar::from_repr(q, g))
            .collect::<Result<_>>()?;
        let gamma: [QScalar; 4] = v.try_into().map_err(|v: Vec<QScalar>| {
            Error::InvalidSatake(format!("expected 4 Satake parameters, got {}", v.len()))
        })?;
        SatakeParams::new(q, gamma)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SatakeRepr {
    pub gamma: Vec<QScalarRepr>,
}

/// Splitting type of the quadratic extension `L/F`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Legendre {
    Inert,
    Ramified,
    Split,
}

impl Legendre {
    pub fn symbol(self) -> i8 {
        match self {
            Legendre::Inert => -1,
            Legendre::Ramified => 0,
            Legendre::Split => 1,
        }
    }

    pub fn from_symbol(s: i8) -> Result<Self> {
        match s {
            -1 => Ok(Legendre::Inert),
            0 => Ok(Legendre::Ramified),
            1 => Ok(Legendre::Split),
            _ => Err(Error::InvalidBesselDatum(format!(
                "Legendre symbol must be -1, 0 or 1, got {s}"
            ))),
        }
    }
}

/// Values of the unramified character `Lambda` of `L^x` that enter `H(y)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BesselDatum {
    legendre: Legendre,
    /// `Lambda(varpi_L)`; absent in the inert case.
    lambda_varpi_l: Option<QScalar>,
    /// `Lambda(varpi varpi_L^-1)`; split case only.
    lambda_varpi_conj: Option<QScalar>,
    /// `Lambda(varpi)`.
    lambda_varpi: QScalar,
}

impl BesselDatum {
    pub fn inert(lambda_varpi: QScalar) -> Result<Self> {
        Self::new(Legendre::Inert, None, None, lambda_varpi)
    }

    /// `Lambda(varpi) = Lambda(varpi_L)^2`.
    pub fn ramified(lambda_varpi_l: QScalar) -> Result<Self> {
        let lv = &lambda_varpi_l * &lambda_varpi_l;
        Self::new(Legendre::Ramified, Some(lambda_varpi_l), None, lv)
    }

    /// `Lambda(varpi) = Lambda(varpi_L) * Lambda(varpi varpi_L^-1)`.
    pub fn split(lambda_varpi_l: QScalar, lambda_varpi_conj: QScalar) -> Result<Self> {
        let lv = &lambda_varpi_l * &lambda_varpi_conj;
        Self::new(Legendre::Split, Some(lambda_varpi_l), Some(lambda_varpi_conj), lv)
    }

    /// Validates the compatibility relations for the given splitting type.
    pub fn new(
        legendre: Legendre,
        lambda_varpi_l: Option<QScalar>,
        lambda_varpi_conj: Option<QScalar>,
        lambda_varpi: QScalar,
    ) -> Result<Self> {
        let q = lambda_varpi.q();
        let bad = |m: &str| Err(Error::InvalidBesselDatum(m.to_string()));
        for v in [&lambda_varpi_l, &lambda_varpi_conj].into_iter().flatten() {
            if v.q() != q {
                return Err(Error::FieldMismatch(q, v.q()));
            }
            if !v.is_unit() {
                return bad("character values must be invertible");
            }
        }
        if !lambda_varpi.is_unit() {
            return bad("Lambda(varpi) must be invertible");
        }
        match legendre {
            Legendre::Inert => {
                if lambda_varpi_l.is_some() || lambda_varpi_conj.is_some() {
                    return bad("inert case takes only Lambda(varpi)");
                }
            }
            Legendre::Ramified => {
                let Some(ll) = &lambda_varpi_l else {
                    return bad("ramified case needs Lambda(varpi_L)");
                };
                if lambda_varpi_conj.is_some() {
                    return bad("Lambda(varpi varpi_L^-1) is only used in the split case");
                }
                if &(ll * ll) != &lambda_varpi {
                    return bad("ramified case needs Lambda(varpi) = Lambda(varpi_L)^2");
                }
            }
            Legendre::Split => {
                let (Some(ll), Some(lc)) = (&lambda_varpi_l, &lambda_varpi_conj) else {
                    return bad("split case needs Lambda(varpi_L) and Lambda(varpi varpi_L^-1)");
                };
                if &(ll * lc) != &lambda_varpi {
                    return bad(
                        "split case needs Lambda(varpi) = Lambda(varpi_L) Lambda(varpi varpi_L^-1)",
                    );
                }
            }
        }
        Ok(BesselDatum {
            legendre,
            lambda_varpi_l,
            lambda_varpi_conj,
            lambda_varpi,
        })
    }

    pub fn legendre(&self) -> Legendre {
        self.legendre
    }

    pub fn q(&self) -> u64 {
        self.lambda_varpi.q()
    }

    pub fn lambda_varpi(&self) -> &QScalar {
        &self.lambda_varpi
    }

    pub fn lambda_varpi_l(&self) -> Option<&QScalar> {
        self.lambda_varpi_l.as_ref()
    }

    pub fn lambda_varpi_conj(&self) -> Option<&QScalar> {
        self.lambda_varpi_conj.as_ref()
    }

    /// Multiplies `Lambda` by the unramified character `varpi_L -> u`
    /// (inert: `Lambda(varpi) -> u^2 Lambda(varpi)`).
    pub fn rescale(&self, u: &QScalar) -> Result<BesselDatum> {
        match self.legendre {
            Legendre::Inert => BesselDatum::inert(&(u * u) * &self.lambda_varpi),
            Legendre::Ramified => BesselDatum::ramified(u * self.lambda_varpi_l.as_ref().unwrap()),
            Legendre::Split => BesselDatum::split(
                u * self.lambda_varpi_l.as_ref().unwrap(),
                u * self.lambda_varpi_conj.as_ref().unwrap(),
            ),
        }
    }

    pub fn to_repr(&self) -> BesselRepr {
        BesselRepr {
            legendre: self.legendre.symbol(),
            lambda_varpi_l: self.lambda_varpi_l.as_ref().map(QScalar::to_repr),
            lambda_varpi_conj: self.lambda_varpi_conj.as_ref().map(QScalar::to_repr),
            lambda_varpi: Some(self.lambda_varpi.to_repr()),
        }
    }

    /// `lambda_varpi` may be omitted in the ramified and split cases, where it
    /// is determined by the other values.
    pub fn from_repr(q: u64, repr: &BesselRepr) -> Result<Self> {
        let legendre = Legendre::from_symbol(repr.legendre)?;
        let get = |v: &Option<QScalarRepr>| -> Result<Option<QScalar>> {
            v.as_ref().map(|r| QScalar::from_repr(q, r)).transpose()
        };
        let ll = get(&repr.lambda_varpi_l)?;
        let lc = get(&repr.lambda_varpi_conj)?;
        let lv = match (get(&repr.lambda_varpi)?, legendre) {
            (Some(v), _) => v,
            (None, Legendre::Ramified) => match &ll {
                Some(x) => x * x,
                None => return Err(Error::InvalidBesselDatum("missing lambda_varpi_l".into())),
            },
            (None, Legendre::Split) => match (&ll, &lc) {
                (Some(x), Some(y)) => x * y,
                _ => {
                    return Err(Error::InvalidBesselDatum(
                        "missing lambda_varpi_l or lambda_varpi_conj".into(),
                    ))
                }
            },
            (None, Legendre::Inert) => {
                return Err(Error::InvalidBesselDatum("missing lambda_varpi".into()))
            }
        };
        BesselDatum::new(legendre, ll, lc, lv)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BesselRepr {
    pub legendre: i8,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda_varpi_l: Option<QScalarRepr>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda_varpi_conj: Option<QScalarRepr>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda_varpi: Option<QScalarRepr>,
}

/// Numerator `H(y)` of the generating function.
pub fn sugano_h(d: &BesselDatum, q: u64) -> Result<Poly> {
    if d.q() != q {
        return Err(Error::FieldMismatch(q, d.q()));
    }
    let q2 = QScalar::q_half_power(q, -4);
    let q4 = QScalar::q_half_power(q, -8);
    let one = QScalar::one(q);
    let zero = QScalar::zero(q);
    let coeffs = match d.legendre {
        Legendre::Inert => vec![one, zero, -(&q4 * &d.lambda_varpi)],
        Legendre::Ramified => {
            let ll = d.lambda_varpi_l.as_ref().expect("validated");
            vec![one, -(&q2 * ll)]
        }
        Legendre::Split => {
            let ll = d.lambda_varpi_l.as_ref().expect("validated");
            let lc = d.lambda_varpi_conj.as_ref().expect("validated");
            vec![one, -(&q2 * &(ll + lc)), &q4 * &d.lambda_varpi]
        }
    };
    Ok(Poly::new(q, coeffs))
}

/// Denominator `Q(y) = prod_i (1 - gamma^(i) q^(-3/2) y)`.
pub fn sugano_q(p: &SatakeParams) -> Poly {
    let q = p.q;
    let shift = QScalar::q_half_power(q, -3);
    let factors: Vec<Poly> = p
        .gamma
        .iter()
        .map(|g| Poly::one_minus(&(g * &shift)))
        .collect();
    Poly::product(q, &factors)
}

/// `B(h(l,0))` for `l = 0..=order`, as the coefficients of `H(y)/Q(y)`.
pub fn bessel_coeffs(p: &SatakeParams, d: &BesselDatum, order: usize) -> Result<Series> {
    let h = sugano_h(d, p.q)?;
    let qpoly = sugano_q(p);
    series_div(&h.to_series(order), &qpoly.to_series(order))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(q: u64, n: i64, d: i64) -> QScalar {
        QScalar::from_ratio(q, n, d)
    }

    fn satake(q: u64, g: [i64; 4]) -> SatakeParams {
        SatakeParams::new(q, g.map(|x| QScalar::from_int(q, x))).unwrap()
    }

    #[test]
    fn h_inert() {
        let d = BesselDatum::inert(QScalar::one(4)).unwrap();
        let h = sugano_h(&d, 4).unwrap();
        assert_eq!(h.coeffs(), &[QScalar::one(4), QScalar::zero(4), r(4, -1, 256)]);
    }

    #[test]
    fn h_split_is_square() {
        let d = BesselDatum::split(QScalar::one(4), QScalar::one(4)).unwrap();
        let h = sugano_h(&d, 4).unwrap();
        let f = Poly::one_minus(&r(4, 1, 16));
        assert_eq!(h, f.mul(&f));
    }

    #[test]
    fn h_ramified() {
        let d = BesselDatum::ramified(QScalar::from_int(4, -1)).unwrap();
        let h = sugano_h(&d, 4).unwrap();
        assert_eq!(h.coeffs(), &[QScalar::one(4), r(4, 1, 16)]);
    }

    #[test]
    fn q_products() {
        // q = 4 is a square, so q^(-3/2) stays formal and the expected
        // products are assembled from ring operations.
        let q = 4;
        let shift = QScalar::q_half_power(q, -3);
        let f = Poly::one_minus(&shift);
        let expect = Poly::product(q, &[f.clone(), f.clone(), f.clone(), f.clone()]);
        assert_eq!(sugano_q(&satake(q, [1, 1, 1, 1])), expect);

        let a = Poly::one_minus(&(&QScalar::from_int(q, 2) * &shift));
        let expect = Poly::product(q, &[a.clone(), a, f.clone(), f]);
        let qp = sugano_q(&satake(q, [2, 1, 1, 2]));
        assert_eq!(qp, expect);
        assert_eq!(qp.degree(), Some(4));
        assert!(qp.coeff(0).is_one());
        // specialized at sqrt(4) = 2: (1 - y/4)^2 (1 - y/8)^2
        let special: Vec<_> = qp.coeffs().iter().map(|c| c.specialize().unwrap()).collect();
        let plain = [(1, 1), (-3, 4), (13, 64), (-3, 128), (1, 1024)];
        for (c, (n, d)) in special.iter().zip(plain) {
            assert_eq!(c, &num_rational::BigRational::new(n.into(), d.into()));
        }
    }

    #[test]
    fn low_order_bessel_values() {
        for q in [2u64, 3, 4, 5, 9] {
            let d = BesselDatum::inert(QScalar::one(q)).unwrap();
            let b = bessel_coeffs(&satake(q, [1, 1, 1, 1]), &d, 4).unwrap();
            assert!(b.coeff(0).is_one());
            // 4 q^(-3/2)
            assert_eq!(b.coeff(1), &(&QScalar::from_int(q, 4) * &QScalar::q_half_power(q, -3)));
            // 10 q^-3 - q^-4
            let expect = &(&QScalar::from_int(q, 10) * &QScalar::q_half_power(q, -6))
                - &QScalar::q_half_power(q, -8);
            assert_eq!(b.coeff(2), &expect);
        }
    }

    #[test]
    fn datum_validation() {
        let q = 5;
        assert!(matches!(
            BesselDatum::new(Legendre::Ramified, Some(QScalar::from_int(q, 2)), None, QScalar::from_int(q, 3)),
            Err(Error::InvalidBesselDatum(_))
        ));
        assert!(matches!(
            BesselDatum::new(Legendre::Split, Some(QScalar::from_int(q, 2)), Some(QScalar::from_int(q, 3)), QScalar::from_int(q, 5)),
            Err(Error::InvalidBesselDatum(_))
        ));
        assert!(matches!(
            BesselDatum::new(Legendre::Inert, Some(QScalar::one(q)), None, QScalar::one(q)),
            Err(Error::InvalidBesselDatum(_))
        ));
        assert!(BesselDatum::inert(QScalar::zero(q)).is_err());
        assert!(Legendre::from_symbol(2).is_err());
    }

    #[test]
    fn satake_validation() {
        let q = 3;
        let g = [1, 2, 3, 4].map(|x| QScalar::from_int(q, x));
        assert!(matches!(SatakeParams::new(q, g), Err(Error::InvalidSatake(_))));
        let g = [0, 1, 1, 0].map(|x| QScalar::from_int(q, x));
        assert!(matches!(SatakeParams::new(q, g), Err(Error::InvalidSatake(_))));
        assert!(SatakeParams::new(1, [1, 1, 1, 1].map(|x| QScalar::from_int(2, x))).is_err());
    }

    #[test]
    fn repr_round_trip() {
        let q = 7;
        let d = BesselDatum::split(r(q, 2, 3), r(q, -5, 1)).unwrap();
        assert_eq!(BesselDatum::from_repr(q, &d.to_repr()).unwrap(), d);
        let json = r#"{"legendre": 0, "lambda_varpi_l": {"rat": "3"}}"#;
        let repr: BesselRepr = serde_json::from_str(json).unwrap();
        let d = BesselDatum::from_repr(q, &repr).unwrap();
        assert_eq!(d.lambda_varpi(), &QScalar::from_int(q, 9));
        let p = satake(q, [2, 3, 6, 4]);
        assert_eq!(SatakeParams::from_repr(q, &p.to_repr()).unwrap(), p);
    }

    fn nz() -> impl Strategy<Value = (i64, i64)> {
        (prop_oneof![-9i64..=-1, 1i64..=9], 1i64..=9)
    }

    fn draw(q: u64, g1: (i64, i64), g2: (i64, i64), g3: (i64, i64)) -> SatakeParams {
        let g1 = r(q, g1.0, g1.1);
        let g2 = r(q, g2.0, g2.1);
        let g3 = r(q, g3.0, g3.1);
        let g4 = &(&g1 * &g3) * &g2.inv().unwrap();
        SatakeParams::new(q, [g1, g2, g3, g4]).unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn coefficients_obey_q_recurrence(q in 2u64..10, g1 in nz(), g2 in nz(), g3 in nz(),
                                          l1 in nz(), l2 in nz(), case in 0u8..3) {
            let p = draw(q, g1, g2, g3);
            let d = match case {
                0 => BesselDatum::inert(r(q, l1.0, l1.1)).unwrap(),
                1 => BesselDatum::ramified(r(q, l1.0, l1.1)).unwrap(),
                _ => BesselDatum::split(r(q, l1.0, l1.1), r(q, l2.0, l2.1)).unwrap(),
            };
            let h = sugano_h(&d, q).unwrap();
            let c = sugano_q(&p);
            let b = bessel_coeffs(&p, &d, 12).unwrap();
            let deg_h = h.degree().unwrap();
            for l in (deg_h + 1)..=12 {
                let mut acc = QScalar::zero(q);
                for k in 0..=4.min(l) {
                    acc += &(&c.coeff(k) * b.coeff(l - k));
                }
                prop_assert!(acc.is_zero(), "recurrence fails at l = {}", l);
            }
        }

        #[test]
        fn swapping_the_pair_is_harmless(q in 2u64..10, g1 in nz(), g2 in nz(), g3 in nz(), l1 in nz()) {
            let p = draw(q, g1, g2, g3);
            let d = BesselDatum::inert(r(q, l1.0, l1.1)).unwrap();
            prop_assert_eq!(bessel_coeffs(&p, &d, 12).unwrap(),
                            bessel_coeffs(&p.swap_pair(), &d, 12).unwrap());
        }
    }
}
