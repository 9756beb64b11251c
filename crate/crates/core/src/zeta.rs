//! The non-archimedean zeta integral `Z(s, W#, B)` in the variable
//! `T = q^(-3s)`.
//!
//! Three routes are kept apart so that they can check each other:
//!
//! * [`zeta_series_lhs`] sums `B(h(l,0)) W#(eta h(l,0), s) q^(3l)` term by
//!   term, with the central character `omega_tau(varpi)` in the weight.
//! * [`hq_substituted`] expands `H(y)/Q(y)` after substituting `y = c T`.
//! * [`zeta_closed_rhs`] assembles the L-factor quotient times `Y(s)`.

use serde::{Deserialize, Serialize};

use crate::bessel::{bessel_coeffs, sugano_h, sugano_q, BesselDatum, BesselRepr, Legendre, SatakeParams, SatakeRepr};
use crate::error::{Error, Result};
use crate::gl2::{newform_value, Gl2Local, Gl2Repr};
use crate::scalar::{QScalar, QScalarRepr};
use crate::series::{ratfn_to_series, series_div, series_equal, Poly, RatFn, Series, SeriesComparison, DEFAULT_ORDER};

/// All local data of one zeta integral.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalInstance {
    satake: SatakeParams,
    bessel: BesselDatum,
    rep: Gl2Local,
    order: usize,
}

impl LocalInstance {
    /// Enforces a common `q` and `Lambda(varpi) = omega_pi(varpi)`.
    pub fn new(satake: SatakeParams, bessel: BesselDatum, rep: Gl2Local, order: usize) -> Result<Self> {
        let q = satake.q();
        for other in [bessel.q(), rep.q()] {
            if other != q {
                return Err(Error::FieldMismatch(q, other));
            }
        }
        if bessel.lambda_varpi() != &satake.central_character() {
            return Err(Error::InvalidBesselDatum(format!(
                "Lambda(varpi) = {} must equal omega_pi(varpi) = {}",
                bessel.lambda_varpi(),
                satake.central_character()
            )));
        }
        Ok(LocalInstance { satake, bessel, rep, order })
    }

    pub fn q(&self) -> u64 {
        self.satake.q()
    }

    pub fn satake(&self) -> &SatakeParams {
        &self.satake
    }

    pub fn bessel(&self) -> &BesselDatum {
        &self.bessel
    }

    pub fn rep(&self) -> &Gl2Local {
        &self.rep
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn with_order(&self, order: usize) -> LocalInstance {
        LocalInstance { order, ..self.clone() }
    }

    pub fn case(&self) -> LocalCase {
        LocalCase::of(&self.rep)
    }

    pub fn to_repr(&self) -> InstanceRepr {
        InstanceRepr {
            q: self.q(),
            satake: self.satake.to_repr(),
            bessel: self.bessel.to_repr(),
            rep: self.rep.to_repr(),
            order: Some(self.order),
        }
    }

    pub fn from_repr(r: &InstanceRepr) -> Result<Self> {
        let satake = SatakeParams::from_repr(r.q, &r.satake)?;
        let bessel = BesselDatum::from_repr(r.q, &r.bessel)?;
        let rep = Gl2Local::from_repr(r.q, &r.rep)?;
        LocalInstance::new(satake, bessel, rep, r.order.unwrap_or(DEFAULT_ORDER))
    }
}

/// Parameter-file schema of one instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceRepr {
    pub q: u64,
    pub satake: SatakeRepr,
    pub bessel: BesselRepr,
    pub rep: Gl2Repr,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<usize>,
}

/// Which of the local computations applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LocalCase {
    /// Both characters of `tau` unramified: closed form only.
    Unramified,
    /// Newform supported at `l = 0` only.
    Case1,
    /// `alpha` unramified, `beta` ramified.
    Case2,
    /// Unramified twist of Steinberg.
    Case3,
}

impl LocalCase {
    pub fn of(rep: &Gl2Local) -> Self {
        match rep {
            Gl2Local::UnramifiedPS { .. } => LocalCase::Unramified,
            Gl2Local::RamifiedOther { .. } => LocalCase::Case1,
            Gl2Local::RamifiedPSUnramAlpha { .. } => LocalCase::Case2,
            Gl2Local::SteinbergUnramified { .. } => LocalCase::Case3,
        }
    }
}

fn unsupported(op: &str, rep: &Gl2Local) -> Error {
    Error::UnsupportedCase(format!("{op} is not defined for {}", rep.kind_name()))
}

/// `chi(varpi) = (omega_pi omega_tau)^-1 (varpi)`, using `Lambda|F^x = omega_pi`.
fn chi_varpi(satake: &SatakeParams, rep: &Gl2Local) -> Result<QScalar> {
    (&satake.central_character() * &rep.omega_tau()).inv()
}

/// Term-by-term sum of the zeta integral over `l >= 0` (only `m = 0`
/// contributes once the conductor is positive).
pub fn zeta_series_lhs(inst: &LocalInstance) -> Result<Series> {
    if inst.case() == LocalCase::Unramified {
        return Err(Error::UnsupportedCase(
            "the m = 0 reduction needs a ramified tau; use unramified_closed".into(),
        ));
    }
    let q = inst.q();
    let b = bessel_coeffs(&inst.satake, &inst.bessel, inst.order)?;
    let chi = chi_varpi(&inst.satake, &inst.rep)?;
    let mut chi_pow = QScalar::one(q);
    let mut coeffs = Vec::with_capacity(inst.order + 1);
    for l in 0..=inst.order {
        let li = l as i64;
        // |N(varpi^l) varpi^-l|^(3/2) = q^(-3l/2); the q^(-3sl) part is T^l
        let weight = &(&chi_pow * &QScalar::q_half_power(q, -3 * li))
            * &(&newform_value(&inst.rep, li) * &QScalar::q_half_power(q, 6 * li));
        coeffs.push(b.coeff(l) * &weight);
        chi_pow = &chi_pow * &chi;
    }
    Ok(Series::new(q, coeffs, inst.order))
}

/// The scalar `c` with `y = c T` in `H(y)/Q(y)`.
pub fn y_substitution(inst: &LocalInstance) -> Result<QScalar> {
    let q = inst.q();
    let omega_pi = inst.satake.central_character();
    match &inst.rep {
        Gl2Local::RamifiedPSUnramAlpha { alpha, .. } => {
            Ok(&QScalar::from_int(q, q as i64) * &(&omega_pi * alpha).inv()?)
        }
        Gl2Local::SteinbergUnramified { omega } => {
            Ok(&QScalar::q_half_power(q, 1) * &(&omega_pi * omega).inv()?)
        }
        other => Err(unsupported("hq_substituted", other)),
    }
}

/// `H(cT)/Q(cT)` expanded to the instance order.
pub fn hq_substituted(inst: &LocalInstance) -> Result<Series> {
    let c = y_substitution(inst)?;
    let h = sugano_h(&inst.bessel, inst.q())?.substitute_scaled(&c);
    let qp = sugano_q(&inst.satake).substitute_scaled(&c);
    series_div(&h.to_series(inst.order), &qp.to_series(inst.order))
}

/// `L(3s+1/2, pi~ x tau~)` for `tau = alpha x beta`, `beta` ramified:
/// `prod_i (1 - (gamma^(i) alpha)^-1 q^(-1/2) T)^-1`.
pub fn lfactor_gsp4_gl2_case2(satake: &SatakeParams, rep: &Gl2Local) -> Result<RatFn> {
    let Gl2Local::RamifiedPSUnramAlpha { alpha, .. } = rep else {
        return Err(unsupported("lfactor_gsp4_gl2_case2", rep));
    };
    let q = satake.q();
    let shift = QScalar::q_half_power(q, -1);
    let factors = satake
        .gamma()
        .iter()
        .map(|g| Ok(Poly::one_minus(&(&(g * alpha).inv()? * &shift))))
        .collect::<Result<Vec<_>>>()?;
    RatFn::inverse_of(Poly::product(q, &factors))
}

/// `L(6s+1, chi|F^x) = (1 - chi(varpi) q^-1 T^2)^-1`.
pub fn lfactor_chi_restriction(satake: &SatakeParams, rep: &Gl2Local) -> Result<RatFn> {
    let q = satake.q();
    let c = &chi_varpi(satake, rep)? * &QScalar::q_half_power(q, -2);
    RatFn::inverse_of(Poly::one_minus_square(&c))
}

/// `L(3s+1, tau x AI(Lambda) x chi|F^x)^-1` for Case 2, as a polynomial in `T`.
fn triple_case2_inverse(rep: &Gl2Local, bessel: &BesselDatum, satake: &SatakeParams) -> Result<Poly> {
    let Gl2Local::RamifiedPSUnramAlpha { alpha, beta, beta_chi_unramified, .. } = rep else {
        return Err(unsupported("lfactor_triple_case2", rep));
    };
    let q = satake.q();
    let omega_pi = satake.central_character();
    let qm1 = QScalar::q_half_power(q, -2);
    let wa = (&omega_pi * alpha).inv()?;
    let lambda_l = || bessel.lambda_varpi_l().expect("validated");
    Ok(match bessel.legendre() {
        Legendre::Inert => {
            let c = &(bessel.lambda_varpi() * &(&wa * &wa)) * &QScalar::q_half_power(q, -4);
            Poly::one_minus_square(&c)
        }
        Legendre::Ramified => {
            let first = Poly::one_minus(&(&(lambda_l() * &wa) * &qm1));
            if *beta_chi_unramified {
                let wb = (&omega_pi * beta).inv()?;
                first.mul(&Poly::one_minus(&(&(lambda_l() * &wb) * &qm1)))
            } else {
                first
            }
        }
        Legendre::Split => {
            let lc = bessel.lambda_varpi_conj().expect("validated");
            Poly::one_minus(&(&(lambda_l() * &wa) * &qm1))
                .mul(&Poly::one_minus(&(&(lc * &wa) * &qm1)))
        }
    })
}

/// `L(3s+1, tau x AI(Lambda) x chi|F^x)` for Case 2.
pub fn lfactor_triple_case2(rep: &Gl2Local, bessel: &BesselDatum, satake: &SatakeParams) -> Result<RatFn> {
    RatFn::inverse_of(triple_case2_inverse(rep, bessel, satake)?)
}

/// The correction factor `Y(s)`.
///
/// For Case 1 the ramified triple factor is taken to be 1, so `Y` reduces
/// to `L(6s+1, chi|F^x)`.
pub fn y_factor(inst: &LocalInstance) -> Result<RatFn> {
    let q = inst.q();
    match &inst.rep {
        Gl2Local::UnramifiedPS { .. } => Ok(RatFn::one(q)),
        Gl2Local::RamifiedPSUnramAlpha { beta, beta_chi_unramified, .. } => {
            let l_chi = lfactor_chi_restriction(&inst.satake, &inst.rep)?;
            if inst.bessel.legendre() == Legendre::Ramified && *beta_chi_unramified {
                let wb = (&inst.satake.central_character() * beta).inv()?;
                let lam = inst.bessel.lambda_varpi_l().expect("validated");
                let extra = Poly::one_minus(&(&(lam * &wb) * &QScalar::q_half_power(q, -2)));
                Ok(l_chi.mul(&RatFn::inverse_of(extra)?))
            } else {
                Ok(l_chi)
            }
        }
        Gl2Local::SteinbergUnramified { .. } | Gl2Local::RamifiedOther { .. } => {
            lfactor_chi_restriction(&inst.satake, &inst.rep)
        }
    }
}

/// `L(3s+1/2, pi~ x tau~) / (L(6s+1, chi|F^x) L(3s+1, tau x AI(Lambda) x chi|F^x)) * Y(s)`.
pub fn zeta_closed_rhs(inst: &LocalInstance) -> Result<RatFn> {
    zeta_closed_rhs_with(inst, &y_factor(inst)?)
}

fn zeta_closed_rhs_with(inst: &LocalInstance, y: &RatFn) -> Result<RatFn> {
    let q = inst.q();
    let (l_main, l_triple) = match &inst.rep {
        Gl2Local::RamifiedPSUnramAlpha { .. } => (
            lfactor_gsp4_gl2_case2(&inst.satake, &inst.rep)?,
            lfactor_triple_case2(&inst.rep, &inst.bessel, &inst.satake)?,
        ),
        Gl2Local::RamifiedOther { .. } => (RatFn::one(q), RatFn::one(q)),
        other => return Err(unsupported("zeta_closed_rhs", other)),
    };
    let l_chi = lfactor_chi_restriction(&inst.satake, &inst.rep)?;
    l_main.div(&l_chi.mul(&l_triple)).map(|f| f.mul(y))
}

/// Closed form of the unramified zeta integral (both characters of `tau`
/// unramified). Returned for global assembly; there is no series oracle for it.
pub fn unramified_closed(satake: &SatakeParams, rep: &Gl2Local, bessel: &BesselDatum) -> Result<RatFn> {
    let Gl2Local::UnramifiedPS { alpha, beta } = rep else {
        return Err(unsupported("unramified_closed", rep));
    };
    let q = satake.q();
    let shift = QScalar::q_half_power(q, -1);
    let mut l_main = Vec::with_capacity(8);
    for g in satake.gamma() {
        for t in [alpha, beta] {
            l_main.push(Poly::one_minus(&(&(g * t).inv()? * &shift)));
        }
    }
    let l_main_inv = Poly::product(q, &l_main);
    let l_chi_inv = Poly::one_minus_square(&(&chi_varpi(satake, rep)? * &QScalar::q_half_power(q, -2)));
    let l_triple_inv = unramified_triple_inverse(satake, alpha, beta, bessel)?;
    RatFn::new(l_chi_inv.mul(&l_triple_inv), l_main_inv)
}

/// `L(3s+1, tau x AI(Lambda) x chi|F^x)^-1` for unramified `tau = alpha x beta`.
///
/// The twisted parameters of `tau x chi|F^x` are `(omega_pi beta)^-1` and
/// `(omega_pi alpha)^-1`. In the inert case `AI(Lambda)` has parameters
/// `+-sqrt(Lambda(varpi))`, which pair up into `1 - Lambda(varpi) c^2 q^-2 T^2`.
pub fn unramified_triple_inverse(
    satake: &SatakeParams,
    alpha: &QScalar,
    beta: &QScalar,
    bessel: &BesselDatum,
) -> Result<Poly> {
    let q = satake.q();
    let omega_pi = satake.central_character();
    let qm1 = QScalar::q_half_power(q, -2);
    let twisted = [(&omega_pi * beta).inv()?, (&omega_pi * alpha).inv()?];
    let factors: Vec<Poly> = match bessel.legendre() {
        Legendre::Inert => twisted
            .iter()
            .map(|c| Poly::one_minus_square(&(&(bessel.lambda_varpi() * &(c * c)) * &QScalar::q_half_power(q, -4))))
            .collect(),
        Legendre::Ramified => {
            let lam = bessel.lambda_varpi_l().expect("validated");
            twisted.iter().map(|c| Poly::one_minus(&(&(lam * c) * &qm1))).collect()
        }
        Legendre::Split => {
            let lam = bessel.lambda_varpi_l().expect("validated");
            let lc = bessel.lambda_varpi_conj().expect("validated");
            twisted
                .iter()
                .flat_map(|c| [Poly::one_minus(&(&(lam * c) * &qm1)), Poly::one_minus(&(&(lc * c) * &qm1))])
                .collect()
        }
    };
    Ok(Poly::product(q, &factors))
}

/// Result of checking one instance.
#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub instance: InstanceRepr,
    pub case: LocalCase,
    pub order: usize,
    pub lhs: Vec<QScalarRepr>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hq_series: Option<Vec<QScalarRepr>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rhs_series: Option<Vec<QScalarRepr>>,
    /// `None` when the pair does not apply to this case.
    pub lhs_vs_hq: Option<SeriesComparison>,
    pub lhs_vs_rhs: Option<SeriesComparison>,
    pub pass: bool,
}

/// Runs every applicable comparison for a ramified instance.
pub fn verify_local(inst: &LocalInstance) -> Result<VerificationReport> {
    verify_local_with(inst, y_factor)
}

/// As [`verify_local`], with the `Y(s)` table supplied by the caller.
pub fn verify_local_with<F>(inst: &LocalInstance, y_table: F) -> Result<VerificationReport>
where
    F: Fn(&LocalInstance) -> Result<RatFn>,
{
    let lhs = zeta_series_lhs(inst)?;
    let case = inst.case();
    let hq = match case {
        LocalCase::Case2 | LocalCase::Case3 => Some(hq_substituted(inst)?),
        _ => None,
    };
    let rhs = match case {
        LocalCase::Case1 | LocalCase::Case2 => {
            let y = y_table(inst)?;
            Some(ratfn_to_series(&zeta_closed_rhs_with(inst, &y)?, inst.order))
        }
        _ => None,
    };
    let lhs_vs_hq = hq.as_ref().map(|h| series_equal(&lhs, h));
    let lhs_vs_rhs = rhs.as_ref().map(|r| series_equal(&lhs, r));
    let pass = [&lhs_vs_hq, &lhs_vs_rhs]
        .iter()
        .all(|c| c.as_ref().is_none_or(|c| c.matches));
    Ok(VerificationReport {
        instance: inst.to_repr(),
        case,
        order: inst.order,
        lhs: lhs.to_repr(),
        hq_series: hq.map(|s| s.to_repr()),
        rhs_series: rhs.map(|s| s.to_repr()),
        lhs_vs_hq,
        lhs_vs_rhs,
        pass,
    })
}
