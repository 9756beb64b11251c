//! Deterministic random instances for the local identities. Rationals are
//! ratios of integers in `[-9, 9] \ {0}`.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bessel::{BesselDatum, Legendre, SatakeParams};
use crate::error::Result;
use crate::gl2::Gl2Local;
use crate::scalar::QScalar;
use crate::zeta::LocalInstance;

pub const RESIDUE_SIZES: [u64; 7] = [2, 3, 4, 5, 7, 8, 9];

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn small<R: Rng>(rng: &mut R) -> i64 {
    let v = rng.gen_range(1..=9);
    if rng.gen_bool(0.5) {
        v
    } else {
        -v
    }
}

pub fn random_rational<R: Rng>(rng: &mut R, q: u64) -> QScalar {
    QScalar::from_ratio(q, small(rng), small(rng))
}

/// Satake parameters and a compatible Bessel datum with
/// `Lambda(varpi) = omega_pi(varpi)`.
pub fn random_pi_and_lambda<R: Rng>(rng: &mut R, q: u64, legendre: Legendre) -> Result<(SatakeParams, BesselDatum)> {
    let mut g = || random_rational(rng, q);
    match legendre {
        Legendre::Inert => {
            let (g1, g2, g3) = (g(), g(), g());
            let g4 = &(&g1 * &g3) * &g2.inv()?;
            let sat = SatakeParams::new(q, [g1, g2, g3, g4])?;
            let bessel = BesselDatum::inert(sat.central_character())?;
            Ok((sat, bessel))
        }
        Legendre::Ramified => {
            // omega_pi = Lambda(varpi_L)^2
            let (r, g1, g2) = (g(), g(), g());
            let r2 = &r * &r;
            let g3 = &r2 * &g1.inv()?;
            let g4 = &r2 * &g2.inv()?;
            Ok((SatakeParams::new(q, [g1, g2, g3, g4])?, BesselDatum::ramified(r)?))
        }
        Legendre::Split => {
            let (g1, g2, g3, ll) = (g(), g(), g(), g());
            let g4 = &(&g1 * &g3) * &g2.inv()?;
            let sat = SatakeParams::new(q, [g1, g2, g3, g4])?;
            let lc = &sat.central_character() * &ll.inv()?;
            Ok((sat, BesselDatum::split(ll, lc)?))
        }
    }
}

/// The local families that are checked against each other.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Family {
    Case1,
    Case2 { beta_chi_unramified: bool },
    Case3,
}

pub fn random_rep<R: Rng>(rng: &mut R, q: u64, family: Family) -> Result<Gl2Local> {
    match family {
        Family::Case1 => Gl2Local::ramified_other(random_rational(rng, q), rng.gen_range(2..=5)),
        Family::Case2 { beta_chi_unramified } => Gl2Local::ramified_ps(
            random_rational(rng, q),
            random_rational(rng, q),
            rng.gen_range(1..=4),
            beta_chi_unramified,
        ),
        Family::Case3 => Gl2Local::steinberg(random_rational(rng, q)),
    }
}

pub fn random_instance<R: Rng>(rng: &mut R, family: Family, legendre: Legendre, order: usize) -> Result<LocalInstance> {
    let q = *RESIDUE_SIZES.choose(rng).expect("nonempty");
    let (sat, bessel) = random_pi_and_lambda(rng, q, legendre)?;
    let rep = random_rep(rng, q, family)?;
    LocalInstance::new(sat, bessel, rep, order)
}

/// One block of a sweep: a family, a Legendre case and a count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Suite {
    pub name: &'static str,
    pub family: Family,
    pub legendre: Legendre,
}

/// Cases 1 and 3 across all Legendre cases, and the four Case 2 sub-cases.
pub fn default_suites() -> Vec<Suite> {
    use Legendre::*;
    vec![
        Suite { name: "case1-inert", family: Family::Case1, legendre: Inert },
        Suite { name: "case1-ramified", family: Family::Case1, legendre: Ramified },
        Suite { name: "case1-split", family: Family::Case1, legendre: Split },
        Suite { name: "case2-inert", family: Family::Case2 { beta_chi_unramified: false }, legendre: Inert },
        Suite { name: "case2-ramified-betachi-ramified", family: Family::Case2 { beta_chi_unramified: false }, legendre: Ramified },
        Suite { name: "case2-ramified-betachi-unramified", family: Family::Case2 { beta_chi_unramified: true }, legendre: Ramified },
        Suite { name: "case2-split", family: Family::Case2 { beta_chi_unramified: false }, legendre: Split },
        Suite { name: "case3-inert", family: Family::Case3, legendre: Inert },
        Suite { name: "case3-ramified", family: Family::Case3, legendre: Ramified },
        Suite { name: "case3-split", family: Family::Case3, legendre: Split },
    ]
}

/// `per_suite` instances of every suite, generated sequentially from `seed`.
pub fn sweep_instances(seed: u64, per_suite: usize, order: usize) -> Result<Vec<(Suite, LocalInstance)>> {
    let mut rng = rng_from_seed(seed);
    let mut out = Vec::new();
    for suite in default_suites() {
        for _ in 0..per_suite {
            out.push((suite, random_instance(&mut rng, suite.family, suite.legendre, order)?));
        }
    }
    Ok(out)
}

/// `gamma -> u gamma` with the matching rescaling of `Lambda`.
pub fn rescale_instance(inst: &LocalInstance, u: &QScalar) -> Result<LocalInstance> {
    let g = inst.satake().gamma();
    let sat = SatakeParams::new(inst.q(), [u * &g[0], u * &g[1], u * &g[2], u * &g[3]])?;
    LocalInstance::new(sat, inst.bessel().rescale(u)?, inst.rep().clone(), inst.order())
}
