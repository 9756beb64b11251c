//! Exact arithmetic in the quadratic ring `Q[x]/(x^2 - q)`.
//!
//! Every half-integer power of the residue cardinality `q` that shows up in
//! the local formulas lives here as `a + b*sqrt(q)` with rational `a`, `b`.
//! The square root is a formal symbol: for square `q` the ring has zero
//! divisors, and nothing ever collapses `sqrt(q)` to an integer.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An element `rat + sqrt * sqrt(q)`.
///
/// The residue cardinality travels with the value so that products can
/// apply `sqrt(q)^2 = q`. Mixing values over different `q` is a logic error
/// and panics.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QScalar {
    q: u64,
    rat: BigRational,
    sqrt: BigRational,
}

/// Wire form `{"rat": "p/r", "sqrt": "p/r"}`; `q` comes from the context.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QScalarRepr {
    pub rat: String,
    #[serde(default = "zero_string")]
    pub sqrt: String,
}

fn zero_string() -> String {
    "0".to_string()
}

pub(crate) fn parse_rational(s: &str) -> Result<BigRational> {
    let t = s.trim();
    t.parse::<BigRational>()
        .map_err(|_| Error::Parse(format!("not a rational number: {s:?}")))
}

pub(crate) fn check_q(q: u64) -> Result<u64> {
    if q < 2 {
        Err(Error::InvalidResidueCardinality(q))
    } else {
        Ok(q)
    }
}

impl QScalar {
    pub fn new(q: u64, rat: BigRational, sqrt: BigRational) -> Self {
        debug_assert!(q >= 2);
        QScalar { q, rat, sqrt }
    }

    pub fn zero(q: u64) -> Self {
        Self::new(q, BigRational::zero(), BigRational::zero())
    }

    pub fn one(q: u64) -> Self {
        Self::from_int(q, 1)
    }

    pub fn from_int(q: u64, n: i64) -> Self {
        Self::new(q, BigRational::from_integer(n.into()), BigRational::zero())
    }

    /// The rational `num / den`.
    ///
    /// Panics if `den == 0`.
    pub fn from_ratio(q: u64, num: i64, den: i64) -> Self {
        Self::from_rational(q, BigRational::new(num.into(), den.into()))
    }

    pub fn from_rational(q: u64, r: BigRational) -> Self {
        Self::new(q, r, BigRational::zero())
    }

    /// The formal generator `sqrt(q)`.
    pub fn sqrt_q(q: u64) -> Self {
        Self::new(q, BigRational::zero(), BigRational::one())
    }

    /// `q^(k/2)` for any integer `k`, built without inversion.
    pub fn q_half_power(q: u64, k: i64) -> Self {
        let qi = BigInt::from(q);
        let half = k.div_euclid(2);
        let odd = k.rem_euclid(2) == 1;
        let base = if half >= 0 {
            BigRational::from_integer(num_traits::pow(qi, half as usize))
        } else {
            BigRational::new(BigInt::one(), num_traits::pow(qi, (-half) as usize))
        };
        if odd {
            Self::new(q, BigRational::zero(), base)
        } else {
            Self::new(q, base, BigRational::zero())
        }
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn rat_part(&self) -> &BigRational {
        &self.rat
    }

    pub fn sqrt_part(&self) -> &BigRational {
        &self.sqrt
    }

    pub fn is_zero(&self) -> bool {
        self.rat.is_zero() && self.sqrt.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.rat.is_one() && self.sqrt.is_zero()
    }

    /// True when `sqrt_part == 0`.
    pub fn is_rational(&self) -> bool {
        self.sqrt.is_zero()
    }

    fn q_rational(&self) -> BigRational {
        BigRational::from_integer(BigInt::from(self.q))
    }

    /// `rat^2 - q * sqrt^2`.
    pub fn norm(&self) -> BigRational {
        &self.rat * &self.rat - self.q_rational() * &self.sqrt * &self.sqrt
    }

    /// `rat - sqrt * sqrt(q)`.
    pub fn conj(&self) -> Self {
        Self::new(self.q, self.rat.clone(), -self.sqrt.clone())
    }

    pub fn is_unit(&self) -> bool {
        !self.norm().is_zero()
    }

    pub fn inv(&self) -> Result<Self> {
        let n = self.norm();
        if n.is_zero() {
            return Err(Error::InvalidInversion);
        }
        Ok(Self::new(self.q, &self.rat / &n, -(&self.sqrt / &n)))
    }

    /// `self^k` by repeated squaring; negative `k` inverts first.
    pub fn pow(&self, k: i64) -> Result<Self> {
        let mut base = if k < 0 { self.inv()? } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = Self::one(self.q);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        Ok(acc)
    }

    /// The rational value of this element under `sqrt(q) -> +isqrt(q)`.
    ///
    /// Defined when `sqrt_part == 0` or `q` is a perfect square; this is the
    /// evaluation map of the formal ring, not an identification inside it.
    pub fn specialize(&self) -> Option<BigRational> {
        if self.sqrt.is_zero() {
            return Some(self.rat.clone());
        }
        let root = num_integer::Roots::sqrt(&self.q);
        (root * root == self.q)
            .then(|| &self.rat + &self.sqrt * BigRational::from_integer(BigInt::from(root)))
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        Self::new(self.q, &self.rat * r, &self.sqrt * r)
    }

    /// Real embedding with `sqrt(q) > 0`.
    pub fn to_f64(&self) -> f64 {
        let a = self.rat.to_f64().unwrap_or(f64::NAN);
        let b = self.sqrt.to_f64().unwrap_or(f64::NAN);
        a + b * (self.q as f64).sqrt()
    }

    pub fn to_repr(&self) -> QScalarRepr {
        QScalarRepr {
            rat: self.rat.to_string(),
            sqrt: self.sqrt.to_string(),
        }
    }

    pub fn from_repr(q: u64, repr: &QScalarRepr) -> Result<Self> {
        check_q(q)?;
        Ok(Self::new(
            q,
            parse_rational(&repr.rat)?,
            parse_rational(&repr.sqrt)?,
        ))
    }

    fn same_field(&self, other: &Self) {
        assert_eq!(
            self.q, other.q,
            "QScalar values over different residue fields"
        );
    }
}

impl fmt::Debug for QScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for QScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.sqrt.is_zero() {
            write!(f, "{}", self.rat)
        } else if self.rat.is_zero() {
            write!(f, "{}*sqrt({})", self.sqrt, self.q)
        } else if self.sqrt.is_negative() {
            write!(f, "{} - {}*sqrt({})", self.rat, -self.sqrt.clone(), self.q)
        } else {
            write!(f, "{} + {}*sqrt({})", self.rat, self.sqrt, self.q)
        }
    }
}

impl<'a> Add<&'a QScalar> for &'a QScalar {
    type Output = QScalar;
    fn add(self, rhs: &QScalar) -> QScalar {
        self.same_field(rhs);
        QScalar::new(self.q, &self.rat + &rhs.rat, &self.sqrt + &rhs.sqrt)
    }
}

impl<'a> Sub<&'a QScalar> for &'a QScalar {
    type Output = QScalar;
    fn sub(self, rhs: &QScalar) -> QScalar {
        self.same_field(rhs);
        QScalar::new(self.q, &self.rat - &rhs.rat, &self.sqrt - &rhs.sqrt)
    }
}

impl<'a> Mul<&'a QScalar> for &'a QScalar {
    type Output = QScalar;
    fn mul(self, rhs: &QScalar) -> QScalar {
        self.same_field(rhs);
        let q = self.q_rational();
        let rat = &self.rat * &rhs.rat + q * &self.sqrt * &rhs.sqrt;
        let sqrt = &self.rat * &rhs.sqrt + &self.sqrt * &rhs.rat;
        QScalar::new(self.q, rat, sqrt)
    }
}

impl Neg for &QScalar {
    type Output = QScalar;
    fn neg(self) -> QScalar {
        QScalar::new(self.q, -self.rat.clone(), -self.sqrt.clone())
    }
}

impl Neg for QScalar {
    type Output = QScalar;
    fn neg(self) -> QScalar {
        QScalar::new(self.q, -self.rat, -self.sqrt)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<QScalar> for QScalar {
            type Output = QScalar;
            fn $m(self, rhs: QScalar) -> QScalar {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a QScalar> for QScalar {
            type Output = QScalar;
            fn $m(self, rhs: &QScalar) -> QScalar {
                (&self).$m(rhs)
            }
        }
        impl<'a> $tr<QScalar> for &'a QScalar {
            type Output = QScalar;
            fn $m(self, rhs: QScalar) -> QScalar {
                self.$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl AddAssign<&QScalar> for QScalar {
    fn add_assign(&mut self, rhs: &QScalar) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&QScalar> for QScalar {
    fn sub_assign(&mut self, rhs: &QScalar) {
        *self = &*self - rhs;
    }
}

impl MulAssign<&QScalar> for QScalar {
    fn mul_assign(&mut self, rhs: &QScalar) {
        *self = &*self * rhs;
    }
}
