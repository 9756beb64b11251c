//! Polynomials, truncated power series and rational functions over
//! [`QScalar`] in one formal variable.
//!
//! The variable is `T = q^(-3s)` for the zeta-integral identities and the
//! auxiliary `y` for the Bessel generating function; nothing here depends on
//! which one is meant.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::{QScalar, QScalarRepr};

/// Default truncation order of every series comparison.
pub const DEFAULT_ORDER: usize = 12;

/// A polynomial with trailing zeros trimmed; the zero polynomial is empty.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    q: u64,
    coeffs: Vec<QScalar>,
}

impl Poly {
    pub fn new(q: u64, coeffs: Vec<QScalar>) -> Self {
        let mut p = Poly { q, coeffs };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(QScalar::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn zero(q: u64) -> Self {
        Poly { q, coeffs: Vec::new() }
    }

    pub fn one(q: u64) -> Self {
        Poly::constant(QScalar::one(q))
    }

    pub fn constant(c: QScalar) -> Self {
        Poly::new(c.q(), vec![c])
    }

    /// `1 - c*X`, the shape of every local Euler factor.
    pub fn one_minus(c: &QScalar) -> Self {
        Poly::new(c.q(), vec![QScalar::one(c.q()), -c])
    }

    /// `1 - c*X^2`.
    pub fn one_minus_square(c: &QScalar) -> Self {
        let q = c.q();
        Poly::new(q, vec![QScalar::one(q), QScalar::zero(q), -c])
    }

    pub fn product<'a, I: IntoIterator<Item = &'a Poly>>(q: u64, factors: I) -> Poly {
        factors
            .into_iter()
            .fold(Poly::one(q), |acc, f| acc.mul(f))
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn coeffs(&self) -> &[QScalar] {
        &self.coeffs
    }

    /// Coefficient of `X^i`, zero beyond the degree.
    pub fn coeff(&self, i: usize) -> QScalar {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(|| QScalar::zero(self.q))
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new(self.q, (0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new(self.q, (0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero(self.q);
        }
        let mut out = vec![QScalar::zero(self.q); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += &(a * b);
            }
        }
        Poly::new(self.q, out)
    }

    pub fn scale(&self, c: &QScalar) -> Poly {
        Poly::new(self.q, self.coeffs.iter().map(|a| a * c).collect())
    }

    /// `p(c*X)`: the coefficient of `X^k` picks up `c^k`.
    pub fn substitute_scaled(&self, c: &QScalar) -> Poly {
        let mut pw = QScalar::one(self.q);
        let mut out = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            out.push(a * &pw);
            pw = &pw * c;
        }
        Poly::new(self.q, out)
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &QScalar) -> QScalar {
        self.coeffs
            .iter()
            .rev()
            .fold(QScalar::zero(self.q), |acc, a| &(&acc * x) + a)
    }

    pub fn to_series(&self, order: usize) -> Series {
        Series::new(self.q, self.coeffs.clone(), order)
    }

    pub fn to_repr(&self) -> Vec<QScalarRepr> {
        self.coeffs.iter().map(QScalar::to_repr).collect()
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly{:?}", self.coeffs)
    }
}

/// A power series known through `X^order`.
#[derive(Clone, PartialEq, Eq)]
pub struct Series {
    q: u64,
    coeffs: Vec<QScalar>,
    order: usize,
}

impl Series {
    /// Pads with zeros or drops terms so that exactly `order + 1`
    /// coefficients are kept.
    pub fn new(q: u64, mut coeffs: Vec<QScalar>, order: usize) -> Self {
        coeffs.resize(order + 1, QScalar::zero(q));
        Series { q, coeffs, order }
    }

    pub fn zero(q: u64, order: usize) -> Self {
        Series::new(q, Vec::new(), order)
    }

    pub fn one(q: u64, order: usize) -> Self {
        Series::new(q, vec![QScalar::one(q)], order)
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeffs(&self) -> &[QScalar] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &QScalar {
        &self.coeffs[i]
    }

    pub fn truncate(&self, order: usize) -> Series {
        Series::new(self.q, self.coeffs[..=order.min(self.order)].to_vec(), order.min(self.order))
    }

    pub fn add(&self, other: &Series) -> Series {
        let n = self.order.min(other.order);
        Series::new(
            self.q,
            (0..=n).map(|i| &self.coeffs[i] + &other.coeffs[i]).collect(),
            n,
        )
    }

    pub fn sub(&self, other: &Series) -> Series {
        let n = self.order.min(other.order);
        Series::new(
            self.q,
            (0..=n).map(|i| &self.coeffs[i] - &other.coeffs[i]).collect(),
            n,
        )
    }

    /// Cauchy product, truncated at the smaller order.
    pub fn mul(&self, other: &Series) -> Series {
        let n = self.order.min(other.order);
        let mut out = vec![QScalar::zero(self.q); n + 1];
        for (i, a) in self.coeffs[..=n].iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs[..=n - i].iter().enumerate() {
                out[i + j] += &(a * b);
            }
        }
        Series::new(self.q, out, n)
    }

    /// The unique `s` with `s * den = self` through the smaller order.
    pub fn div(&self, den: &Series) -> Result<Series> {
        series_div(self, den)
    }

    pub fn to_repr(&self) -> Vec<QScalarRepr> {
        self.coeffs.iter().map(QScalar::to_repr).collect()
    }
}

impl fmt::Debug for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Series{:?} + O(X^{})", self.coeffs, self.order + 1)
    }
}

/// Long division of power series. The denominator's constant term must be a
/// unit of the scalar ring.
pub fn series_div(num: &Series, den: &Series) -> Result<Series> {
    let n = num.order.min(den.order);
    let d0 = &den.coeffs[0];
    let d0_inv = if d0.is_one() {
        None
    } else {
        Some(d0.inv().map_err(|_| Error::DivisionByNonUnit)?)
    };
    let mut out: Vec<QScalar> = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let mut acc = num.coeffs[k].clone();
        for j in 1..=k {
            let dj = &den.coeffs[j];
            if !dj.is_zero() {
                acc -= &(dj * &out[k - j]);
            }
        }
        out.push(match &d0_inv {
            Some(inv) => &acc * inv,
            None => acc,
        });
    }
    Ok(Series::new(num.q, out, n))
}

/// A quotient of polynomials whose denominator has constant term 1.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RatFn {
    numer: Poly,
    denom: Poly,
}

impl RatFn {
    /// Normalizes so that the denominator's constant term is 1.
    pub fn new(numer: Poly, denom: Poly) -> Result<Self> {
        let d0 = denom.coeff(0);
        if d0.is_one() {
            return Ok(RatFn { numer, denom });
        }
        let inv = d0.inv().map_err(|_| Error::DivisionByNonUnit)?;
        Ok(RatFn {
            numer: numer.scale(&inv),
            denom: denom.scale(&inv),
        })
    }

    pub fn from_poly(p: Poly) -> Self {
        let q = p.q();
        RatFn {
            numer: p,
            denom: Poly::one(q),
        }
    }

    pub fn one(q: u64) -> Self {
        RatFn::from_poly(Poly::one(q))
    }

    /// `1 / p` for an Euler-factor polynomial `p`.
    pub fn inverse_of(p: Poly) -> Result<Self> {
        let q = p.q();
        RatFn::new(Poly::one(q), p)
    }

    pub fn numer(&self) -> &Poly {
        &self.numer
    }

    pub fn denom(&self) -> &Poly {
        &self.denom
    }

    pub fn q(&self) -> u64 {
        self.numer.q()
    }

    pub fn mul(&self, other: &RatFn) -> RatFn {
        RatFn {
            numer: self.numer.mul(&other.numer),
            denom: self.denom.mul(&other.denom),
        }
    }

    pub fn recip(&self) -> Result<RatFn> {
        RatFn::new(self.denom.clone(), self.numer.clone())
    }

    pub fn div(&self, other: &RatFn) -> Result<RatFn> {
        Ok(self.mul(&other.recip()?))
    }

    pub fn to_series(&self, order: usize) -> Series {
        ratfn_to_series(self, order)
    }

    /// Exact value at a point where the denominator does not vanish.
    pub fn eval(&self, x: &QScalar) -> Result<QScalar> {
        let d = self.denom.eval(x);
        Ok(&self.numer.eval(x) * &d.inv()?)
    }
}

/// Taylor expansion at the origin.
pub fn ratfn_to_series(f: &RatFn, order: usize) -> Series {
    series_div(&f.numer.to_series(order), &f.denom.to_series(order))
        .expect("RatFn denominators are normalized to constant term 1")
}

/// One coefficient pair that differs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub index: usize,
    pub left: QScalarRepr,
    pub right: QScalarRepr,
}

/// Outcome of comparing two series coefficient by coefficient.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SeriesComparison {
    pub matches: bool,
    pub compared_through: usize,
    pub first_mismatch: Option<Mismatch>,
}

/// Exact comparison up to the smaller of the two orders.
pub fn series_equal(a: &Series, b: &Series) -> SeriesComparison {
    let n = a.order.min(b.order);
    let first_mismatch = (0..=n)
        .find(|&i| a.coeffs[i] != b.coeffs[i])
        .map(|i| Mismatch {
            index: i,
            left: a.coeffs[i].to_repr(),
            right: b.coeffs[i].to_repr(),
        });
    SeriesComparison {
        matches: first_mismatch.is_none(),
        compared_through: n,
        first_mismatch,
    }
}
