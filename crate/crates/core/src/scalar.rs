//! Field abstraction shared by the double-precision and exact-rational paths.

use std::fmt::Debug;
use std::ops::Neg;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, ToPrimitive, Zero};

/// An ordered field in which the sequence calculus is carried out.
///
/// `f64` is the default path; [`BigRational`] gives exact answers for
/// identity checks where float noise would hide a real discrepancy.
pub trait Scalar:
    Num + Neg<Output = Self> + Clone + PartialOrd + Debug + Send + Sync + 'static
{
    /// Whether arithmetic in this type is exact.
    const EXACT: bool;

    fn from_i64(v: i64) -> Self;

    fn from_bigint(v: &BigInt) -> Self;

    fn to_f64(&self) -> f64;

    fn abs(&self) -> Self;

    /// Equality up to `rel` relative to `max(|a|, |b|, 1)`. Exact types
    /// ignore `rel` and compare structurally.
    fn approx_eq(&self, other: &Self, rel: f64) -> bool;

    /// `a <= b` with slack `rel * max(|a|, |b|, 1)`; exact when `rel == 0`.
    fn le_tol(&self, other: &Self, rel: f64) -> bool;

    fn from_usize(v: usize) -> Self {
        Self::from_i64(v as i64)
    }

    fn max_of(a: Self, b: Self) -> Self {
        if b > a {
            b
        } else {
            a
        }
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn from_bigint(v: &BigInt) -> Self {
        v.to_f64().unwrap_or(f64::INFINITY)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn abs(&self) -> Self {
        f64::abs(*self)
    }

    fn approx_eq(&self, other: &Self, rel: f64) -> bool {
        let scale = f64::abs(*self).max(f64::abs(*other)).max(1.0);
        (self - other).abs() <= rel * scale
    }

    fn le_tol(&self, other: &Self, rel: f64) -> bool {
        if rel == 0.0 {
            return self <= other;
        }
        let scale = f64::abs(*self).max(f64::abs(*other)).max(1.0);
        *self <= *other + rel * scale
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn from_bigint(v: &BigInt) -> Self {
        BigRational::from_integer(v.clone())
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn abs(&self) -> Self {
        Signed::abs(self)
    }

    fn approx_eq(&self, other: &Self, _rel: f64) -> bool {
        self == other
    }

    fn le_tol(&self, other: &Self, _rel: f64) -> bool {
        self <= other
    }
}

/// Parses `"p/q"` or `"p"` into an exact rational.
pub fn parse_rational(text: &str) -> Option<BigRational> {
    let text = text.trim();
    match text.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                return None;
            }
            Some(BigRational::new(p, q))
        }
        None => {
            let p: BigInt = text.parse().ok()?;
            Some(BigRational::from_integer(p))
        }
    }
}

/// Formats a rational as `"p/q"`, or `"p"` when the denominator is one.
pub fn format_rational(v: &BigRational) -> String {
    if v.denom().is_one() {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

/// `n / d` as an exact rational.
pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}
