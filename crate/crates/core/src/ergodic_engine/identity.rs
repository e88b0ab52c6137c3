//! Summation-by-parts identity for weighted power sums, checked in exact
//! Gaussian-rational or floating-point arithmetic.

use std::ops::Neg;

use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{Num, Signed, Zero};

use crate::operator_core::Operator;
use crate::seq_calculus::{delta, Sequence};
use crate::{Error, Result, Scalar};

/// Matrix entry type: a ring with a real magnitude used for the norm.
pub trait Entry: Num + Neg<Output = Self> + Clone {
    type Real: Scalar;

    fn lift(r: &Self::Real) -> Self;

    /// `|re| + |im|` for exact entries, the modulus for floats.
    fn magnitude(&self) -> Self::Real;
}

impl Entry for Complex64 {
    type Real = f64;

    fn lift(r: &f64) -> Self {
        Complex64::new(*r, 0.0)
    }

    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

impl Entry for Complex<BigRational> {
    type Real = BigRational;

    fn lift(r: &BigRational) -> Self {
        Complex::new(r.clone(), BigRational::zero())
    }

    fn magnitude(&self) -> BigRational {
        Signed::abs(&self.re) + Signed::abs(&self.im)
    }
}

/// Small dense square matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SquareMatrix<E> {
    d: usize,
    data: Vec<E>,
}

impl<E: Entry> SquareMatrix<E> {
    pub fn from_rows(rows: Vec<Vec<E>>) -> Result<Self> {
        let d = rows.len();
        if d == 0 {
            return Err(Error::InvalidArgument("empty matrix".into()));
        }
        if let Some(r) = rows.iter().find(|r| r.len() != d) {
            return Err(Error::DimensionMismatch { expected: d, got: r.len() });
        }
        Ok(Self { d, data: rows.into_iter().flatten().collect() })
    }

    pub fn identity(d: usize) -> Self {
        let data = (0..d * d)
            .map(|i| if i / d == i % d { E::one() } else { E::zero() })
            .collect();
        Self { d, data }
    }

    pub fn zeros(d: usize) -> Self {
        Self { d, data: vec![E::zero(); d * d] }
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn get(&self, i: usize, j: usize) -> &E {
        &self.data[i * self.d + j]
    }

    pub fn mul(&self, other: &Self) -> Self {
        let d = self.d;
        let mut out = Self::zeros(d);
        for i in 0..d {
            for k in 0..d {
                let a = &self.data[i * d + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..d {
                    let term = a.clone() * other.data[k * d + j].clone();
                    out.data[i * d + j] = out.data[i * d + j].clone() + term;
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a.clone() + b.clone()).collect();
        Self { d: self.d, data }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a.clone() - b.clone()).collect();
        Self { d: self.d, data }
    }

    pub fn scale(&self, r: &E::Real) -> Self {
        let f = E::lift(r);
        Self { d: self.d, data: self.data.iter().map(|a| a.clone() * f.clone()).collect() }
    }

    /// Maximum row sum of entry magnitudes.
    pub fn norm(&self) -> E::Real {
        (0..self.d)
            .map(|i| {
                self.data[i * self.d..(i + 1) * self.d]
                    .iter()
                    .fold(E::Real::zero(), |acc, e| acc + e.magnitude())
            })
            .fold(E::Real::zero(), |m, r| E::Real::max_of(m, r))
    }
}

impl SquareMatrix<Complex64> {
    pub fn from_operator(t: &Operator) -> Self {
        let d = t.dim();
        let e = t.entries();
        Self { d, data: (0..d * d).map(|i| e[(i / d, i % d)]).collect() }
    }
}

/// Both sides of the identity and their difference.
#[derive(Debug, Clone)]
pub struct IdentityCheck<E: Entry> {
    pub lhs: SquareMatrix<E>,
    pub rhs: SquareMatrix<E>,
    /// `‖lhs - rhs‖`, exactly zero in exact arithmetic.
    pub residual: E::Real,
    /// `max(‖lhs‖, ‖rhs‖)`, for relative comparisons in floating point.
    pub scale: E::Real,
}

/// Evaluates
/// `(Σ_{k≤n} a(n-k) τ^k)(1-τ)^m` against
/// `(-1)^m Σ_{k≤n+m} (Δ^m a)(n+m-k) τ^k + Σ_{j<m} (-1)^j (Δ^j a)(n+j+1) (1-τ)^{m-1-j}`.
///
/// `a` must be known up to index `n + m + 1`.
pub fn summation_by_parts_check<E: Entry>(
    tau: &SquareMatrix<E>,
    a: &Sequence<E::Real>,
    m: usize,
    n: usize,
) -> Result<IdentityCheck<E>> {
    let needed = n + m + 1;
    let a = a.to_horizon(needed)?;
    let d = tau.dim();

    let mut diffs = vec![a];
    for j in 0..m {
        let next = delta(&diffs[j]);
        diffs.push(next);
    }

    let mut powers = vec![SquareMatrix::identity(d)];
    for k in 0..n + m {
        let next = powers[k].mul(tau);
        powers.push(next);
    }
    let one_minus = SquareMatrix::identity(d).sub(tau);
    let mut om_powers = vec![SquareMatrix::identity(d)];
    for j in 0..m {
        let next = om_powers[j].mul(&one_minus);
        om_powers.push(next);
    }

    let weighted = |w: &Sequence<E::Real>, top: usize| {
        (0..=top).fold(SquareMatrix::zeros(d), |acc, k| acc.add(&powers[k].scale(&w[top - k])))
    };
    let lhs = weighted(&diffs[0], n).mul(&om_powers[m]);

    let mut rhs = weighted(&diffs[m], n + m);
    if m % 2 == 1 {
        rhs = SquareMatrix::zeros(d).sub(&rhs);
    }
    for j in 0..m {
        let term = om_powers[m - 1 - j].scale(&diffs[j][n + j + 1]);
        rhs = if j % 2 == 0 { rhs.add(&term) } else { rhs.sub(&term) };
    }

    let residual = lhs.sub(&rhs).norm();
    let scale = E::Real::max_of(lhs.norm(), rhs.norm());
    Ok(IdentityCheck { lhs, rhs, residual, scale })
}

/// Exact check with integer-valued `τ` given as real rows.
pub fn summation_by_parts_exact(
    rows: &[&[i64]],
    a: &Sequence<BigRational>,
    m: usize,
    n: usize,
) -> Result<IdentityCheck<Complex<BigRational>>> {
    let rows = rows
        .iter()
        .map(|r| {
            r.iter()
                .map(|&x| Complex::new(BigRational::from_i64(x), BigRational::zero()))
                .collect()
        })
        .collect();
    summation_by_parts_check(&SquareMatrix::from_rows(rows)?, a, m, n)
}
