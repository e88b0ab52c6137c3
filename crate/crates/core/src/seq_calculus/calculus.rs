use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::sequence::{Generator, RatSeq, RealSeq, Sequence};
use crate::scalar::Scalar;
use crate::{Error, Result};

/// Backward difference: `(Δa)(0) = a(0)`, `(Δa)(n) = a(n) - a(n-1)`.
pub fn delta<T: Scalar>(a: &Sequence<T>) -> Sequence<T> {
    let v = a.values();
    let mut out = Vec::with_capacity(v.len());
    out.push(v[0].clone());
    out.extend(v.windows(2).map(|w| w[1].clone() - w[0].clone()));
    Sequence::from_vec(out).expect("non-empty")
}

/// Partial sums: `(Σa)(n) = a(0) + … + a(n)`.
pub fn sigma<T: Scalar>(a: &Sequence<T>) -> Sequence<T> {
    let mut acc = T::zero();
    let out = a
        .values()
        .iter()
        .map(|x| {
            acc = acc.clone() + x.clone();
            acc.clone()
        })
        .collect();
    Sequence::from_vec(out).expect("non-empty")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DiffOp {
    Delta,
    Sigma,
}

/// `m`-fold composition of `Δ` or `Σ`; `m = 0` returns a copy of `a`.
pub fn iterate<T: Scalar>(op: DiffOp, a: &Sequence<T>, m: usize) -> Sequence<T> {
    let mut cur = a.clone();
    for _ in 0..m {
        cur = match op {
            DiffOp::Delta => delta(&cur),
            DiffOp::Sigma => sigma(&cur),
        };
    }
    cur
}

/// The Cesàro numbers `A_α(0..=N)` of a given real order.
#[derive(Debug, Clone)]
pub struct CesaroSeq {
    pub alpha: f64,
    pub values: RealSeq,
}

fn cesaro_term(alpha: f64, n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * (alpha + k as f64) / k as f64)
}

/// `A_α(n) = (α+1)(α+2)…(α+n)/n!`, by the recurrence
/// `A_α(n) = A_α(n-1)·(α+n)/n`. The returned sequence keeps a generator,
/// so it can be extended past `horizon`.
pub fn cesaro_numbers(alpha: f64, horizon: usize) -> CesaroSeq {
    let mut prefix = Vec::with_capacity(horizon + 1);
    let mut cur = 1.0;
    prefix.push(cur);
    for n in 1..=horizon {
        cur *= (alpha + n as f64) / n as f64;
        prefix.push(cur);
    }
    let generator = Generator::new(format!("cesaro({alpha})"), move |n| cesaro_term(alpha, n));
    CesaroSeq {
        alpha,
        values: Sequence::with_generator(prefix, generator),
    }
}

/// Exact Cesàro numbers for a rational order.
pub fn cesaro_numbers_exact(alpha: &BigRational, horizon: usize) -> RatSeq {
    let mut prefix = Vec::with_capacity(horizon + 1);
    let mut cur = BigRational::one();
    prefix.push(cur.clone());
    for n in 1..=horizon {
        let n = BigRational::from_usize(n);
        cur = cur * (alpha.clone() + n.clone()) / n;
        prefix.push(cur.clone());
    }
    Sequence::from_vec(prefix).expect("non-empty")
}

/// Binomial coefficient `C(n, k)`, zero for `k > n`.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// `C(n, k)` in the scalar type at hand.
pub fn binomial_scalar<T: Scalar>(n: u64, k: u64) -> T {
    T::from_bigint(&binomial(n, k).into())
}

/// `Σ_{k=j}^{n} C(k, j) = C(n+1, j+1)`.
pub fn hockey_stick(j: u64, n: u64) -> Result<BigUint> {
    if n < j {
        return Err(Error::ReversedRange { j, n });
    }
    Ok(binomial(n + 1, j + 1))
}
