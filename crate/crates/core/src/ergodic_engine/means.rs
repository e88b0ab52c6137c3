use num_complex::Complex64;

use crate::operator_core::{CMatrix, NormKind, Operator};
use crate::seq_calculus::{cesaro_numbers, delta, RealSeq};
use crate::{Error, Result};

/// Checks that `s` is positive and nondecreasing on `0..=horizon`.
pub fn check_admissible(s: &RealSeq, horizon: usize) -> Result<()> {
    if s.horizon() < horizon {
        return Err(Error::InsufficientHorizon {
            what: "Noerlund means",
            needed: horizon,
            got: s.horizon(),
        });
    }
    let v = s.values();
    if let Some(n) = (0..=horizon).find(|&n| !(v[n] > 0.0)) {
        return Err(Error::NotAdmissible {
            index: n,
            reason: "weights sequence must be strictly positive",
        });
    }
    if let Some(n) = (1..=horizon).find(|&n| v[n] < v[n - 1]) {
        return Err(Error::NotAdmissible {
            index: n,
            reason: "weights sequence must be nondecreasing",
        });
    }
    Ok(())
}

/// Powers `T^0, …, T^N` by successive multiplication, as flat column-major
/// buffers.
pub(crate) fn successive_powers(t: &Operator, horizon: usize) -> Vec<CMatrix> {
    let d = t.dim();
    let mut out = Vec::with_capacity(horizon + 1);
    let mut cur = CMatrix::identity(d, d);
    out.push(cur.clone());
    for _ in 0..horizon {
        cur = &cur * t.entries();
        out.push(cur.clone());
    }
    out
}

/// Nörlund means `M_n = (1/s(n)) Σ_{k=0}^n (Δs)(n-k) T^k`, `n = 0..=N`.
///
/// Powers are produced once by successive multiplication; each mean is
/// then a weighted sum of stored powers, for `O(N)` products and `O(N²)`
/// scaled additions in total.
pub fn noerlund_means(t: &Operator, s: &RealSeq, horizon: usize) -> Result<Vec<Operator>> {
    check_admissible(s, horizon)?;
    let weights = delta(&s.to_horizon(horizon)?);
    let powers = successive_powers(t, horizon);
    Ok(means_from_powers(t, &powers, weights.values(), s.values()))
}

pub(crate) fn means_from_powers(
    t: &Operator,
    powers: &[CMatrix],
    weights: &[f64],
    s: &[f64],
) -> Vec<Operator> {
    let d = t.dim();
    let len = d * d;
    let horizon = powers.len() - 1;
    let mut out = Vec::with_capacity(horizon + 1);
    let mut acc = vec![Complex64::new(0.0, 0.0); len];
    for n in 0..=horizon {
        acc.iter_mut().for_each(|z| *z = Complex64::new(0.0, 0.0));
        for (k, power) in powers[..=n].iter().enumerate() {
            let w = weights[n - k];
            if w == 0.0 {
                continue;
            }
            for (a, p) in acc.iter_mut().zip(power.as_slice()) {
                *a += p * w;
            }
        }
        let inv = 1.0 / s[n];
        let m = CMatrix::from_iterator(d, d, acc.iter().map(|z| z * inv));
        out.push(t.like(m));
    }
    out
}

/// Cesàro means of order `α > 0`: Nörlund means with `s = A_α`.
pub fn cesaro_means(t: &Operator, alpha: f64, horizon: usize) -> Result<Vec<Operator>> {
    if !(alpha > 0.0) {
        return Err(Error::InvalidArgument(format!("Cesaro order must be positive, got {alpha}")));
    }
    noerlund_means(t, &cesaro_numbers(alpha, horizon).values, horizon)
}

/// Relative gap between `T^N` from successive products and from repeated
/// squaring.
pub fn power_drift(t: &Operator, horizon: usize) -> f64 {
    let mut cur = CMatrix::identity(t.dim(), t.dim());
    for _ in 0..horizon {
        cur = &cur * t.entries();
    }
    let squared = t.pow(horizon as u64);
    let gap = NormKind::InducedSup.of(&(&cur - &squared));
    gap / NormKind::InducedSup.of(&squared).max(1.0)
}
