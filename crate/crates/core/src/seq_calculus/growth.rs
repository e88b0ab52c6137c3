use serde::Serialize;

use super::sequence::RealSeq;
use crate::{Error, Result};

/// Estimated value of the growth index: the least `m` with `a(n)/n^m`
/// bounded above.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum HValue {
    Finite(u32),
    /// No tested exponent gave a non-increasing tail, or the index is
    /// genuinely infinite; a prefix cannot tell these apart.
    InfiniteOrUndetermined,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EstimateMode {
    /// Backed by a caller-supplied closed-form bound.
    Exact,
    /// Read off dyadic tail windows of a prefix.
    Empirical,
}

/// Window maxima of `a(n)/n^m` for one exponent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WindowEvidence {
    pub m: u32,
    /// max over `[N/4, N/2)`.
    pub front_max: f64,
    /// max over `[N/2, N]`.
    pub tail_max: f64,
}

impl WindowEvidence {
    pub fn non_increasing(&self) -> bool {
        self.tail_max <= self.front_max
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HIndexEstimate {
    pub value: HValue,
    pub evidence: Vec<WindowEvidence>,
    pub mode: EstimateMode,
    /// For exact mode: the bound the caller certified.
    pub certificate: Option<String>,
}

/// A closed-form statement `a(n) <= constant · n^exponent` for all `n >= 1`,
/// together with the fact that no smaller exponent works.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertifiedBound {
    pub exponent: u32,
    pub constant: f64,
    pub statement: String,
}

fn window_max(a: &RealSeq, lo: usize, hi: usize, m: u32) -> f64 {
    (lo..hi)
        .map(|n| a[n] / (n as f64).powi(m as i32))
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Empirical growth index from the two dyadic tail windows
/// `[N/4, N/2)` and `[N/2, N]`: the smallest `m <= m_max` whose window
/// maxima of `a(n)/n^m` do not increase.
pub fn h_index(a: &RealSeq, m_max: u32) -> Result<HIndexEstimate> {
    let horizon = a.horizon();
    if horizon < 16 {
        return Err(Error::InsufficientHorizon {
            what: "h_index",
            needed: 16,
            got: horizon,
        });
    }
    if m_max < 1 {
        return Err(Error::InvalidArgument("m_max must be at least 1".into()));
    }
    let (q, h) = (horizon / 4, horizon / 2);
    let mut evidence = Vec::new();
    let mut value = HValue::InfiniteOrUndetermined;
    for m in 0..=m_max {
        let w = WindowEvidence {
            m,
            front_max: window_max(a, q, h, m),
            tail_max: window_max(a, h, horizon + 1, m),
        };
        evidence.push(w);
        if w.non_increasing() {
            value = HValue::Finite(m);
            break;
        }
    }
    Ok(HIndexEstimate {
        value,
        evidence,
        mode: EstimateMode::Empirical,
        certificate: None,
    })
}

/// Exact mode: returns the caller's certified exponent.
pub fn h_index_certified(bound: CertifiedBound) -> HIndexEstimate {
    HIndexEstimate {
        value: HValue::Finite(bound.exponent),
        evidence: Vec::new(),
        mode: EstimateMode::Exact,
        certificate: Some(format!(
            "{} (a(n) <= {} * n^{})",
            bound.statement, bound.constant, bound.exponent
        )),
    }
}

/// Fraction of `Σ|a(n)|` (over the prefix) contributed by the last quarter
/// `(3N/4, N]`. Small values are the empirical signature of `a ∈ ℓ₁`.
pub fn l1_tail_fraction(a: &RealSeq) -> f64 {
    let horizon = a.horizon();
    let cut = 3 * horizon / 4;
    let total: f64 = a.values().iter().map(|v| v.abs()).sum();
    if total == 0.0 {
        return 0.0;
    }
    let tail: f64 = a.values()[cut + 1..].iter().map(|v| v.abs()).sum();
    tail / total
}

/// Empirical `ℓ₁` membership: the last quarter contributes less than
/// `threshold` of the total absolute sum.
pub fn summable_empirically(a: &RealSeq, threshold: f64) -> bool {
    l1_tail_fraction(a) < threshold
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator_core::shift_norms_closed_form;

    #[test]
    fn squares_have_index_two() {
        let a = RealSeq::tabulate(1024, |n| (n * n) as f64);
        let est = h_index(&a, 6).unwrap();
        assert_eq!(est.value, HValue::Finite(2));
        assert_eq!(est.mode, EstimateMode::Empirical);
        assert_eq!(est.evidence.len(), 3);
        assert!(!est.evidence[1].non_increasing());
    }

    #[test]
    fn logarithm_has_index_one() {
        let a = RealSeq::tabulate(1024, |n| ((n + 1) as f64).ln());
        assert_eq!(h_index(&a, 6).unwrap().value, HValue::Finite(1));
    }

    #[test]
    fn shift_norms_are_undetermined() {
        let a = shift_norms_closed_form(4096);
        let est = h_index(&a, 6).unwrap();
        assert_eq!(est.value, HValue::InfiniteOrUndetermined);
        assert_eq!(est.evidence.len(), 7);
    }

    #[test]
    fn bounded_sequence_has_index_zero() {
        let a = RealSeq::tabulate(64, |n| 1.0 + (n % 2) as f64);
        assert_eq!(h_index(&a, 3).unwrap().value, HValue::Finite(0));
    }

    #[test]
    fn rejects_short_prefix() {
        let a = RealSeq::tabulate(15, |n| n as f64);
        assert!(matches!(h_index(&a, 2), Err(Error::InsufficientHorizon { .. })));
        let a = RealSeq::tabulate(16, |n| n as f64);
        assert!(h_index(&a, 0).is_err());
    }

    #[test]
    fn certified_mode_is_returned_verbatim() {
        let est = h_index_certified(CertifiedBound {
            exponent: 1,
            constant: 2.0,
            statement: "A_0.5(n) <= 2 n^0.5".into(),
        });
        assert_eq!(est.value, HValue::Finite(1));
        assert_eq!(est.mode, EstimateMode::Exact);
        assert!(est.certificate.unwrap().contains("A_0.5"));
    }

    #[test]
    fn tail_fraction_separates_summable_from_not() {
        let inv_sq = RealSeq::tabulate(4096, |n| 1.0 / ((n + 1) as f64).powi(2));
        assert!(summable_empirically(&inv_sq, 1e-3));
        let inv = RealSeq::tabulate(4096, |n| 1.0 / (n + 1) as f64);
        assert!(!summable_empirically(&inv, 1e-3));
    }
}
