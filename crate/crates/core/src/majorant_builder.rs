//! Majorants with a concave higher difference.
//!
//! Given an unbounded `b` that grows like `n^(p+1)` but not like `n^p`,
//! [`build_majorant`] rescales it to a sequence of at most linear growth,
//!
//! ```text
//! a(n) = (p+1) b(n) / C(n+p, p) - p b(0),
//! ```
//!
//! takes the least concave majorant `c` of `a`, and returns `s = Σ^p c`.
//! Then `s >= b`, `Δ^p s = c` is concave, and `b/s` stays within
//! `[1/(p+1), 1]` along the tail. [`verify_growth_properties`] checks the
//! growth consequences of a concave, unbounded `Δ^p s` on a prefix.

use num_traits::Zero;
use serde::Serialize;

use crate::concave_majorant::lcm_recursive;
use crate::scalar::Scalar;
use crate::seq_calculus::{
    binomial_scalar, delta, h_index, iterate, shape_check, shape_check_tol, DiffOp, HValue,
    RealSeq, Sequence,
};
use crate::{Error, Result};

/// Whether `C(n+p,p) c(n) / (p+1) <= s(n) <= C(n+p,p) c(n)` held on the
/// prefix. Only meaningful when `c` is nondecreasing with `c(0) >= 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SandwichCheck {
    pub applicable: bool,
    pub holds: bool,
}

#[derive(Debug, Clone)]
pub struct BuiltMajorant<T> {
    pub p: usize,
    /// Input after replacing a negative `b(0)` by zero.
    pub b: Sequence<T>,
    pub a_transform: Sequence<T>,
    pub c: Sequence<T>,
    pub s: Sequence<T>,
    /// `max b(n)/s(n)` over `[N/2, N]`.
    pub ratio_window: f64,
    pub sandwich: SandwichCheck,
    pub warnings: Vec<String>,
}

/// Runs the rescale / concave-majorant / `Σ^p` pipeline.
pub fn build_majorant<T: Scalar>(b: &Sequence<T>, p: usize) -> Result<BuiltMajorant<T>> {
    let horizon = b.horizon();
    if horizon < 16 {
        return Err(Error::InsufficientHorizon {
            what: "build_majorant",
            needed: 16,
            got: horizon,
        });
    }
    let mut adjusted = b.values().to_vec();
    if adjusted[0] < T::zero() {
        adjusted[0] = T::zero();
    }
    let b = Sequence::from_vec(adjusted)?;
    let b0 = b[0].clone();
    let p_scalar = T::from_usize(p);
    let scale = T::from_usize(p + 1);
    let a = Sequence::tabulate(horizon, |n| {
        scale.clone() * b[n].clone() / binomial_scalar::<T>((n + p) as u64, p as u64)
            - p_scalar.clone() * b0.clone()
    });
    let c = lcm_recursive(&a, None)?.c;
    let s = iterate(DiffOp::Sigma, &c, p);

    let ratio_window = (horizon / 2..=horizon)
        .map(|n| b[n].to_f64() / s[n].to_f64())
        .fold(f64::NEG_INFINITY, f64::max);

    let c_shape = shape_check(&c);
    let applicable = c_shape.nondecreasing && c[0] >= T::zero();
    let holds = (0..=horizon).all(|n| {
        let k = binomial_scalar::<T>((n + p) as u64, p as u64) * c[n].clone();
        let lower = k.clone() / scale.clone();
        lower.le_tol(&s[n], 1e-12) && s[n].le_tol(&k, 1e-12)
    });

    let mut warnings = Vec::new();
    match h_index(&b.to_real(), p as u32 + 2) {
        Ok(est) if est.value == HValue::Finite(p as u32 + 1) => {}
        Ok(est) => {
            let msg = format!(
                "empirical growth index {:?} disagrees with p + 1 = {}",
                est.value,
                p + 1
            );
            log::warn!("{msg}");
            warnings.push(msg);
        }
        Err(e) => warnings.push(format!("growth index unavailable: {e}")),
    }

    Ok(BuiltMajorant {
        p,
        b,
        a_transform: a,
        c,
        s,
        ratio_window,
        sandwich: SandwichCheck { applicable, holds },
        warnings,
    })
}

/// One finite-horizon criterion with the value it was decided on.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Criterion {
    pub name: &'static str,
    pub passed: bool,
    pub witness: f64,
    pub rule: String,
}

/// Hypothesis checks and the six growth properties of a sequence whose
/// `p`-th difference is concave and unbounded.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthReport {
    pub p: usize,
    pub horizon: usize,
    pub shape_tolerance: f64,
    pub preconditions: Vec<Criterion>,
    pub positivity: Criterion,
    pub strict_increase: Criterion,
    pub outgrows_n_pow_p: Criterion,
    pub bounded_by_n_pow_p1: Criterion,
    pub successive_ratio: Criterion,
    pub summable_difference: Criterion,
}

impl GrowthReport {
    pub fn properties(&self) -> [&Criterion; 6] {
        [
            &self.positivity,
            &self.strict_increase,
            &self.outgrows_n_pow_p,
            &self.bounded_by_n_pow_p1,
            &self.successive_ratio,
            &self.summable_difference,
        ]
    }

    pub fn all_passed(&self) -> bool {
        self.preconditions.iter().all(|c| c.passed) && self.properties().iter().all(|c| c.passed)
    }
}

/// Relative slack for shape checks on float data.
pub const SHAPE_TOL: f64 = 1e-9;
/// Bound on `|s(N)/s(N-1) - 1|`.
pub const RATIO_TOL: f64 = 1e-2;
/// Bound on the last-quarter share of `Σ|Δ^(p+2) s|`.
pub const L1_TAIL_TOL: f64 = 1e-3;
/// Multiple of the rounding bound below which a higher difference is
/// treated as unresolved.
const NOISE_FACTOR: f64 = 8.0;
/// Bounded concave sequences gain geometrically less per dyadic window;
/// unbounded ones (down to iterated logarithms) do not.
pub const UNBOUNDED_GAIN_RATIO: f64 = 0.75;

/// `Δ^q a` together with a per-index rounding bound
/// `NOISE_FACTOR · ε · Σ_i C(q,i) |a(n-i)|`.
fn resolved_difference(a: &RealSeq, q: usize) -> (RealSeq, Vec<f64>) {
    let d = iterate(DiffOp::Delta, a, q);
    let v = a.values();
    let weights: Vec<f64> = (0..=q)
        .map(|i| binomial_scalar::<f64>(q as u64, i as u64))
        .collect();
    let floor = (0..v.len())
        .map(|n| {
            let mag: f64 = (0..=q.min(n)).map(|i| weights[i] * v[n - i].abs()).sum();
            NOISE_FACTOR * f64::EPSILON * mag
        })
        .collect();
    (d, floor)
}

/// Dyadic tail windows `[N/2^(i+1), N/2^i]`, newest last.
fn dyadic_windows(horizon: usize, count: usize) -> Vec<(usize, usize)> {
    let mut w: Vec<(usize, usize)> = (0..count)
        .map(|i| ((horizon >> (i + 1)).max(1), (horizon >> i).max(1)))
        .collect();
    w.reverse();
    w
}

/// Checks the growth properties on the prefix of `s`. Preconditions are
/// reported alongside; nothing is rejected.
pub fn verify_growth_properties(s: &RealSeq, p: usize) -> GrowthReport {
    let horizon = s.horizon();
    let v = s.values();
    let dp = iterate(DiffOp::Delta, s, p);

    // Concavity of Δ^p s is read off Δ^(p+2) s, with the rounding bound of
    // the float differences as slack.
    let (second, noise) = resolved_difference(s, p + 2);
    let worst = (2..=horizon)
        .map(|n| second[n] - noise[n] - SHAPE_TOL * dp[n].abs())
        .fold(f64::NEG_INFINITY, f64::max);
    let dv = dp.values();
    let gains: Vec<f64> = dyadic_windows(horizon, 2)
        .iter()
        .map(|&(lo, hi)| dv[hi] - dv[lo])
        .collect();
    let half = horizon / 2;
    let preconditions = vec![
        Criterion {
            name: "difference_concave",
            passed: worst <= 0.0,
            witness: worst,
            rule: format!(
                "Δ^{} s <= rounding bound + {SHAPE_TOL:e}·|Δ^{p} s| on [2, N]",
                p + 2
            ),
        },
        Criterion {
            name: "difference_unbounded",
            passed: gains[1] > 0.0 && gains[1] >= UNBOUNDED_GAIN_RATIO * gains[0],
            witness: if gains[0] > 0.0 { gains[1] / gains[0] } else { f64::INFINITY },
            rule: format!(
                "gain of Δ^{p} s over [N/2, N] >= {UNBOUNDED_GAIN_RATIO} x gain over [N/4, N/2]"
            ),
        },
        Criterion {
            name: "start_nonnegative",
            passed: v[0] >= 0.0,
            witness: v[0],
            rule: "s(0) >= 0".into(),
        },
    ];

    let min_pos = v[1..].iter().cloned().fold(f64::INFINITY, f64::min);
    let positivity = Criterion {
        name: "positivity",
        passed: min_pos > 0.0,
        witness: min_pos,
        rule: "s(n) > 0 for 1 <= n <= N, exact".into(),
    };

    let min_step = v.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
    let strict_increase = Criterion {
        name: "strict_increase",
        passed: min_step > 0.0,
        witness: min_step,
        rule: "s(n+1) > s(n) for 0 <= n < N, exact".into(),
    };

    let windows = dyadic_windows(horizon, 4);
    let mins: Vec<f64> = windows
        .iter()
        .map(|&(lo, hi)| {
            (lo..=hi)
                .map(|n| v[n] / (n as f64).powi(p as i32))
                .fold(f64::INFINITY, f64::min)
        })
        .collect();
    let outgrows_n_pow_p = Criterion {
        name: "outgrows_n_pow_p",
        passed: mins.windows(2).all(|w| w[1] > w[0]),
        witness: mins[mins.len() - 1] / mins[0],
        rule: format!(
            "min s(n)/n^{p} strictly increases over the four dyadic windows ending at {horizon}"
        ),
    };

    let q = horizon / 4;
    let pw = (p + 1) as i32;
    let wmax = |lo: usize, hi: usize| {
        (lo..hi)
            .map(|n| v[n] / (n as f64).powi(pw))
            .fold(f64::NEG_INFINITY, f64::max)
    };
    let (front_max, tail_max) = (wmax(q.max(1), half), wmax(half, horizon + 1));
    let bounded_by_n_pow_p1 = Criterion {
        name: "bounded_by_n_pow_p_plus_1",
        passed: tail_max <= front_max,
        witness: tail_max,
        rule: format!("max s(n)/n^{pw} over [N/2, N] <= max over [N/4, N/2)"),
    };

    let ratio = (v[horizon] / v[horizon - 1] - 1.0).abs();
    let successive_ratio = Criterion {
        name: "successive_ratio",
        passed: ratio < RATIO_TOL,
        witness: ratio,
        rule: format!("|s(N)/s(N-1) - 1| < {RATIO_TOL:e}"),
    };

    let (diff, floor) = resolved_difference(s, p + 2);
    let resolved: Vec<f64> = diff
        .values()
        .iter()
        .zip(&floor)
        .map(|(d, f)| if d.abs() > *f { d.abs() } else { 0.0 })
        .collect();
    let unresolved = resolved.iter().filter(|v| v.is_zero()).count();
    let cut = 3 * horizon / 4;
    let total: f64 = resolved.iter().sum();
    let tail: f64 = resolved[cut + 1..].iter().sum();
    let share = if total > 0.0 { tail / total } else { 0.0 };
    let summable_difference = Criterion {
        name: "summable_difference",
        passed: share < L1_TAIL_TOL,
        witness: share,
        rule: format!(
            "last-quarter share of Σ|Δ^{} s| < {L1_TAIL_TOL:e}; {unresolved} terms below the rounding bound counted as zero",
            p + 2
        ),
    };

    GrowthReport {
        p,
        horizon,
        shape_tolerance: SHAPE_TOL,
        preconditions,
        positivity,
        strict_increase,
        outgrows_n_pow_p,
        bounded_by_n_pow_p1,
        successive_ratio,
        summable_difference,
    }
}

/// Shape of one intermediate difference `Δ^j s`, `1 <= j <= p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DifferenceShape {
    pub j: usize,
    pub positive: bool,
    pub strictly_increasing: bool,
    /// Expected only for `j < p`.
    pub convex: bool,
}

/// Intermediate differences inherit the growth properties: each `Δ^j s`
/// is positive past 0 and strictly increasing, and convex when `j < p`.
pub fn difference_shapes(s: &RealSeq, p: usize) -> Vec<DifferenceShape> {
    let mut cur = s.clone();
    (1..=p)
        .map(|j| {
            cur = delta(&cur);
            let shape = shape_check_tol(&cur, SHAPE_TOL);
            DifferenceShape {
                j,
                positive: cur.values()[1..].iter().all(|&x| x > 0.0),
                strictly_increasing: shape.strictly_increasing,
                convex: shape.is_convex(),
            }
        })
        .collect()
}
