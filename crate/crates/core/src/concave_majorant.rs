//! Least concave majorants of truncated sequences.
//!
//! [`lcm_recursive`] runs the chord-slope recursion
//! `c(0) = b(0)`, `c(n+1) = c(n) + sup_{k>n} (b(k) - c(n)) / (k - n)`;
//! [`lcm_hull_oracle`] computes the same object as the upper convex hull of
//! `{(n, b(n))}` with a monotone chain, and serves as its independent check.
//!
//! Without a tail slope both describe the majorant of the finite prefix
//! only. A caller who knows a bound on the chord slopes beyond the horizon
//! can pass it as `tail_slope`; it then competes in every supremum as the
//! slope contributed by the unseen tail.

use serde::Serialize;

use crate::scalar::Scalar;
use crate::seq_calculus::{RealSeq, Sequence};
use crate::{Error, Result};

/// Relative tolerance for contact detection on the float path.
pub const CONTACT_TOL: f64 = 1e-9;

/// Largest `n` such that every step up to `n` was decided by a finite
/// chord, restricted to the horizon.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NSup {
    Finite(usize),
    BeyondHorizon,
}

#[derive(Debug, Clone)]
pub struct MajorantResult<T> {
    pub c: Sequence<T>,
    pub contact_indices: Vec<usize>,
    pub n_sup: NSup,
    /// `max b(n)/n` over `[N/2, N]`, a tail estimate of `limsup b(n)/n`.
    pub ell: f64,
    pub tail_slope: Option<T>,
}

/// Contact-set structure of a majorant.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContactStructure {
    pub nu: Vec<usize>,
    pub eventually_affine: bool,
    pub slope_tail: Option<f64>,
}

fn check_input<T: Scalar>(b: &Sequence<T>) -> Result<()> {
    if b.horizon() < 1 {
        return Err(Error::InsufficientHorizon {
            what: "least concave majorant",
            needed: 1,
            got: 0,
        });
    }
    Ok(())
}

fn tail_ratio_estimate<T: Scalar>(b: &Sequence<T>) -> f64 {
    let horizon = b.horizon();
    (horizon.div_ceil(2).max(1)..=horizon)
        .map(|n| b[n].to_f64() / n as f64)
        .fold(f64::NEG_INFINITY, f64::max)
}

fn contacts<T: Scalar>(b: &Sequence<T>, c: &Sequence<T>) -> Vec<usize> {
    (0..=b.horizon())
        .filter(|&n| c[n].approx_eq(&b[n], CONTACT_TOL))
        .collect()
}

/// Largest chord slope `(b(k) - base) / (k - n)` over `k in n+1..=horizon`,
/// with the smallest maximizing `k`.
fn best_chord<T: Scalar>(b: &Sequence<T>, n: usize, base: &T) -> (T, usize) {
    let mut best: Option<(T, usize)> = None;
    for k in n + 1..=b.horizon() {
        let slope = (b[k].clone() - base.clone()) / T::from_usize(k - n);
        match &best {
            Some((s, _)) if slope <= *s => {}
            _ => best = Some((slope, k)),
        }
    }
    best.expect("k range is non-empty below the horizon")
}

/// Least concave majorant by the chord-slope recursion.
pub fn lcm_recursive<T: Scalar>(
    b: &Sequence<T>,
    tail_slope: Option<T>,
) -> Result<MajorantResult<T>> {
    check_input(b)?;
    if let Some(t) = &tail_slope {
        let t = t.to_f64();
        if t.is_nan() || t == f64::INFINITY {
            return Err(Error::InvalidArgument("tail slope must be finite".into()));
        }
    }
    let horizon = b.horizon();
    let mut c = Vec::with_capacity(horizon + 1);
    c.push(b[0].clone());
    // first index whose incoming step was won by the tail slope
    let mut tail_from: Option<usize> = None;
    // While c(n) lies strictly inside the last winning chord, that chord
    // still wins from c(n): everything to its right sits below it.
    let mut carried: Option<(T, usize)> = None;
    for n in 0..horizon {
        let (finite, k) = match carried.take() {
            Some((slope, k)) if k > n => (slope, k),
            _ => best_chord(b, n, &c[n]),
        };
        let step = match &tail_slope {
            Some(t) if *t > finite => {
                tail_from.get_or_insert(n + 1);
                t.clone()
            }
            _ => {
                carried = Some((finite.clone(), k));
                finite
            }
        };
        let next = c[n].clone() + step;
        c.push(next);
    }
    let c = Sequence::from_vec(c)?;
    let n_sup = match tail_from {
        Some(first) => NSup::Finite(first - 1),
        None => NSup::BeyondHorizon,
    };
    Ok(MajorantResult {
        contact_indices: contacts(b, &c),
        n_sup,
        ell: tail_ratio_estimate(b),
        tail_slope,
        c,
    })
}

/// Upper convex hull of `{(n, b(n))}` evaluated at the integers.
pub fn lcm_hull_oracle<T: Scalar>(b: &Sequence<T>) -> Result<MajorantResult<T>> {
    check_input(b)?;
    let v = b.values();
    let mut hull: Vec<usize> = Vec::new();
    for i in 0..v.len() {
        while hull.len() >= 2 {
            let (p, q) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            // q is on or below the segment p -> i
            let lhs = (v[q].clone() - v[p].clone()) * T::from_usize(i - p);
            let rhs = (v[i].clone() - v[p].clone()) * T::from_usize(q - p);
            if lhs <= rhs {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(i);
    }
    let mut c = Vec::with_capacity(v.len());
    for seg in hull.windows(2) {
        let (p, q) = (seg[0], seg[1]);
        let span = T::from_usize(q - p);
        for n in p..q {
            let t = T::from_usize(n - p);
            c.push(v[p].clone() + (v[q].clone() - v[p].clone()) * t / span.clone());
        }
    }
    c.push(v[v.len() - 1].clone());
    let c = Sequence::from_vec(c)?;
    Ok(MajorantResult {
        contact_indices: contacts(b, &c),
        n_sup: NSup::BeyondHorizon,
        ell: tail_ratio_estimate(b),
        tail_slope: None,
        c,
    })
}

/// Rebuilds the contact indices `ν_0 = 0 < ν_1 < …` from the chord
/// recursion and checks them against the equality contacts of `result`.
pub fn contact_structure<T: Scalar>(
    b: &Sequence<T>,
    result: &MajorantResult<T>,
) -> Result<ContactStructure> {
    let c = &result.c;
    if c.horizon() != b.horizon() {
        return Err(Error::DimensionMismatch {
            expected: b.horizon(),
            got: c.horizon(),
        });
    }
    let horizon = b.horizon();
    let last = match result.n_sup {
        NSup::Finite(n) => n,
        NSup::BeyondHorizon => horizon,
    };
    let mut nu = vec![0usize];
    let mut cur = 0usize;
    while cur < last {
        let step = c[cur + 1].clone() - c[cur].clone();
        let next = (cur + 1..=horizon).find(|&n| {
            let slope = (b[n].clone() - c[cur].clone()) / T::from_usize(n - cur);
            slope.approx_eq(&step, CONTACT_TOL)
        });
        match next {
            Some(n) => {
                nu.push(n);
                cur = n;
            }
            None => {
                return Err(Error::StructuralInconsistency(format!(
                    "no chord from index {cur} realizes the step {:e}",
                    step.to_f64()
                )))
            }
        }
    }
    if nu != result.contact_indices {
        return Err(Error::StructuralInconsistency(format!(
            "chord recursion gives {nu:?}, equality contacts are {:?}",
            result.contact_indices
        )));
    }
    let eventually_affine = matches!(result.n_sup, NSup::Finite(_));
    let slope_tail = eventually_affine.then(|| (c[horizon].clone() - c[horizon - 1].clone()).to_f64());
    Ok(ContactStructure {
        nu,
        eventually_affine,
        slope_tail,
    })
}

/// `max b(n)/c(n)` over the tail window `[N/2, N]`.
pub fn limsup_ratio(b: &RealSeq, c: &RealSeq) -> Result<f64> {
    let horizon = b.horizon();
    if c.horizon() != horizon {
        return Err(Error::DimensionMismatch {
            expected: horizon,
            got: c.horizon(),
        });
    }
    let half = horizon / 2;
    if let Some(n) = (half..=horizon).find(|&n| c[n] <= 0.0) {
        return Err(Error::NotAdmissible {
            index: n,
            reason: "majorant must be positive on the tail window",
        });
    }
    let front = b.values()[..half.max(1)].iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let back = b.values()[half.max(1)..].iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if back <= front {
        return Err(Error::InvalidArgument(
            "sequence does not look unbounded on the prefix".into(),
        ));
    }
    Ok((half..=horizon)
        .map(|n| b[n] / c[n])
        .fold(f64::NEG_INFINITY, f64::max))
}
