use serde::Serialize;

use super::sequence::{RealSeq, Sequence};
use crate::scalar::Scalar;
use crate::{Error, Result};

/// Monotonicity and concavity verdicts on a materialized prefix.
///
/// `concave` and `convex` are `None` when the horizon is below 2 and
/// there is no second difference to look at.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Shape {
    pub nondecreasing: bool,
    pub strictly_increasing: bool,
    pub concave: Option<bool>,
    pub convex: Option<bool>,
}

impl Shape {
    pub fn is_concave(&self) -> bool {
        self.concave == Some(true)
    }

    pub fn is_convex(&self) -> bool {
        self.convex == Some(true)
    }
}

/// Exact shape check (no tolerance).
pub fn shape_check<T: Scalar>(a: &Sequence<T>) -> Shape {
    shape_check_tol(a, 0.0)
}

/// Shape check with relative slack `rel` on every non-strict comparison.
/// Strict increase is always checked exactly.
pub fn shape_check_tol<T: Scalar>(a: &Sequence<T>, rel: f64) -> Shape {
    let v = a.values();
    let nondecreasing = v.windows(2).all(|w| w[0].le_tol(&w[1], rel));
    let strictly_increasing = v.windows(2).all(|w| w[0] < w[1]);
    let (concave, convex) = if v.len() < 3 {
        (None, None)
    } else {
        let mut concave = true;
        let mut convex = true;
        for w in v.windows(3) {
            let outer = w[0].clone() + w[2].clone();
            let mid = w[1].clone() + w[1].clone();
            concave &= outer.le_tol(&mid, rel);
            convex &= mid.le_tol(&outer, rel);
            if !concave && !convex {
                break;
            }
        }
        (Some(concave), Some(convex))
    };
    Shape {
        nondecreasing,
        strictly_increasing,
        concave,
        convex,
    }
}

/// Piecewise-linear interpolant `φ_a` through the points `(n, a(n))`.
pub fn phi_interpolant(a: &RealSeq, x: f64) -> Result<f64> {
    let horizon = a.horizon();
    if !(0.0..=horizon as f64).contains(&x) {
        return Err(Error::OutOfDomain { x, horizon });
    }
    let n = x.floor() as usize;
    if n == horizon {
        return Ok(a[horizon]);
    }
    let t = x - n as f64;
    if t == 0.0 {
        return Ok(a[n]);
    }
    Ok(a[n] * (1.0 - t) + a[n + 1] * t)
}
