use num_complex::Complex64;
use serde::Serialize;

use super::svd::{singular_values, svd};
use super::{CMatrix, NormKind, Operator};
use crate::{Error, Result};

/// Default relative cut for numerical rank.
pub const DEFAULT_RANK_TOL: f64 = 1e-10;

/// Condition numbers above this are treated as singular.
fn max_condition() -> f64 {
    1.0 / (100.0 * f64::EPSILON)
}

/// What the resolvent does at 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    ResolventPoint,
    SimplePole,
    NonSimple,
}

#[derive(Debug, Clone)]
pub struct SpectralClassification {
    pub verdict: Verdict,
    /// Projection onto `N(I-T)` along `R(I-T)`; zero at a resolvent point,
    /// absent when the pole is not simple.
    pub projection: Option<Operator>,
    pub kernel_dim: usize,
    pub range_codim: usize,
    pub tolerance_used: f64,
}

struct SortedSvd {
    u: CMatrix,
    v: CMatrix,
    sigma: Vec<f64>,
}

fn sorted_svd(m: &CMatrix) -> SortedSvd {
    let s = svd(m);
    SortedSvd { u: s.u, v: s.v, sigma: s.sigma }
}

/// Rank below a relative cut `tol · σ_max`, refusing to decide when a
/// singular value falls within a decade on either side of the cut.
pub fn numerical_rank(m: &CMatrix, tol: f64) -> Result<usize> {
    rank_of(&sorted_svd(m).sigma, tol)
}

fn rank_of(sigma: &[f64], tol: f64) -> Result<usize> {
    let top = sigma.first().copied().unwrap_or(0.0);
    if top == 0.0 {
        return Ok(0);
    }
    let cut = tol * top;
    if let Some(&s) = sigma.iter().find(|&&s| s > cut / 10.0 && s < cut * 10.0) {
        return Err(Error::IndeterminateRank {
            singular_value: s,
            cut,
        });
    }
    Ok(sigma.iter().filter(|&&s| s >= cut).count())
}

fn condition(m: &CMatrix) -> f64 {
    let sv = singular_values(m);
    let (lo, hi) = sv
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(lo, hi), &s| (lo.min(s), hi.max(s)));
    if lo == 0.0 {
        f64::INFINITY
    } else {
        hi / lo
    }
}

/// `(λI - T)^{-1}`.
pub fn resolvent(t: &Operator, lambda: Complex64) -> Result<Operator> {
    let d = t.dim();
    let shifted = CMatrix::identity(d, d) * lambda - t.entries();
    let cond = condition(&shifted);
    if !(cond < max_condition()) {
        return Err(Error::SpectrumProximity { condition: cond });
    }
    let inv = shifted
        .clone()
        .try_inverse()
        .ok_or(Error::SpectrumProximity { condition: cond })?;
    let residual = NormKind::InducedSup.of(&(&shifted * &inv - CMatrix::identity(d, d)));
    if residual > 1e-8 * NormKind::InducedSup.of(&inv) {
        return Err(Error::SpectrumProximity { condition: cond });
    }
    Ok(t.like(inv))
}

/// Upper estimate of the spectral radius from power norms: the root
/// `(‖T^{2m}‖ / ‖T^m‖)^{1/m}` at `m = 2^24`, which cancels polynomial
/// growth factors that a plain `‖T^m‖^{1/m}` would keep. Norms are those of
/// repeated squares; on underflow or overflow the last root computed from
/// representable norms is returned.
pub fn spectral_radius_estimate(t: &Operator) -> f64 {
    let mut power = t.entries().clone();
    let mut prev = t.norm();
    if prev == 0.0 {
        return 0.0;
    }
    let mut estimate = prev;
    let mut m = 1.0f64;
    for _ in 0..24 {
        power = &power * &power;
        let norm = t.norm_kind().of(&power);
        if norm < 1e-250 {
            return estimate;
        }
        if !norm.is_finite() || norm > 1e250 {
            return estimate.max(1.0 + f64::EPSILON);
        }
        estimate = (norm / prev).powf(1.0 / m);
        prev = norm;
        m *= 2.0;
    }
    estimate
}

/// Abel mean `(λ - 1)(λI - T)^{-1}` for real `λ > 1`.
pub fn abel_mean(t: &Operator, lambda: f64) -> Result<Operator> {
    if !(lambda > 1.0) {
        return Err(Error::InvalidArgument(format!("Abel mean needs lambda > 1, got {lambda}")));
    }
    let r = spectral_radius_estimate(t);
    if r > 1.0 + 1e-6 {
        return Err(Error::InvalidArgument(format!(
            "spectral radius estimate {r} exceeds 1"
        )));
    }
    let res = resolvent(t, Complex64::new(lambda, 0.0))?;
    Ok(t.like(res.entries() * Complex64::new(lambda - 1.0, 0.0)))
}

/// Decides whether 1 is a resolvent point, a simple pole or a pole of
/// higher order, by comparing `rank(I - T)` with `rank((I - T)^2)`.
/// For a simple pole the projection is assembled from a kernel basis of
/// `I - T` and a basis of its range.
pub fn classify_one(t: &Operator, tol: f64) -> Result<SpectralClassification> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument("rank tolerance must be positive".into()));
    }
    let d = t.dim();
    let m = t.one_minus();
    let svd = sorted_svd(&m);
    let rank = rank_of(&svd.sigma, tol)?;
    let kernel_dim = d - rank;
    let base = SpectralClassification {
        verdict: Verdict::ResolventPoint,
        projection: None,
        kernel_dim,
        range_codim: kernel_dim,
        tolerance_used: tol,
    };
    if kernel_dim == 0 {
        return Ok(SpectralClassification {
            projection: Some(t.like(CMatrix::zeros(d, d))),
            ..base
        });
    }
    let rank_sq = numerical_rank(&(&m * &m), tol)?;
    if rank_sq != rank {
        return Ok(SpectralClassification {
            verdict: Verdict::NonSimple,
            ..base
        });
    }
    // columns: kernel basis (right singular vectors of the zero singular
    // values), then range basis (left singular vectors of the rest)
    let basis = CMatrix::from_fn(d, d, |i, j| {
        if j < kernel_dim {
            svd.v[(i, rank + j)]
        } else {
            svd.u[(i, j - kernel_dim)]
        }
    });
    let cond = condition(&basis);
    if !(cond < max_condition()) {
        return Err(Error::SpectrumProximity { condition: cond });
    }
    let inv = basis
        .clone()
        .try_inverse()
        .ok_or(Error::SpectrumProximity { condition: cond })?;
    let mut select = CMatrix::zeros(d, d);
    for k in 0..kernel_dim {
        select[(k, k)] = Complex64::new(1.0, 0.0);
    }
    let p = &basis * select * inv;
    Ok(SpectralClassification {
        verdict: Verdict::SimplePole,
        projection: Some(t.like(p)),
        ..base
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator_core::negated_jordan_block;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn jordan_at_one() -> Operator {
        Operator::from_real_rows(&[&[1.0, 1.0], &[0.0, 1.0]]).unwrap()
    }

    #[test]
    fn resolvent_of_zero() {
        let r = resolvent(&Operator::zeros(3), c(2.0)).unwrap();
        assert!(r.distance(&Operator::diagonal(&[c(0.5); 3])) < 1e-15);
    }

    #[test]
    fn negated_jordan_has_resolvent_at_one() {
        let t = negated_jordan_block();
        let r = resolvent(&t, c(1.0)).unwrap();
        // (I - T)^{-1} = [[2, 1], [0, 2]]^{-1}
        let expected = Operator::from_real_rows(&[&[0.5, -0.25], &[0.0, 0.5]]).unwrap();
        assert!(r.distance(&expected) < 1e-15);
    }

    #[test]
    fn eigenvalue_one_is_rejected() {
        let t = Operator::from_real_rows(&[&[1.0]]).unwrap();
        assert!(matches!(
            resolvent(&t, c(1.0)),
            Err(Error::SpectrumProximity { .. })
        ));
    }

    #[test]
    fn abel_mean_of_identity() {
        let a = abel_mean(&Operator::identity(2), 1.5).unwrap();
        assert!(a.distance(&Operator::identity(2)) < 1e-15);
        assert!(abel_mean(&Operator::identity(2), 1.0).is_err());
    }

    #[test]
    fn abel_mean_of_diagonal_tends_to_projection() {
        let t = Operator::diagonal(&[c(1.0), c(0.5)]);
        let p = Operator::diagonal(&[c(1.0), c(0.0)]);
        let mut last = f64::INFINITY;
        for h in [1e-1, 1e-2, 1e-3, 1e-4] {
            let dist = abel_mean(&t, 1.0 + h).unwrap().distance(&p);
            // closed form: h / (1 + h - 0.5)
            assert!((dist - h / (0.5 + h)).abs() < 1e-12);
            assert!(dist < last);
            last = dist;
        }
    }

    #[test]
    fn abel_mean_of_jordan_block_diverges() {
        let t = jordan_at_one();
        for h in [1e-1, 1e-2, 1e-3, 1e-4] {
            let a = abel_mean(&t, 1.0 + h).unwrap();
            let corner = a.entries()[(0, 1)].re;
            assert!((corner - 1.0 / h).abs() <= 1e-6 / h);
        }
    }

    #[test]
    fn spectral_radius_estimates() {
        assert!((spectral_radius_estimate(&jordan_at_one()) - 1.0).abs() < 1e-6);
        assert!((spectral_radius_estimate(&Operator::diagonal(&[c(0.5)])) - 0.5).abs() < 1e-12);
        assert!(spectral_radius_estimate(&Operator::diagonal(&[c(1.1)])) > 1.0);
        assert!((spectral_radius_estimate(&Operator::identity(3)) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn identity_is_a_simple_pole() {
        let k = classify_one(&Operator::identity(2), DEFAULT_RANK_TOL).unwrap();
        assert_eq!(k.verdict, Verdict::SimplePole);
        assert_eq!(k.kernel_dim, 2);
        assert!(k.projection.unwrap().distance(&Operator::identity(2)) < 1e-14);
    }

    #[test]
    fn negated_jordan_is_a_resolvent_point() {
        let k = classify_one(&negated_jordan_block(), DEFAULT_RANK_TOL).unwrap();
        assert_eq!(k.verdict, Verdict::ResolventPoint);
        assert_eq!(k.kernel_dim, 0);
        assert_eq!(k.projection.unwrap().norm(), 0.0);
    }

    #[test]
    fn jordan_block_at_one_is_not_simple() {
        let k = classify_one(&jordan_at_one(), DEFAULT_RANK_TOL).unwrap();
        assert_eq!(k.verdict, Verdict::NonSimple);
        assert!(k.projection.is_none());
        assert_eq!(k.kernel_dim, 1);
    }

    #[test]
    fn oblique_projection() {
        // eigenvalues 1 and 0.5 with non-orthogonal eigenvectors
        let t = Operator::from_real_rows(&[&[1.0, 1.0], &[0.0, 0.5]]).unwrap();
        let k = classify_one(&t, DEFAULT_RANK_TOL).unwrap();
        assert_eq!(k.verdict, Verdict::SimplePole);
        let p = k.projection.unwrap();
        // range span{(1,0)}, kernel span{(1,-0.5)}: P = [[1, 2], [0, 0]]
        let expected = Operator::from_real_rows(&[&[1.0, 2.0], &[0.0, 0.0]]).unwrap();
        assert!(p.distance(&expected) < 1e-12, "{p:?}");
    }

    #[test]
    fn ambiguous_rank_is_an_error() {
        let t = Operator::diagonal(&[c(1.0 - 1e-10), c(0.0)]);
        assert!(matches!(
            classify_one(&t, DEFAULT_RANK_TOL),
            Err(Error::IndeterminateRank { .. })
        ));
        assert!(classify_one(&t, 0.0).is_err());
    }
}
