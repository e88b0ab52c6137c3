use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use super::means::{check_admissible, means_from_powers, power_drift, successive_powers};
use crate::operator_core::{classify_one, CMatrix, Operator, Verdict, DEFAULT_RANK_TOL};
use crate::seq_calculus::{delta, iterate, DiffOp, RealSeq};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Converged,
    Diverged,
    Undetermined,
}

/// Thresholds behind the status decision.
#[derive(Debug, Clone, Serialize)]
pub struct Thresholds {
    /// Absolute agreement required, relative to `1 + ‖limit‖`.
    pub rel_atol: f64,
    /// Tail minimum above this multiple of the global minimum means divergence.
    pub divergence_factor: f64,
    /// Correction terms in the tail model.
    pub model_terms: usize,
    pub samples_per_window: usize,
    pub rank_tol: f64,
    pub drift_tol: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Self {
            rel_atol: 1e-6,
            divergence_factor: 10.0,
            model_terms: 3,
            samples_per_window: 48,
            rank_tol: DEFAULT_RANK_TOL,
            drift_tol: 1e-8,
        }
    }
}

/// Least-squares tail fit `M_n ≈ L + Σ_j w_j(n) X_j` on one index window,
/// with `w_j(n) = (Δ^j a)(n+j+1)/s(n)` and `a = Δs`.
#[derive(Debug, Clone)]
pub struct TailFit {
    pub window: (usize, usize),
    pub limit: Operator,
    /// Largest `‖M_n - fit(n)‖` over the sampled indices.
    pub residual: f64,
}

#[derive(Debug, Clone)]
pub struct ConvergenceReport {
    pub horizon: usize,
    pub verdict: Verdict,
    /// Projection onto `ker(I-T)` along `range(I-T)`, when `1` is a simple pole.
    pub projection: Option<Operator>,
    /// `‖M_n - P‖`, or `‖M_n‖` when there is no projection.
    pub distances: RealSeq,
    /// `‖T^n‖ / s(n)`.
    pub norm_ratios: RealSeq,
    pub status: Status,
    pub final_distance: f64,
    /// Largest distance over the last quarter of the horizon.
    pub raw_tail_max: f64,
    /// `max_{N/2 ≤ n ≤ N} ‖T^n‖/s(n)`.
    pub norm_ratio_tail: f64,
    /// `‖(I-T) M_N‖`.
    pub fixed_point_residual: f64,
    pub power_drift: f64,
    pub fits: Vec<TailFit>,
    /// Limit taken from the last window fit.
    pub limit_estimate: Option<Operator>,
    /// `‖limit_estimate - P‖` (or `‖limit_estimate‖` without a projection).
    pub limit_error: Option<f64>,
    pub thresholds: Thresholds,
    pub reasons: Vec<String>,
}

impl ConvergenceReport {
    pub fn summary_json(&self) -> serde_json::Value {
        let op = |o: &Option<Operator>| o.as_ref().map(crate::operator_core::io::to_json);
        serde_json::json!({
            "horizon": self.horizon,
            "verdict": self.verdict,
            "status": self.status,
            "final_distance": self.final_distance,
            "raw_tail_max": self.raw_tail_max,
            "norm_ratio_tail": self.norm_ratio_tail,
            "fixed_point_residual": self.fixed_point_residual,
            "power_drift": self.power_drift,
            "limit_error": self.limit_error,
            "fit_residuals": self.fits.iter().map(|f| serde_json::json!({
                "window": [f.window.0, f.window.1],
                "residual": f.residual,
            })).collect::<Vec<_>>(),
            "projection": op(&self.projection),
            "limit_estimate": op(&self.limit_estimate),
            "thresholds": self.thresholds,
            "reasons": self.reasons,
        })
    }

    /// Rows `n, distance, norm_ratio`.
    pub fn write_csv<W: std::io::Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["n", "distance", "norm_ratio"])?;
        for n in 0..=self.horizon {
            out.write_record([
                n.to_string(),
                format!("{:?}", self.distances[n]),
                format!("{:?}", self.norm_ratios[n]),
            ])?;
        }
        out.flush()?;
        Ok(())
    }
}

pub fn convergence_report(t: &Operator, s: &RealSeq, horizon: usize) -> Result<ConvergenceReport> {
    convergence_report_with(t, s, horizon, Thresholds::default())
}

pub fn convergence_report_with(
    t: &Operator,
    s: &RealSeq,
    horizon: usize,
    thresholds: Thresholds,
) -> Result<ConvergenceReport> {
    if horizon < 16 {
        return Err(Error::InsufficientHorizon { what: "convergence report", needed: 16, got: horizon });
    }
    check_admissible(s, horizon)?;
    let classification = classify_one(t, thresholds.rank_tol)?;
    let projection = classification.projection.clone();

    // The tail model looks a few indices past N; use the generator if there
    // is one, otherwise shrink the fitted range.
    let look_ahead = thresholds.model_terms + 1;
    let s_ext = s.to_horizon(horizon + look_ahead).unwrap_or_else(|_| s.clone());
    let fit_top = horizon.min(s_ext.horizon().saturating_sub(look_ahead));

    let a = delta(&s_ext);
    let powers = successive_powers(t, horizon);
    let means = means_from_powers(t, &powers, &a.values()[..=horizon], s.values());

    let target = projection.clone().unwrap_or_else(|| Operator::zeros(t.dim()).with_norm(t.norm_kind()));
    let distances = RealSeq::from_vec(means.iter().map(|m| m.distance(&target)).collect())?;
    let norm_ratios =
        RealSeq::from_vec((0..=horizon).map(|n| t.norm_kind().of(&powers[n]) / s[n]).collect())?;
    let norm_ratio_tail = norm_ratios.values()[horizon / 2..].iter().cloned().fold(0.0, f64::max);
    let fixed_point_residual = t.norm_kind().of(&(t.one_minus() * means[horizon].entries()));
    let drift = power_drift(t, horizon);

    let dist = distances.values();
    let window_max = |lo: usize, hi: usize| dist[lo..=hi].iter().cloned().fold(0.0, f64::max);
    let raw_tail_max = window_max(3 * horizon / 4, horizon);
    let global_min = dist.iter().cloned().fold(f64::INFINITY, f64::min);
    let tail_min = dist[3 * horizon / 4..].iter().cloned().fold(f64::INFINITY, f64::min);

    let mut reasons = Vec::new();
    let mut fits = Vec::new();
    let windows = [(fit_top / 4, fit_top / 2), (fit_top / 2, fit_top)];
    for &(lo, hi) in &windows {
        if hi > lo + thresholds.model_terms + 1 {
            fits.push(tail_fit(t, &means, &a, s_ext.values(), lo, hi, &thresholds));
        }
    }
    let limit_estimate = fits.last().map(|f| f.limit.clone());
    let limit_error = limit_estimate.as_ref().map(|l| l.distance(&target));

    let status = if !tail_min.is_finite() || tail_min > thresholds.divergence_factor * global_min.max(f64::MIN_POSITIVE) {
        reasons.push(format!(
            "tail minimum {tail_min:e} exceeds {} x global minimum {global_min:e}",
            thresholds.divergence_factor
        ));
        Status::Diverged
    } else if drift > thresholds.drift_tol {
        reasons.push(format!("power drift {drift:e} above {:e}", thresholds.drift_tol));
        Status::Undetermined
    } else if fits.len() < 2 {
        reasons.push("horizon too short for two fit windows".into());
        Status::Undetermined
    } else {
        let (f1, f2) = (&fits[0], &fits[1]);
        let atol = thresholds.rel_atol * (1.0 + f2.limit.norm());
        let gap = f1.limit.distance(&f2.limit);
        let trend_ok = {
            let n = fit_top;
            window_max(n / 8, n / 4) >= window_max(n / 4, n / 2)
                && window_max(n / 4, n / 2) >= window_max(n / 2, n)
        };
        let mut ok = true;
        if gap > atol {
            reasons.push(format!("window limits differ by {gap:e} > {atol:e}"));
            ok = false;
        }
        if f2.residual > atol {
            reasons.push(format!("tail model residual {:e} > {atol:e}", f2.residual));
            ok = false;
        }
        if !trend_ok {
            reasons.push("distance window maxima are not non-increasing".into());
            ok = false;
        }
        if ok {
            Status::Converged
        } else {
            Status::Undetermined
        }
    };

    Ok(ConvergenceReport {
        horizon,
        verdict: classification.verdict,
        projection,
        final_distance: dist[horizon],
        distances,
        norm_ratios,
        status,
        raw_tail_max,
        norm_ratio_tail,
        fixed_point_residual,
        power_drift: drift,
        fits,
        limit_estimate,
        limit_error,
        thresholds,
        reasons,
    })
}

fn tail_fit(
    t: &Operator,
    means: &[Operator],
    a: &RealSeq,
    s: &[f64],
    lo: usize,
    hi: usize,
    th: &Thresholds,
) -> TailFit {
    let count = th.samples_per_window.min(hi - lo + 1);
    let mut idx: Vec<usize> = (0..count)
        .map(|i| lo + ((hi - lo) as f64 * i as f64 / (count - 1) as f64).round() as usize)
        .collect();
    idx.dedup();

    let diffs: Vec<RealSeq> = (0..th.model_terms).map(|j| iterate(DiffOp::Delta, a, j)).collect();
    let basis = |n: usize| -> Vec<f64> {
        let mut row = vec![1.0];
        row.extend((0..th.model_terms).map(|j| diffs[j][n + j + 1] / s[n]));
        row
    };
    let rows: Vec<Vec<f64>> = idx.iter().map(|&n| basis(n)).collect();
    let cols = th.model_terms + 1;
    let scales: Vec<f64> = (0..cols)
        .map(|j| rows.iter().map(|r| r[j].abs()).fold(0.0, f64::max))
        .collect();
    let design = DMatrix::from_fn(rows.len(), cols, |i, j| {
        if scales[j] > 0.0 { rows[i][j] / scales[j] } else { 0.0 }
    });

    let d = t.dim();
    let rhs = DMatrix::from_fn(rows.len(), 2 * d * d, |i, c| {
        let z = means[idx[i]].entries().as_slice()[c / 2];
        if c % 2 == 0 { z.re } else { z.im }
    });
    let svd = design.clone().svd(true, true);
    let eps = 1e-12 * svd.singular_values.max();
    let coef = svd.solve(&rhs, eps).expect("SVD computed with U and V");

    let mut residual: f64 = 0.0;
    let fitted = &design * &coef;
    for i in 0..rows.len() {
        let m = CMatrix::from_fn(d, d, |r, c| {
            let k = c * d + r;
            Complex64::new(fitted[(i, 2 * k)], fitted[(i, 2 * k + 1)])
        });
        residual = residual.max(t.norm_kind().of(&(m - means[idx[i]].entries())));
    }
    let limit = CMatrix::from_fn(d, d, |r, c| {
        let k = c * d + r;
        let scale = if scales[0] > 0.0 { scales[0] } else { 1.0 };
        Complex64::new(coef[(0, 2 * k)], coef[(0, 2 * k + 1)]) / scale
    });
    TailFit { window: (lo, hi), limit: t.like(limit), residual }
}
