//! Means of a single operator read from a file.

use anyhow::{bail, Context, Result};

use noerlund::ergodic_engine::{check_admissible, convergence_report_with, Status, Thresholds};
use noerlund::operator_core::{io::from_str_any, DEFAULT_RANK_TOL};
use noerlund::seq_calculus::cesaro_numbers;

use super::sequences::read_real;
use crate::output::{num, Header, Outcome, Table};
use crate::settings::Settings;

pub fn cesaro_means(settings: &Settings) -> Result<Outcome> {
    let path = settings.require_input()?;
    let horizon = settings.n.unwrap_or(1000);
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let norm = settings.norm.unwrap_or_default();
    let t = from_str_any(&text, norm).with_context(|| format!("reading operator from {}", path.display()))?;

    let mut header = Header { horizon: Some(horizon), ..Default::default() };
    header.param("input", path.display().to_string());
    header.param("norm", norm);
    let (s, label) = match &settings.s_input {
        Some(sp) => {
            let s = read_real(sp)?;
            check_admissible(&s, horizon)?;
            (s, format!("file:{}", sp.display()))
        }
        None => {
            let alpha = match settings.alpha.as_deref() {
                None => 1.0,
                Some([a]) => *a,
                Some(_) => bail!("cesaro-means takes a single --alpha"),
            };
            if !(alpha > 0.0) {
                bail!("Cesàro order must be positive, got {alpha}");
            }
            (cesaro_numbers(alpha, horizon + 8).values, format!("cesaro:{alpha}"))
        }
    };
    header.param("weights", &label);
    let defaults = Thresholds::default();
    let thresholds = Thresholds {
        rank_tol: header.tolerance("rank_tol", settings.tol.unwrap_or(DEFAULT_RANK_TOL), DEFAULT_RANK_TOL),
        ..defaults.clone()
    };
    header.tolerance("convergence_rel_atol", thresholds.rel_atol, defaults.rel_atol);
    header.tolerance("divergence_factor", thresholds.divergence_factor, defaults.divergence_factor);
    header.tolerance("power_drift", thresholds.drift_tol, defaults.drift_tol);

    let report = convergence_report_with(&t, &s, horizon, thresholds)?;
    let mut table = Table::new(&["n", "distance", "norm_ratio"]);
    for n in 0..=horizon {
        table.push(vec![n.to_string(), num(report.distances[n]), num(report.norm_ratios[n])]);
    }
    let failures = if report.status == Status::Diverged {
        vec![format!("means diverge: {}", report.reasons.join("; "))]
    } else {
        vec![]
    };
    Ok(Outcome {
        command: "cesaro-means",
        header,
        body: report.summary_json(),
        table: Some(table),
        passed: failures.is_empty(),
        failures,
    })
}
