//! Stratified ensemble runs: spectral verdict against empirical status.

use anyhow::{bail, Context, Result};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use noerlund::ergodic_engine::ensemble::{generate_ensemble, EnsembleConfig, EnsembleMember, Stratum};
use noerlund::ergodic_engine::{convergence_report_with, Status, Thresholds};
use noerlund::majorant_builder::build_majorant;
use noerlund::operator_core::{abel_mean, Verdict, DEFAULT_RANK_TOL};
use noerlund::seq_calculus::{cesaro_numbers, RealSeq};

use crate::output::{num, Header, Outcome, Table};
use crate::settings::Settings;

/// Largest accepted `‖limit - P‖` for a converged run.
pub const LIMIT_TOL: f64 = 1e-5;
/// Abel parameter `λ = 1 + h` for the consistency column.
pub const ABEL_H: f64 = 1e-4;

/// A named weight sequence.
#[derive(Debug, Clone)]
pub struct WeightSpec {
    pub label: String,
    pub s: RealSeq,
}

/// `cesaro:ALPHA` gives `A_α`; `built:P` runs the majorant builder on
/// `b(n) = (n+1)^(P+1)`, halved at odd `n`.
pub fn parse_weight_spec(text: &str, horizon: usize) -> Result<WeightSpec> {
    let (kind, arg) = text.split_once(':').with_context(|| format!("weights `{text}` must look like KIND:VALUE"))?;
    let s = match kind {
        "cesaro" => {
            let alpha: f64 = arg.parse().with_context(|| format!("bad Cesàro order `{arg}`"))?;
            if !(alpha > 0.0) {
                bail!("Cesàro order must be positive, got {alpha}");
            }
            cesaro_numbers(alpha, horizon).values
        }
        "built" => {
            let p: usize = arg.parse().with_context(|| format!("bad difference order `{arg}`"))?;
            let b = RealSeq::tabulate(horizon, |n| {
                let v = ((n + 1) as f64).powi(p as i32 + 1);
                if n % 2 == 1 { v / 2.0 } else { v }
            });
            build_majorant(&b, p)?.s
        }
        _ => bail!("unknown weight kind `{kind}` (expected cesaro or built)"),
    };
    Ok(WeightSpec { label: text.to_string(), s })
}

pub fn parse_stratum(text: &str) -> Result<Stratum> {
    Ok(match text {
        "resolvent" | "resolvent_set" => Stratum::ResolventSet,
        "semisimple" | "semisimple_at_one" => Stratum::SemisimpleAtOne,
        "jordan" | "jordan_at_one" => Stratum::JordanAtOne,
        _ => bail!("unknown stratum `{text}` (expected resolvent, semisimple or jordan)"),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct Row {
    pub id: usize,
    pub stratum: Stratum,
    pub dim: usize,
    pub circle_eigenvalue: bool,
    pub weights: String,
    pub verdict: Verdict,
    pub status: Status,
    pub agrees: bool,
    pub limit_error: Option<f64>,
    pub final_distance: f64,
    pub norm_ratio_tail: f64,
    pub abel_distance: Option<f64>,
}

pub fn expected_status(verdict: Verdict) -> Status {
    match verdict {
        Verdict::NonSimple => Status::Diverged,
        _ => Status::Converged,
    }
}

pub fn run_member(member: &EnsembleMember, spec: &WeightSpec, horizon: usize, thresholds: &Thresholds) -> Result<Row> {
    let report = convergence_report_with(&member.operator, &spec.s, horizon, thresholds.clone())?;
    let agrees = match report.status {
        Status::Undetermined => true,
        Status::Converged => {
            expected_status(report.verdict) == Status::Converged
                && report.limit_error.is_some_and(|e| e <= LIMIT_TOL)
        }
        status => expected_status(report.verdict) == status,
    };
    let abel_distance = match (&report.status, &report.limit_estimate) {
        (Status::Converged, Some(limit)) => Some(abel_mean(&member.operator, 1.0 + ABEL_H)?.distance(limit)),
        _ => None,
    };
    Ok(Row {
        id: member.id,
        stratum: member.stratum,
        dim: member.operator.dim(),
        circle_eigenvalue: member.has_circle_eigenvalue,
        weights: spec.label.clone(),
        verdict: report.verdict,
        status: report.status,
        agrees,
        limit_error: report.limit_error,
        final_distance: report.final_distance,
        norm_ratio_tail: report.norm_ratio_tail,
        abel_distance,
    })
}

pub fn ensemble(settings: &Settings) -> Result<Outcome> {
    let horizon = settings.n.unwrap_or(1024);
    if horizon < 16 {
        bail!("ensemble horizon must be at least 16");
    }
    let count = settings.count.unwrap_or(60);
    if count == 0 {
        bail!("ensemble needs count >= 1");
    }
    let strata = match &settings.strata {
        Some(list) => list.iter().map(|s| parse_stratum(s)).collect::<Result<Vec<_>>>()?,
        None => Stratum::ALL.to_vec(),
    };
    let config = EnsembleConfig {
        seed: settings.seed.unwrap_or(42),
        members: count,
        max_dim: settings.d_max.unwrap_or(6),
        norm_kind: settings.norm.unwrap_or_default(),
        strata,
        ..EnsembleConfig::default()
    };
    let specs = settings.weights.clone().unwrap_or_else(|| vec!["cesaro:1".into()]);
    // a few extra terms let the tail model look past N
    let specs = specs.iter().map(|t| parse_weight_spec(t, horizon + 8)).collect::<Result<Vec<_>>>()?;

    let mut header = Header { horizon: Some(horizon), ..Default::default() };
    let defaults = Thresholds::default();
    let thresholds = Thresholds {
        rank_tol: header.tolerance("rank_tol", settings.tol.unwrap_or(DEFAULT_RANK_TOL), DEFAULT_RANK_TOL),
        ..defaults.clone()
    };
    header.tolerance("convergence_rel_atol", thresholds.rel_atol, defaults.rel_atol);
    header.tolerance("divergence_factor", thresholds.divergence_factor, defaults.divergence_factor);
    header.tolerance("power_drift", thresholds.drift_tol, defaults.drift_tol);
    header.tolerance("limit_tol", LIMIT_TOL, LIMIT_TOL);
    header.param("seed", config.seed);
    header.param("count", config.members);
    header.param("d_max", config.max_dim);
    header.param("norm", config.norm_kind);
    header.param("strata", &config.strata);
    header.param("weights", specs.iter().map(|s| s.label.clone()).collect::<Vec<_>>());
    header.param("abel_h", ABEL_H);

    let members = generate_ensemble(&config)?;
    let jobs: Vec<(&EnsembleMember, &WeightSpec)> =
        members.iter().flat_map(|m| specs.iter().map(move |s| (m, s))).collect();
    let rows = jobs
        .par_iter()
        .map(|(m, s)| run_member(m, s, horizon, &thresholds))
        .collect::<Result<Vec<_>>>()?;

    let total = rows.len();
    let undetermined = rows.iter().filter(|r| r.status == Status::Undetermined).count();
    let disagreements: Vec<&Row> = rows.iter().filter(|r| !r.agrees).collect();
    let decided = total - undetermined;
    let failures = disagreements
        .iter()
        .map(|r| format!("member {} with {}: verdict {:?} but status {:?}, limit error {:?}", r.id, r.weights, r.verdict, r.status, r.limit_error))
        .collect::<Vec<_>>();

    let mut table = Table::new(&[
        "id", "stratum", "dim", "circle_eigenvalue", "weights", "verdict", "status", "agrees",
        "limit_error", "final_distance", "norm_ratio_tail", "abel_distance",
    ]);
    let opt = |x: Option<f64>| x.map(num).unwrap_or_default();
    for r in &rows {
        table.push(vec![
            r.id.to_string(),
            name(&r.stratum),
            r.dim.to_string(),
            r.circle_eigenvalue.to_string(),
            r.weights.clone(),
            name(&r.verdict),
            name(&r.status),
            r.agrees.to_string(),
            opt(r.limit_error),
            num(r.final_distance),
            num(r.norm_ratio_tail),
            opt(r.abel_distance),
        ]);
    }
    let body = json!({
        "summary": {
            "runs": total,
            "undetermined": undetermined,
            "undetermined_rate": undetermined as f64 / total as f64,
            "decided": decided,
            "agreeing": decided - disagreements.len(),
            "agreement_rate_excluding_undetermined":
                if decided > 0 { (decided - disagreements.len()) as f64 / decided as f64 } else { 1.0 },
        },
        "rows": rows,
    });
    Ok(Outcome {
        command: "ensemble",
        header,
        body,
        table: Some(table),
        passed: failures.is_empty(),
        failures,
    })
}

/// Serialized name of a unit enum variant.
fn name<T: Serialize>(v: &T) -> String {
    match serde_json::to_value(v) {
        Ok(serde_json::Value::String(s)) => s,
        Ok(other) => other.to_string(),
        Err(_) => String::new(),
    }
}
