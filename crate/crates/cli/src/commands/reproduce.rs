//! Reproduction runs for the two worked operator examples.

use anyhow::{bail, Result};
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;
use serde_json::json;

use noerlund::ergodic_engine::{convergence_report_with, SquareMatrix, Status, Thresholds};
use noerlund::operator_core::{negated_jordan_block, shift_norms_closed_form, DEFAULT_RANK_TOL};
use noerlund::scalar::{format_rational, ratio};
use noerlund::seq_calculus::{delta, h_index, l1_tail_fraction, shape_check, sigma, HValue, RatSeq};

use crate::output::{num, Header, Outcome, Table};
use crate::settings::Settings;

#[derive(Debug, Clone, Serialize)]
pub struct Assertion {
    pub name: &'static str,
    pub passed: bool,
    pub arithmetic: &'static str,
    /// First index at which the assertion fails.
    pub failing_index: Option<usize>,
    pub detail: String,
}

impl Assertion {
    fn new(name: &'static str, arithmetic: &'static str, failing_index: Option<usize>, detail: String) -> Self {
        Self { name, passed: failing_index.is_none(), arithmetic, failing_index, detail }
    }
}

fn finish(command: &'static str, header: Header, assertions: Vec<Assertion>, extra: serde_json::Value, table: Table) -> Outcome {
    let failures = assertions
        .iter()
        .filter(|a| !a.passed)
        .map(|a| match a.failing_index {
            Some(i) => format!("{} fails at index {i}: {}", a.name, a.detail),
            None => format!("{}: {}", a.name, a.detail),
        })
        .collect::<Vec<_>>();
    Outcome {
        command,
        header,
        body: json!({ "assertions": assertions, "data": extra }),
        table: Some(table),
        passed: failures.is_empty(),
        failures,
    }
}

/// `a(0) = 1, a(1) = 5/2, a(n) = 1/(n-1) + 2/n + 1/(n+1)`.
pub fn counterexample_weights(horizon: usize) -> RatSeq {
    RatSeq::tabulate(horizon, |n| match n {
        0 => ratio(1, 1),
        1 => ratio(5, 2),
        _ => {
            let n = n as i64;
            ratio(1, n - 1) + ratio(2, n) + ratio(1, n + 1)
        }
    })
}

/// `Σ_{k≤n} (-1)^k k a(n-k)`.
pub fn alternating_sum(a: &RatSeq, n: usize) -> BigRational {
    (0..=n)
        .map(|k| {
            let term = ratio(k as i64, 1) * &a[n - k];
            if k % 2 == 0 { term } else { -term }
        })
        .sum()
}

/// Smallest horizon the convergence report accepts.
pub const MIN_CONVERGENCE_HORIZON: usize = 16;
/// Tail-share threshold for the empirical `ℓ₁` check of `Δ²s`.
pub const L1_SHARE_THRESHOLD: f64 = 1e-2;
/// Allowed `‖limit - 0‖` for the convergence assertion.
pub const LIMIT_TOL: f64 = 1e-5;

pub fn reproduce_6_10(settings: &Settings) -> Result<Outcome> {
    let horizon = settings.n.unwrap_or(64);
    if horizon < 8 {
        bail!("reproduce-6-10 needs N >= 8, got {horizon}");
    }
    let mut header = Header { horizon: Some(horizon), ..Default::default() };
    let rank_tol = header.tolerance("rank_tol", settings.tol.unwrap_or(DEFAULT_RANK_TOL), DEFAULT_RANK_TOL);
    let conv_horizon = horizon.max(MIN_CONVERGENCE_HORIZON);
    header.param("convergence_horizon", conv_horizon);
    let limit_tol = header.tolerance("limit_tol", LIMIT_TOL, LIMIT_TOL);
    let l1_share = header.tolerance("l1_tail_share", L1_SHARE_THRESHOLD, L1_SHARE_THRESHOLD);
    let thresholds = Thresholds { rank_tol, ..Thresholds::default() };
    header.tolerance("convergence_rel_atol", thresholds.rel_atol, Thresholds::default().rel_atol);

    let a = counterexample_weights(conv_horizon);
    let s = sigma(&a);
    let mut assertions = Vec::new();

    // (a) exact alternating identity
    let bad = (1..=horizon).find(|&n| alternating_sum(&a, n) != ratio(-1, n as i64));
    assertions.push(Assertion::new(
        "alternating_identity",
        "exact",
        bad,
        format!("sum_k (-1)^k k a(n-k) = -1/n for 1 <= n <= {horizon}"),
    ));

    // (b) exact power norms
    let one = |x: i64| Complex::new(ratio(x, 1), BigRational::zero());
    let t = SquareMatrix::from_rows(vec![vec![one(-1), one(-1)], vec![one(0), one(-1)]])?;
    let mut power = SquareMatrix::identity(2);
    let mut exact_norms = Vec::with_capacity(horizon + 1);
    let mut bad = None;
    for n in 0..=horizon {
        let norm = power.norm();
        if bad.is_none() && norm != ratio(n as i64 + 1, 1) {
            bad = Some(n);
        }
        exact_norms.push(norm);
        power = power.mul(&t);
    }
    assertions.push(Assertion::new(
        "power_norms",
        "exact",
        bad,
        format!("||T^n|| = n + 1 under induced_sup for 0 <= n <= {horizon}"),
    ));

    // (c) convergence of the means to zero
    let s_real = s.to_real();
    let op = negated_jordan_block();
    let report = convergence_report_with(&op, &s_real, conv_horizon, thresholds)?;
    let ok = report.status == Status::Converged
        && report.projection.as_ref().is_some_and(|p| p.norm() == 0.0)
        && report.limit_error.is_some_and(|e| e <= limit_tol);
    assertions.push(Assertion::new(
        "means_converge_to_zero",
        "float",
        if ok { None } else { Some(conv_horizon) },
        format!(
            "status {:?}, verdict {:?}, limit error {:?} (tol {limit_tol:e}) at horizon {conv_horizon}",
            report.status, report.verdict, report.limit_error
        ),
    ));

    // (d) displayed lower bound on ||T^n|| / s(n)
    let lower = |n: usize| (n as f64 + 1.0) / (7.5 + 4.0 * ((n - 1) as f64).ln());
    let bad = (3..=horizon).find(|&n| (n as f64 + 1.0) / s_real[n] < lower(n));
    assertions.push(Assertion::new(
        "norm_ratio_lower_bound",
        "float",
        bad,
        format!("||T^n||/s(n) >= (n+1)/(15/2 + 4 ln(n-1)) for 3 <= n <= {horizon}"),
    ));

    // (e) concavity and summable second differences
    let prefix = s.to_horizon(horizon)?;
    let concave = shape_check(&prefix).is_concave();
    let share = l1_tail_fraction(&delta(&delta(&prefix)).to_real());
    assertions.push(Assertion::new(
        "concave_with_summable_second_difference",
        "exact shape, float share",
        if concave && share < l1_share { None } else { Some(horizon) },
        format!("s concave: {concave}; last-quarter share of sum |Δ²s| = {share:e} (threshold {l1_share:e})"),
    ));

    let mut table = Table::new(&["n", "a", "s", "norm", "ratio", "lower_bound"]);
    for n in 0..=horizon {
        table.push(vec![
            n.to_string(),
            format_rational(&a[n]),
            format_rational(&s[n]),
            format_rational(&exact_norms[n]),
            num((n as f64 + 1.0) / s_real[n]),
            if n >= 3 { num(lower(n)) } else { String::new() },
        ]);
    }
    let extra = json!({
        "a_2": format_rational(&a[2]),
        "convergence": report.summary_json(),
    });
    Ok(finish("reproduce-6-10", header, assertions, extra, table))
}

/// Bound on the `k`-th root of `‖T^k‖` at `k = N`.
pub const ROOT_BOUND: f64 = 1.05;

pub fn reproduce_6_3(settings: &Settings) -> Result<Outcome> {
    let horizon = settings.n.unwrap_or(4096);
    if horizon < 64 {
        bail!("reproduce-6-3 needs N >= 64, got {horizon}");
    }
    let alphas = settings.alpha.clone().unwrap_or_else(|| vec![1.0, 2.0, 4.0, 6.0]);
    if alphas.is_empty() || alphas.iter().any(|a| !(a.is_finite() && *a >= 0.0)) {
        bail!("alphas must be finite and nonnegative");
    }
    let mut header = Header { horizon: Some(horizon), ..Default::default() };
    header.param("alphas", &alphas);
    let root_bound = header.tolerance("root_bound", ROOT_BOUND, ROOT_BOUND);
    let slack = header.tolerance("lower_bound_rel_slack", 1e-12, 1e-12);

    let norms = shift_norms_closed_form(horizon);
    let mut assertions = Vec::new();

    let lower = |k: usize| (2.0 * ((k + 1) as f64).sqrt() - 2.0).exp();
    let bad = (0..=horizon).find(|&k| norms[k] < lower(k) * (1.0 - slack));
    assertions.push(Assertion::new(
        "lower_bound",
        "float",
        bad,
        format!("||T^k|| >= exp(2 sqrt(k+1) - 2) for 0 <= k <= {horizon}"),
    ));

    let root = norms[horizon].powf(1.0 / horizon as f64);
    let ok = root > 1.0 && root < root_bound;
    assertions.push(Assertion::new(
        "root_near_one",
        "float",
        if ok { None } else { Some(horizon) },
        format!("||T^N||^(1/N) = {root} should lie in (1, {root_bound})"),
    ));

    let m_max = alphas.iter().cloned().fold(0.0, f64::max).ceil() as u32;
    let h = h_index(&norms, m_max)?;
    assertions.push(Assertion::new(
        "h_index_undetermined",
        "float",
        if h.value == HValue::InfiniteOrUndetermined { None } else { Some(horizon) },
        format!("h_index with m_max = {m_max} gives {:?}", h.value),
    ));

    let mut growth = Vec::new();
    for &alpha in &alphas {
        let r = |k: usize| norms[k] / (k as f64).powf(alpha);
        let (q, half) = (r(horizon / 4), r(horizon / 2));
        let last = r(horizon);
        let ok = last > half && half > q;
        growth.push(json!({ "alpha": alpha, "ratio_quarter": q, "ratio_half": half, "ratio_end": last }));
        assertions.push(Assertion::new(
            "outgrows_polynomial",
            "float",
            if ok { None } else { Some(horizon) },
            format!("||T^k||/k^{alpha} increases over k = N/4, N/2, N: {q:e}, {half:e}, {last:e}"),
        ));
    }

    let mut table = Table::new(&["k", "norm", "lower_bound", "root"]);
    for k in 0..=horizon {
        let root = if k == 0 { String::new() } else { num(norms[k].powf(1.0 / k as f64)) };
        table.push(vec![k.to_string(), num(norms[k]), num(lower(k)), root]);
    }
    let extra = json!({
        "first_norm": norms[1],
        "root_at_horizon": root,
        "growth": growth,
        "h_index": h,
    });
    Ok(finish("reproduce-6-3", header, assertions, extra, table))
}
