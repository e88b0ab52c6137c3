//! Sequence commands: least concave majorant and majorant building.

use std::path::Path;

use anyhow::{Context, Result};
use serde_json::{json, Value};

use noerlund::concave_majorant::{contact_structure, lcm_recursive, MajorantResult, CONTACT_TOL};
use noerlund::majorant_builder::{build_majorant, difference_shapes, verify_growth_properties, BuiltMajorant, SHAPE_TOL};
use noerlund::scalar::parse_rational;
use noerlund::seq_calculus::io::{
    rational_from_json, rational_to_json, read_csv_rational, read_csv_real, real_from_json, real_to_json,
};
use noerlund::{RatSeq, RealSeq, Scalar, Sequence};

use crate::output::{Header, Outcome, Table};
use crate::settings::Settings;

fn is_json(path: &Path) -> bool {
    path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"))
}

fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

pub fn read_real(path: &Path) -> Result<RealSeq> {
    let text = read_file(path)?;
    let seq = if is_json(path) {
        real_from_json(&serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?)
    } else {
        read_csv_real(text.as_bytes())
    };
    seq.with_context(|| format!("reading sequence from {}", path.display()))
}

pub fn read_rational(path: &Path) -> Result<RatSeq> {
    let text = read_file(path)?;
    let seq = if is_json(path) {
        rational_from_json(&serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?)
    } else {
        read_csv_rational(text.as_bytes())
    };
    seq.with_context(|| format!("reading sequence from {}", path.display()))
}

/// Output helpers shared by the real and rational paths.
trait SeqOut: Scalar {
    fn seq_json(a: &Sequence<Self>) -> Value;
    fn cell(v: &Self) -> String;
}

impl SeqOut for f64 {
    fn seq_json(a: &RealSeq) -> Value {
        real_to_json(a)
    }
    fn cell(v: &f64) -> String {
        format!("{v:?}")
    }
}

impl SeqOut for num_rational::BigRational {
    fn seq_json(a: &RatSeq) -> Value {
        rational_to_json(a)
    }
    fn cell(v: &Self) -> String {
        noerlund::scalar::format_rational(v)
    }
}

fn lcm_outcome<T: SeqOut>(b: &Sequence<T>, tail: Option<T>, header: Header) -> Result<Outcome> {
    let r: MajorantResult<T> = lcm_recursive(b, tail)?;
    let cs = contact_structure(b, &r)?;
    let mut table = Table::new(&["n", "b", "c", "contact"]);
    for n in 0..=b.horizon() {
        table.push(vec![
            n.to_string(),
            T::cell(&b[n]),
            T::cell(&r.c[n]),
            r.contact_indices.binary_search(&n).is_ok().to_string(),
        ]);
    }
    let body = json!({
        "b": T::seq_json(b),
        "c": T::seq_json(&r.c),
        "contact_indices": r.contact_indices,
        "nu": cs.nu,
        "eventually_affine": cs.eventually_affine,
        "slope_tail": cs.slope_tail,
        "n_sup": r.n_sup,
        "ell": r.ell,
        "tail_slope": r.tail_slope.as_ref().map(T::cell),
    });
    Ok(Outcome { command: "lcm", header, body, table: Some(table), passed: true, failures: vec![] })
}

pub fn lcm(settings: &Settings) -> Result<Outcome> {
    let path = settings.require_input()?;
    let mut header = Header::default();
    header.param("input", path.display().to_string());
    header.param("exact", settings.exact);
    if !settings.exact {
        header.tolerance("contact_rel_tol", CONTACT_TOL, CONTACT_TOL);
    }
    let tail = settings
        .tail_slope
        .as_deref()
        .map(|t| parse_rational(t).with_context(|| format!("bad tail slope `{t}`")))
        .transpose()?;
    header.param("tail_slope", settings.tail_slope.clone());
    if settings.exact {
        let b = read_rational(path)?;
        header.horizon = Some(b.horizon());
        lcm_outcome(&b, tail, header)
    } else {
        let b = read_real(path)?;
        header.horizon = Some(b.horizon());
        lcm_outcome(&b, tail.map(|t| t.to_f64()), header)
    }
}

fn majorant_body<T: SeqOut>(built: &BuiltMajorant<T>) -> (Value, Table) {
    let mut table = Table::new(&["n", "b", "a", "c", "s"]);
    for n in 0..=built.s.horizon() {
        table.push(vec![
            n.to_string(),
            T::cell(&built.b[n]),
            T::cell(&built.a_transform[n]),
            T::cell(&built.c[n]),
            T::cell(&built.s[n]),
        ]);
    }
    let body = json!({
        "p": built.p,
        "b": T::seq_json(&built.b),
        "a_transform": T::seq_json(&built.a_transform),
        "c": T::seq_json(&built.c),
        "s": T::seq_json(&built.s),
        "ratio_window": built.ratio_window,
        "sandwich": built.sandwich,
        "warnings": built.warnings,
    });
    (body, table)
}

pub fn build(settings: &Settings) -> Result<Outcome> {
    let path = settings.require_input()?;
    let p = settings.p.unwrap_or(0);
    let mut header = Header::default();
    header.param("input", path.display().to_string());
    header.param("p", p);
    header.param("exact", settings.exact);
    header.tolerance("shape_rel_tol", SHAPE_TOL, SHAPE_TOL);

    let (mut body, table, s_real) = if settings.exact {
        let b = read_rational(path)?;
        let built = build_majorant(&b, p)?;
        let (body, table) = majorant_body(&built);
        (body, table, built.s.to_real())
    } else {
        let b = read_real(path)?;
        let built = build_majorant(&b, p)?;
        let (body, table) = majorant_body(&built);
        (body, table, built.s)
    };
    header.horizon = Some(s_real.horizon());
    let report = verify_growth_properties(&s_real, p);
    let passed = report.all_passed();
    let failures = report
        .preconditions
        .iter()
        .chain(report.properties())
        .filter(|c| !c.passed)
        .map(|c| format!("{} failed: {} (witness {:e})", c.name, c.rule, c.witness))
        .collect();
    body["growth_report"] = serde_json::to_value(&report)?;
    body["difference_shapes"] = serde_json::to_value(difference_shapes(&s_real, p))?;
    Ok(Outcome { command: "build-majorant", header, body, table: Some(table), passed, failures })
}
