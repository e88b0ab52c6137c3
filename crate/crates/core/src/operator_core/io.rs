//! Operator formats.
//!
//! JSON: `{"norm": "induced_sup", "entries": [[[re, im], …], …]}` with rows
//! in order; a bare array of rows is also accepted. Text: the dimension
//! `d`, then `d²` whitespace-separated entries `a+bi` in row-major order.

use num_complex::Complex64;
use serde_json::{json, Value};

use super::{CMatrix, NormKind, Operator};
use crate::{Error, Result};

fn parse_err(message: impl Into<String>) -> Error {
    Error::Parse {
        line: 0,
        message: message.into(),
    }
}

pub fn to_json(t: &Operator) -> Value {
    let d = t.dim();
    let rows: Vec<Value> = (0..d)
        .map(|i| {
            Value::Array(
                (0..d)
                    .map(|j| {
                        let z = t.entries()[(i, j)];
                        json!([z.re, z.im])
                    })
                    .collect(),
            )
        })
        .collect();
    json!({ "norm": t.norm_kind(), "entries": rows })
}

fn complex_of(v: &Value) -> Option<Complex64> {
    match v {
        Value::Array(pair) if pair.len() == 2 => {
            Some(Complex64::new(pair[0].as_f64()?, pair[1].as_f64()?))
        }
        Value::Number(n) => Some(Complex64::new(n.as_f64()?, 0.0)),
        Value::String(s) => parse_complex(s),
        _ => None,
    }
}

pub fn from_json(doc: &Value) -> Result<Operator> {
    let (rows, norm) = match doc {
        Value::Array(rows) => (rows, NormKind::default()),
        Value::Object(map) => {
            let rows = map
                .get("entries")
                .and_then(Value::as_array)
                .ok_or_else(|| parse_err("missing \"entries\" array"))?;
            let norm = match map.get("norm") {
                Some(v) => serde_json::from_value(v.clone())?,
                None => NormKind::default(),
            };
            (rows, norm)
        }
        _ => return Err(parse_err("expected an object or an array of rows")),
    };
    let d = rows.len();
    let mut m = CMatrix::zeros(d, d);
    for (i, row) in rows.iter().enumerate() {
        let row = row
            .as_array()
            .ok_or_else(|| parse_err(format!("row {i} is not an array")))?;
        if row.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: row.len(),
            });
        }
        for (j, v) in row.iter().enumerate() {
            m[(i, j)] = complex_of(v)
                .ok_or_else(|| parse_err(format!("entry ({i}, {j}) is not a complex number")))?;
        }
    }
    Operator::new(m, norm)
}

/// Parses `a`, `bi`, `a+bi`, `a-bi`, `i`, `-i`, with exponents allowed.
pub fn parse_complex(text: &str) -> Option<Complex64> {
    let s = text.trim();
    if s.is_empty() {
        return None;
    }
    let Some(body) = s.strip_suffix('i').or_else(|| s.strip_suffix('j')) else {
        return s.parse::<f64>().ok().map(|re| Complex64::new(re, 0.0));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let imag = |part: &str| -> Option<f64> {
        match part {
            "" | "+" => Some(1.0),
            "-" => Some(-1.0),
            p => p.parse().ok(),
        }
    };
    match split {
        Some(k) => Some(Complex64::new(body[..k].parse().ok()?, imag(&body[k..])?)),
        None => Some(Complex64::new(0.0, imag(body)?)),
    }
}

pub fn format_complex(z: Complex64) -> String {
    if z.im.is_sign_negative() {
        format!("{}-{}i", z.re, -z.im)
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}

pub fn to_text(t: &Operator) -> String {
    let d = t.dim();
    let mut out = format!("{d}\n");
    for i in 0..d {
        let row: Vec<String> = (0..d).map(|j| format_complex(t.entries()[(i, j)])).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

pub fn from_text(text: &str, norm: NormKind) -> Result<Operator> {
    let mut tokens = text
        .lines()
        .enumerate()
        .flat_map(|(ln, line)| {
            let line = line.split('#').next().unwrap_or("");
            line.split_whitespace().map(move |tok| (ln + 1, tok))
        });
    let (line, first) = tokens.next().ok_or_else(|| parse_err("empty input"))?;
    let d: usize = first.parse().map_err(|_| Error::Parse {
        line,
        message: format!("dimension {first:?} is not a count"),
    })?;
    let mut m = CMatrix::zeros(d, d);
    for idx in 0..d * d {
        let (line, tok) = tokens.next().ok_or_else(|| Error::Parse {
            line: 0,
            message: format!("expected {} entries, found {idx}", d * d),
        })?;
        m[(idx / d, idx % d)] = parse_complex(tok).ok_or_else(|| Error::Parse {
            line,
            message: format!("cannot parse {tok:?} as a complex number"),
        })?;
    }
    if let Some((line, tok)) = tokens.next() {
        return Err(Error::Parse {
            line,
            message: format!("unexpected trailing token {tok:?}"),
        });
    }
    Operator::new(m, norm)
}

/// Accepts either format, deciding by the first non-blank character.
pub fn from_str_any(text: &str, norm: NormKind) -> Result<Operator> {
    match text.trim_start().chars().next() {
        Some('{') | Some('[') => from_json(&serde_json::from_str(text)?),
        _ => from_text(text, norm),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_forms() {
        let cases = [
            ("1", (1.0, 0.0)),
            ("-2.5", (-2.5, 0.0)),
            ("3i", (0.0, 3.0)),
            ("-i", (0.0, -1.0)),
            ("i", (0.0, 1.0)),
            ("1+2i", (1.0, 2.0)),
            ("1-2i", (1.0, -2.0)),
            ("1e-3+2e-4i", (1e-3, 2e-4)),
            ("-1.5e+2-i", (-150.0, -1.0)),
        ];
        for (text, (re, im)) in cases {
            assert_eq!(parse_complex(text), Some(Complex64::new(re, im)), "{text}");
        }
        assert_eq!(parse_complex("1+2"), None);
        assert_eq!(parse_complex("abc"), None);
    }

    #[test]
    fn text_round_trip() {
        let mut m = CMatrix::zeros(2, 2);
        m[(0, 0)] = Complex64::new(0.1, -0.3);
        m[(0, 1)] = Complex64::new(-1.0, 0.0);
        m[(1, 1)] = Complex64::new(2.0, 1e-17);
        let t = Operator::new(m, NormKind::InducedL1).unwrap();
        let back = from_text(&to_text(&t), NormKind::InducedL1).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn json_round_trip() {
        let t = Operator::from_real_rows(&[&[1.0, 2.0], &[3.0, 4.0]])
            .unwrap()
            .with_norm(NormKind::SpectralL2);
        let doc = to_json(&t);
        assert_eq!(doc["norm"], "spectral_l2");
        assert_eq!(from_json(&doc).unwrap(), t);
    }

    #[test]
    fn bare_json_rows() {
        let t = from_str_any("[[[1, 0], [0, 1]], [[0, 0], \"2-i\"]]", NormKind::InducedSup).unwrap();
        assert_eq!(t.entries()[(0, 1)], Complex64::new(0.0, 1.0));
        assert_eq!(t.entries()[(1, 1)], Complex64::new(2.0, -1.0));
    }

    #[test]
    fn text_errors_carry_line_numbers() {
        match from_text("2\n1 0\n0 x\n", NormKind::InducedSup) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        assert!(from_text("2\n1 0 0\n", NormKind::InducedSup).is_err());
        assert!(from_text("1\n1 2\n", NormKind::InducedSup).is_err());
        assert!(from_json(&serde_json::json!([[1, 2]])).is_err());
    }
}
