//! Text formats for sequences: CSV with one value per line (index implicit)
//! and JSON `{"values": [...], "generator": tag}`. Exact values are written
//! as `"p/q"` strings.

use std::io::{Read, Write};

use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::sequence::{RatSeq, RealSeq, Sequence};
use crate::scalar::{format_rational, parse_rational, Scalar};
use crate::{Error, Result};

fn read_column<T: Scalar>(
    reader: impl Read,
    parse: impl Fn(&str) -> Option<T>,
) -> Result<Sequence<T>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(reader);
    let mut values = Vec::new();
    for record in rdr.records() {
        let record = record?;
        let line = record.position().map(|p| p.line() as usize).unwrap_or(0);
        if record.len() != 1 {
            return Err(Error::Parse {
                line,
                message: format!("expected one value, found {} fields", record.len()),
            });
        }
        let field = &record[0];
        if field.is_empty() {
            continue;
        }
        let v = parse(field).ok_or_else(|| Error::Parse {
            line,
            message: format!("cannot parse {field:?} as a number"),
        })?;
        values.push(v);
    }
    if values.is_empty() {
        return Err(Error::Parse {
            line: 0,
            message: "no values".into(),
        });
    }
    Sequence::from_vec(values)
}

fn parse_real(field: &str) -> Option<f64> {
    match field.parse::<f64>() {
        Ok(v) if v.is_finite() => Some(v),
        Ok(_) => None,
        Err(_) => parse_rational(field).map(|r| r.to_f64()),
    }
}

pub fn read_csv_real(reader: impl Read) -> Result<RealSeq> {
    read_column(reader, parse_real)
}

/// Reads exact values; plain decimals such as `0.25` are accepted and
/// converted exactly.
pub fn read_csv_rational(reader: impl Read) -> Result<RatSeq> {
    read_column(reader, |f| parse_rational(f).or_else(|| decimal_to_rational(f)))
}

fn decimal_to_rational(field: &str) -> Option<BigRational> {
    let (int, frac) = field.split_once('.')?;
    let digits = format!("{int}{frac}");
    let denom = format!("1{}", "0".repeat(frac.len()));
    parse_rational(&format!("{digits}/{denom}"))
}

pub fn write_csv_real(a: &RealSeq, mut w: impl Write) -> Result<()> {
    for v in a.values() {
        writeln!(w, "{v:?}")?;
    }
    Ok(())
}

pub fn write_csv_rational(a: &RatSeq, mut w: impl Write) -> Result<()> {
    for v in a.values() {
        writeln!(w, "{}", format_rational(v))?;
    }
    Ok(())
}

#[derive(Serialize, Deserialize)]
struct SeqDoc<V> {
    values: Vec<V>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    generator: Option<String>,
}

pub fn real_to_json(a: &RealSeq) -> Value {
    serde_json::to_value(SeqDoc {
        values: a.values().to_vec(),
        generator: a.generator_tag().map(str::to_owned),
    })
    .expect("finite floats serialize")
}

pub fn rational_to_json(a: &RatSeq) -> Value {
    serde_json::to_value(SeqDoc {
        values: a.values().iter().map(format_rational).collect::<Vec<_>>(),
        generator: a.generator_tag().map(str::to_owned),
    })
    .expect("strings serialize")
}

fn values_of(doc: &Value) -> Result<&Vec<Value>> {
    match doc {
        Value::Array(v) => Ok(v),
        Value::Object(map) => match map.get("values") {
            Some(Value::Array(v)) => Ok(v),
            _ => Err(Error::Parse {
                line: 0,
                message: "missing \"values\" array".into(),
            }),
        },
        _ => Err(Error::Parse {
            line: 0,
            message: "expected an array or an object with \"values\"".into(),
        }),
    }
}

/// Reads a float sequence; the generator tag, if any, is informational
/// and not re-attached.
pub fn real_from_json(doc: &Value) -> Result<RealSeq> {
    let values = values_of(doc)?
        .iter()
        .enumerate()
        .map(|(i, v)| match v {
            Value::Number(n) => n.as_f64(),
            Value::String(s) => parse_real(s),
            _ => None,
        }
        .ok_or_else(|| Error::Parse {
            line: 0,
            message: format!("element {i} is not a number"),
        }))
        .collect::<Result<Vec<_>>>()?;
    Sequence::from_vec(values)
}

pub fn rational_from_json(doc: &Value) -> Result<RatSeq> {
    let values = values_of(doc)?
        .iter()
        .enumerate()
        .map(|(i, v)| match v {
            Value::String(s) => parse_rational(s),
            Value::Number(n) => n.as_i64().map(BigRational::from_i64),
            _ => None,
        }
        .ok_or_else(|| Error::Parse {
            line: 0,
            message: format!("element {i} is not an exact rational"),
        }))
        .collect::<Result<Vec<_>>>()?;
    Sequence::from_vec(values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;
    use crate::seq_calculus::cesaro_numbers;

    #[test]
    fn csv_reads_values_and_comments() {
        let text = "# header comment\n1\n2.5\n\n-3e-2\n7/2\n";
        let a = read_csv_real(text.as_bytes()).unwrap();
        assert_eq!(a.values(), &[1.0, 2.5, -0.03, 3.5]);
    }

    #[test]
    fn csv_error_names_the_line() {
        let text = "1\n2\nabc\n4\n";
        match read_csv_real(text.as_bytes()) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rational_csv_round_trip() {
        let a = RatSeq::from_vec(vec![ratio(1, 1), ratio(5, 2), ratio(7, 3)]).unwrap();
        let mut buf = Vec::new();
        write_csv_rational(&a, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf.clone()).unwrap(), "1\n5/2\n7/3\n");
        assert_eq!(read_csv_rational(buf.as_slice()).unwrap(), a);
        let d = read_csv_rational("0.25\n".as_bytes()).unwrap();
        assert_eq!(d[0], ratio(1, 4));
    }

    #[test]
    fn json_carries_generator_tag() {
        let a = cesaro_numbers(1.0, 3).values;
        let doc = real_to_json(&a);
        assert_eq!(doc["generator"], "cesaro(1)");
        assert_eq!(real_from_json(&doc).unwrap(), a);
        let bare: Value = serde_json::from_str("[1, 2.5]").unwrap();
        assert_eq!(real_from_json(&bare).unwrap().values(), &[1.0, 2.5]);
    }

    #[test]
    fn rational_json_uses_strings() {
        let a = RatSeq::from_vec(vec![ratio(-1, 3), ratio(4, 1)]).unwrap();
        let doc = rational_to_json(&a);
        assert_eq!(doc["values"][0], "-1/3");
        assert_eq!(rational_from_json(&doc).unwrap(), a);
    }
}
