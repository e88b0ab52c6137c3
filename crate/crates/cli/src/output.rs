//! Report envelope and writers.

use std::io::Write;

use anyhow::{Context, Result};
use serde_json::{json, Map, Value};

use crate::settings::{Format, Settings};

/// Everything a command produced: a JSON document, an optional table for
/// CSV output, and the overall verdict.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub command: &'static str,
    pub header: Header,
    pub body: Value,
    pub table: Option<Table>,
    pub passed: bool,
    pub failures: Vec<String>,
}

#[derive(Debug, Clone, Default)]
pub struct Header {
    pub horizon: Option<usize>,
    /// Tolerances in effect.
    pub tolerances: Map<String, Value>,
    /// Tolerances that differ from the library defaults.
    pub overrides: Map<String, Value>,
    pub parameters: Map<String, Value>,
}

impl Header {
    pub fn tolerance(&mut self, name: &str, value: f64, default: f64) -> f64 {
        self.tolerances.insert(name.into(), json!(value));
        if value != default {
            self.overrides.insert(name.into(), json!({ "value": value, "default": default }));
        }
        value
    }

    pub fn param(&mut self, name: &str, value: impl serde::Serialize) {
        self.parameters.insert(name.into(), json!(value));
    }
}

#[derive(Debug, Clone)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self { columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }
}

/// Shortest round-trip float text.
pub fn num(x: f64) -> String {
    format!("{x:?}")
}

impl Outcome {
    pub fn header_json(&self) -> Value {
        json!({
            "tool": "noerlund",
            "version": env!("CARGO_PKG_VERSION"),
            "command": self.command,
            "horizon": self.header.horizon,
            "tolerances": self.header.tolerances,
            "overrides": self.header.overrides,
            "parameters": self.header.parameters,
        })
    }

    pub fn to_json(&self) -> Value {
        json!({
            "header": self.header_json(),
            "passed": self.passed,
            "failures": self.failures,
            "report": self.body,
        })
    }

    pub fn render(&self, format: Format) -> Result<Vec<u8>> {
        match format {
            Format::Json => {
                let mut out = serde_json::to_vec_pretty(&self.to_json())?;
                out.push(b'\n');
                Ok(out)
            }
            Format::Csv => {
                let table = self
                    .table
                    .as_ref()
                    .with_context(|| format!("{} has no tabular output; use --format json", self.command))?;
                let mut out = Vec::new();
                // header lines are comments so the table stays machine-readable
                let header = serde_json::to_string(&self.header_json())?;
                writeln!(out, "# {header}")?;
                writeln!(out, "# passed: {}", self.passed)?;
                for f in &self.failures {
                    writeln!(out, "# failure: {f}")?;
                }
                let mut w = csv::Writer::from_writer(&mut out);
                w.write_record(&table.columns)?;
                for row in &table.rows {
                    w.write_record(row)?;
                }
                w.flush()?;
                drop(w);
                Ok(out)
            }
        }
    }

    pub fn write(&self, settings: &Settings) -> Result<()> {
        let bytes = self.render(settings.format())?;
        match &settings.out {
            Some(path) => std::fs::write(path, bytes).with_context(|| format!("writing {}", path.display())),
            None => {
                std::io::stdout().write_all(&bytes)?;
                Ok(())
            }
        }
    }
}
