//! Run settings: every field can come from a TOML file or a flag; flags win.

use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::{Args, ValueEnum};
use noerlund::operator_core::NormKind;
use serde::Deserialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Settings {
    /// Horizon N.
    #[arg(long, global = true)]
    pub n: Option<usize>,
    /// Cesàro order(s), comma separated.
    #[arg(long, global = true, value_delimiter = ',', allow_negative_numbers = true)]
    #[serde(default, deserialize_with = "one_or_many")]
    pub alpha: Option<Vec<f64>>,
    /// Difference order p for majorant building.
    #[arg(long, global = true)]
    pub p: Option<usize>,
    /// Seed for generated ensembles.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Relative rank tolerance for the spectral classification.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Operator norm: induced_sup, induced_l1 or spectral_l2.
    #[arg(long, global = true, value_parser = parse_norm)]
    pub norm: Option<NormKind>,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Input file (sequence CSV/JSON or operator JSON/text).
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    /// Ensemble size.
    #[arg(long, global = true)]
    pub count: Option<usize>,
    /// Largest ensemble dimension.
    #[arg(long, global = true)]
    pub d_max: Option<usize>,
    /// Weight sequences for ensembles: `cesaro:ALPHA` or `built:P`.
    #[arg(long = "weights", global = true, value_delimiter = ',')]
    #[serde(default, deserialize_with = "one_or_many")]
    pub weights: Option<Vec<String>>,
    /// Ensemble strata: resolvent, semisimple, jordan.
    #[arg(long, global = true, value_delimiter = ',')]
    #[serde(default, deserialize_with = "one_or_many")]
    pub strata: Option<Vec<String>>,
    /// Certified bound on chord slopes beyond the horizon, e.g. `0` or `1/2`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub tail_slope: Option<String>,
    /// Use exact rational arithmetic for sequence commands.
    #[arg(long, global = true)]
    #[serde(default)]
    pub exact: bool,
    /// Weight sequence file for `cesaro-means` (Nörlund means with this `s`).
    #[arg(long, global = true)]
    pub s_input: Option<PathBuf>,
}

fn parse_norm(text: &str) -> std::result::Result<NormKind, String> {
    text.parse::<NormKind>().map_err(|e| e.to_string())
}

fn one_or_many<'de, D, T>(d: D) -> std::result::Result<Option<Vec<T>>, D::Error>
where
    D: serde::Deserializer<'de>,
    T: Deserialize<'de>,
{
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum OneOrMany<T> {
        One(T),
        Many(Vec<T>),
    }
    Ok(Option::<OneOrMany<T>>::deserialize(d)?.map(|v| match v {
        OneOrMany::One(x) => vec![x],
        OneOrMany::Many(v) => v,
    }))
}

impl Settings {
    pub fn from_toml_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
    }

    /// `self` (flags) over `base` (config file).
    pub fn over(self, base: Settings) -> Settings {
        Settings {
            n: self.n.or(base.n),
            alpha: self.alpha.or(base.alpha),
            p: self.p.or(base.p),
            seed: self.seed.or(base.seed),
            tol: self.tol.or(base.tol),
            norm: self.norm.or(base.norm),
            out: self.out.or(base.out),
            format: self.format.or(base.format),
            input: self.input.or(base.input),
            count: self.count.or(base.count),
            d_max: self.d_max.or(base.d_max),
            weights: self.weights.or(base.weights),
            strata: self.strata.or(base.strata),
            tail_slope: self.tail_slope.or(base.tail_slope),
            exact: self.exact || base.exact,
            s_input: self.s_input.or(base.s_input),
        }
    }

    pub fn format(&self) -> Format {
        self.format.unwrap_or_default()
    }

    pub fn require_input(&self) -> Result<&Path> {
        self.input.as_deref().context("this command needs --input")
    }
}
