//! Dense complex operators on `ℂ^d`: powers and their norms, resolvents,
//! Abel means and the behaviour of the resolvent at the point 1.

pub mod io;
mod spectral;
mod svd;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::seq_calculus::{Generator, RealSeq, Sequence};
use crate::{Error, Result};

pub use svd::{singular_values, svd, Svd};
pub use spectral::{
    abel_mean, classify_one, numerical_rank, resolvent, spectral_radius_estimate,
    SpectralClassification, Verdict, DEFAULT_RANK_TOL,
};

pub type CMatrix = DMatrix<Complex64>;

/// Operator norm induced by a choice of vector norm on `ℂ^d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormKind {
    /// Induced by the max norm: largest absolute row sum.
    #[default]
    InducedSup,
    /// Induced by the 1-norm: largest absolute column sum.
    InducedL1,
    /// Induced by the Euclidean norm: largest singular value.
    SpectralL2,
}

impl NormKind {
    pub fn of(self, m: &CMatrix) -> f64 {
        match self {
            NormKind::InducedSup => m
                .row_iter()
                .map(|r| r.iter().map(|z| z.norm()).sum::<f64>())
                .fold(0.0, f64::max),
            NormKind::InducedL1 => m
                .column_iter()
                .map(|c| c.iter().map(|z| z.norm()).sum::<f64>())
                .fold(0.0, f64::max),
            NormKind::SpectralL2 => {
                if m.iter().all(|z| *z == Complex64::new(0.0, 0.0)) {
                    0.0
                } else {
                    svd::singular_values(m)[0]
                }
            }
        }
    }
}

impl std::str::FromStr for NormKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "induced_sup" | "sup" | "inf" => Ok(NormKind::InducedSup),
            "induced_l1" | "l1" => Ok(NormKind::InducedL1),
            "spectral_l2" | "l2" => Ok(NormKind::SpectralL2),
            other => Err(Error::InvalidArgument(format!("unknown norm kind {other:?}"))),
        }
    }
}

/// A square complex matrix together with the norm it is measured in.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    entries: CMatrix,
    norm_kind: NormKind,
}

impl Operator {
    pub fn new(entries: CMatrix, norm_kind: NormKind) -> Result<Self> {
        if entries.nrows() != entries.ncols() {
            return Err(Error::DimensionMismatch {
                expected: entries.nrows(),
                got: entries.ncols(),
            });
        }
        if entries.nrows() == 0 {
            return Err(Error::InvalidArgument("operator dimension must be at least 1".into()));
        }
        for (idx, z) in entries.iter().enumerate() {
            if !z.re.is_finite() || !z.im.is_finite() {
                let d = entries.nrows();
                return Err(Error::NonFinite {
                    row: idx % d,
                    col: idx / d,
                });
            }
        }
        Ok(Self { entries, norm_kind })
    }

    /// Real matrix from rows, measured in the max-norm-induced norm.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let d = rows.len();
        if rows.iter().any(|r| r.len() != d) {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: rows.iter().map(|r| r.len()).find(|&l| l != d).unwrap_or(d),
            });
        }
        let m = CMatrix::from_fn(d, d, |i, j| Complex64::new(rows[i][j], 0.0));
        Self::new(m, NormKind::default())
    }

    pub fn identity(d: usize) -> Self {
        Self {
            entries: CMatrix::identity(d, d),
            norm_kind: NormKind::default(),
        }
    }

    pub fn zeros(d: usize) -> Self {
        Self {
            entries: CMatrix::zeros(d, d),
            norm_kind: NormKind::default(),
        }
    }

    pub fn diagonal(values: &[Complex64]) -> Self {
        let d = values.len();
        let mut m = CMatrix::zeros(d, d);
        for (i, v) in values.iter().enumerate() {
            m[(i, i)] = *v;
        }
        Self {
            entries: m,
            norm_kind: NormKind::default(),
        }
    }

    pub fn with_norm(mut self, norm_kind: NormKind) -> Self {
        self.norm_kind = norm_kind;
        self
    }

    /// Same norm kind, new entries.
    pub(crate) fn like(&self, entries: CMatrix) -> Self {
        Self {
            entries,
            norm_kind: self.norm_kind,
        }
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    pub fn norm_kind(&self) -> NormKind {
        self.norm_kind
    }

    pub fn norm(&self) -> f64 {
        self.norm_kind.of(&self.entries)
    }

    /// `‖self - other‖` in this operator's norm.
    pub fn distance(&self, other: &Operator) -> f64 {
        self.norm_kind.of(&(&self.entries - &other.entries))
    }

    /// `I - T`.
    pub fn one_minus(&self) -> CMatrix {
        CMatrix::identity(self.dim(), self.dim()) - &self.entries
    }

    /// `T^n` by repeated squaring.
    pub fn pow(&self, mut n: u64) -> CMatrix {
        let d = self.dim();
        let mut result = CMatrix::identity(d, d);
        let mut base = self.entries.clone();
        while n > 0 {
            if n & 1 == 1 {
                result = &result * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        result
    }
}

/// `‖T^n‖` for `n = 0..=N`, plus whether any norm overflowed.
#[derive(Debug, Clone)]
pub struct PowerNorms {
    pub norms: RealSeq,
    pub overflow: bool,
}

/// Norms of successive powers, computed by plain repeated multiplication.
pub fn power_norms(t: &Operator, horizon: usize) -> PowerNorms {
    let mut out = Vec::with_capacity(horizon + 1);
    let mut power = CMatrix::identity(t.dim(), t.dim());
    out.push(t.norm_kind.of(&power));
    for _ in 0..horizon {
        power = &power * t.entries();
        out.push(t.norm_kind.of(&power));
    }
    let overflow = out.iter().any(|v| !v.is_finite());
    PowerNorms {
        norms: Sequence::from_vec(out).expect("non-empty"),
        overflow,
    }
}

/// Prefix maxima `max{a(0), …, a(n)}`.
pub fn running_max(norms: &RealSeq) -> RealSeq {
    let mut cur = f64::NEG_INFINITY;
    let out = norms
        .values()
        .iter()
        .map(|&v| {
            cur = cur.max(v);
            cur
        })
        .collect();
    Sequence::from_vec(out).expect("non-empty")
}

fn shift_exponent(k: usize) -> f64 {
    (1..=k).map(|j| 1.0 / (j as f64).sqrt()).sum()
}

/// `e^{Σ_{j=1}^k j^{-1/2}}` for `k = 0..=N`: the power norms of the weighted
/// shift with weights `e^{1/√(n+1)}` on `ℓ₂`.
pub fn shift_norms_closed_form(horizon: usize) -> RealSeq {
    let mut acc = 0.0;
    let mut prefix = Vec::with_capacity(horizon + 1);
    prefix.push(1.0);
    for j in 1..=horizon {
        acc += 1.0 / (j as f64).sqrt();
        prefix.push(acc.exp());
    }
    Sequence::with_generator(
        prefix,
        Generator::new("weighted_shift_norms", |k| shift_exponent(k).exp()),
    )
}

/// `[[-1, -1], [0, -1]]`: power norms `n + 1` in the max-norm-induced norm
/// while 1 lies in the resolvent set.
pub fn negated_jordan_block() -> Operator {
    Operator::from_real_rows(&[&[-1.0, -1.0], &[0.0, -1.0]]).expect("2x2")
}
