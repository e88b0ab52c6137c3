//! Seeded random operators with prescribed spectral structure at `1`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::operator_core::{singular_values, CMatrix, NormKind, Operator};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Stratum {
    /// `1` is not an eigenvalue.
    ResolventSet,
    /// `1` is a semisimple eigenvalue.
    SemisimpleAtOne,
    /// A Jordan block of size two sits at `1`.
    JordanAtOne,
}

impl Stratum {
    pub const ALL: [Stratum; 3] = [Stratum::ResolventSet, Stratum::SemisimpleAtOne, Stratum::JordanAtOne];
}

#[derive(Debug, Clone)]
pub struct EnsembleConfig {
    pub seed: u64,
    pub members: usize,
    pub min_dim: usize,
    pub max_dim: usize,
    /// Spectral radius of the part away from the unit circle.
    pub inner_radius: f64,
    /// Probability that a member also carries a semisimple eigenvalue on
    /// the unit circle (away from `1`).
    pub circle_probability: f64,
    /// Upper bound on the condition number of the similarity.
    pub max_condition: f64,
    pub norm_kind: NormKind,
    /// Strata cycled through in order.
    pub strata: Vec<Stratum>,
}

impl Default for EnsembleConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            members: 60,
            min_dim: 2,
            max_dim: 6,
            inner_radius: 0.6,
            circle_probability: 0.08,
            max_condition: 3.0,
            norm_kind: NormKind::InducedSup,
            strata: Stratum::ALL.to_vec(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct EnsembleMember {
    pub id: usize,
    pub stratum: Stratum,
    pub operator: Operator,
    /// Diagonal of the Jordan form, in block order.
    pub eigenvalues: Vec<Complex64>,
    /// Number of Jordan blocks at `1` of each size.
    pub blocks_at_one: Vec<usize>,
    pub has_circle_eigenvalue: bool,
    /// `S` in `T = S J S⁻¹`.
    pub similarity: CMatrix,
    pub similarity_condition: f64,
}

/// Members cycle through the strata in order, so any prefix is balanced.
pub fn generate_ensemble(config: &EnsembleConfig) -> Result<Vec<EnsembleMember>> {
    if config.min_dim < 2 || config.max_dim < config.min_dim {
        return Err(Error::InvalidArgument(format!(
            "dimension range {}..={} must start at 2 or more",
            config.min_dim, config.max_dim
        )));
    }
    if !(config.inner_radius > 0.0 && config.inner_radius < 1.0) || config.max_condition <= 1.0 {
        return Err(Error::InvalidArgument("inner radius must lie in (0, 1) and max condition above 1".into()));
    }
    if config.strata.is_empty() {
        return Err(Error::InvalidArgument("at least one stratum is required".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    (0..config.members)
        .map(|id| member(&mut rng, id, config.strata[id % config.strata.len()], config))
        .collect()
}

fn member(rng: &mut ChaCha8Rng, id: usize, stratum: Stratum, cfg: &EnsembleConfig) -> Result<EnsembleMember> {
    let d = rng.gen_range(cfg.min_dim..=cfg.max_dim);
    let mut jordan = CMatrix::zeros(d, d);
    let mut eigenvalues = Vec::with_capacity(d);
    let mut pos = 0;
    let mut blocks_at_one = Vec::new();

    match stratum {
        Stratum::ResolventSet => {}
        Stratum::SemisimpleAtOne => {
            let k = rng.gen_range(1..d);
            for _ in 0..k {
                eigenvalues.push(Complex64::new(1.0, 0.0));
            }
            blocks_at_one = vec![k];
            pos = k;
        }
        Stratum::JordanAtOne => {
            // size two only: rounding splits a size-k block at 1 by about
            // ε^(1/k), which for k = 3 already pushes the spectrum past 1 + 1e-6
            eigenvalues.extend([Complex64::new(1.0, 0.0); 2]);
            jordan[(0, 1)] = Complex64::new(1.0, 0.0);
            blocks_at_one = vec![0, 1];
            pos = 2;
        }
    }

    let mut has_circle_eigenvalue = false;
    if stratum != Stratum::JordanAtOne && pos < d && rng.gen_bool(cfg.circle_probability) {
        let theta = rng.gen_range(PI / 2.0..3.0 * PI / 2.0);
        eigenvalues.push(Complex64::from_polar(1.0, theta));
        has_circle_eigenvalue = true;
        pos += 1;
    }
    while pos < d {
        let r = cfg.inner_radius * rng.gen::<f64>().sqrt();
        let theta = rng.gen_range(0.0..2.0 * PI);
        let lambda = Complex64::from_polar(r, theta);
        eigenvalues.push(lambda);
        // occasionally a non-trivial block inside the disk
        if pos + 1 < d && rng.gen_bool(0.2) {
            eigenvalues.push(lambda);
            jordan[(pos, pos + 1)] = Complex64::new(0.5, 0.0);
            pos += 2;
        } else {
            pos += 1;
        }
    }
    for (i, &l) in eigenvalues.iter().enumerate() {
        jordan[(i, i)] = l;
    }

    let (s, s_inv, cond) = similarity(rng, d, cfg.max_condition)?;
    let t = &s * jordan * &s_inv;
    Ok(EnsembleMember {
        id,
        stratum,
        operator: Operator::new(t, cfg.norm_kind)?,
        eigenvalues,
        blocks_at_one,
        has_circle_eigenvalue,
        similarity: s,
        similarity_condition: cond,
    })
}

fn similarity(rng: &mut ChaCha8Rng, d: usize, max_condition: f64) -> Result<(CMatrix, CMatrix, f64)> {
    let spread = 0.3 / (d as f64).sqrt();
    for _ in 0..1000 {
        let g = CMatrix::from_fn(d, d, |_, _| {
            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        });
        let s = CMatrix::identity(d, d) + g * Complex64::new(spread, 0.0);
        let sv = singular_values(&s);
        let cond = sv[0] / sv[sv.len() - 1];
        if cond <= max_condition {
            if let Some(inv) = s.clone().try_inverse() {
                return Ok((s, inv, cond));
            }
        }
    }
    Err(Error::InvalidArgument(format!("no similarity with condition below {max_condition}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator_core::{classify_one, Verdict, DEFAULT_RANK_TOL};

    #[test]
    fn seeded_generation_is_reproducible() {
        let cfg = EnsembleConfig { members: 9, ..Default::default() };
        let a = generate_ensemble(&cfg).unwrap();
        let b = generate_ensemble(&cfg).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.operator.entries(), y.operator.entries());
        }
        let c = generate_ensemble(&EnsembleConfig { seed: 1, ..cfg.clone() }).unwrap();
        assert_ne!(a[0].operator.entries(), c[0].operator.entries());
    }

    #[test]
    fn strata_match_classification() {
        let cfg = EnsembleConfig { members: 30, seed: 7, ..Default::default() };
        for m in generate_ensemble(&cfg).unwrap() {
            let v = classify_one(&m.operator, DEFAULT_RANK_TOL).unwrap().verdict;
            let expected = match m.stratum {
                Stratum::ResolventSet => Verdict::ResolventPoint,
                Stratum::SemisimpleAtOne => Verdict::SimplePole,
                Stratum::JordanAtOne => Verdict::NonSimple,
            };
            assert_eq!(v, expected, "member {}", m.id);
            assert!(m.similarity_condition <= cfg.max_condition);
        }
    }

    #[test]
    fn bad_configs_are_rejected() {
        assert!(generate_ensemble(&EnsembleConfig { min_dim: 1, ..Default::default() }).is_err());
        assert!(generate_ensemble(&EnsembleConfig { inner_radius: 1.0, ..Default::default() }).is_err());
        assert!(generate_ensemble(&EnsembleConfig { strata: vec![], ..Default::default() }).is_err());
    }
}
