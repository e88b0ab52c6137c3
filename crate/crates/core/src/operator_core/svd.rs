//! One-sided Jacobi SVD for small dense complex matrices.
//!
//! Used instead of the bidiagonalization SVD from nalgebra, whose complex
//! path can return factors that do not reproduce rank-deficient inputs.

use num_complex::Complex64;

use super::CMatrix;

const MAX_SWEEPS: usize = 80;

/// `M = U diag(σ) Vᴴ` with `σ` sorted in descending order.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: CMatrix,
    pub sigma: Vec<f64>,
    pub v: CMatrix,
}

pub fn svd(m: &CMatrix) -> Svd {
    assert!(m.is_square(), "square input expected");
    let d = m.nrows();
    let mut a = m.clone();
    let mut v = CMatrix::identity(d, d);
    let eps = f64::EPSILON;

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..d {
            for q in p + 1..d {
                let alpha: f64 = a.column(p).iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = a.column(q).iter().map(|z| z.norm_sqr()).sum();
                let gamma: Complex64 = a.column(p).iter().zip(a.column(q).iter()).map(|(x, y)| x.conj() * y).sum();
                let g = gamma.norm();
                if g == 0.0 || g <= eps * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let t = if zeta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate(&mut a, p, q, c, s, phase);
                rotate(&mut v, p, q, c, s, phase);
            }
        }
        if !rotated {
            break;
        }
    }

    let norms: Vec<f64> = (0..d).map(|j| a.column(j).norm()).collect();
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&x, &y| norms[y].total_cmp(&norms[x]));
    let sigma: Vec<f64> = order.iter().map(|&k| norms[k]).collect();
    let v = CMatrix::from_fn(d, d, |i, j| v[(i, order[j])]);

    // left vectors from the well-resolved columns, completed to a unitary
    // basis by Gram-Schmidt against the standard basis
    let floor = sigma.first().copied().unwrap_or(0.0) * eps * d as f64 * 16.0;
    let mut cols: Vec<nalgebra::DVector<Complex64>> = Vec::with_capacity(d);
    for (j, &k) in order.iter().enumerate() {
        if sigma[j] > floor && sigma[j] > 0.0 {
            let mut c = a.column(k) / Complex64::new(sigma[j], 0.0);
            orthonormalize(&mut c, &cols);
            cols.push(c);
        }
    }
    let mut e = 0;
    while cols.len() < d {
        let mut c = nalgebra::DVector::from_fn(d, |i, _| {
            if i == e { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) }
        });
        e += 1;
        if orthonormalize(&mut c, &cols) {
            cols.push(c);
        }
    }
    let u = CMatrix::from_columns(&cols);
    Svd { u, sigma, v }
}

pub fn singular_values(m: &CMatrix) -> Vec<f64> {
    svd(m).sigma
}

fn rotate(m: &mut CMatrix, p: usize, q: usize, c: f64, s: f64, phase: Complex64) {
    // q is first rephased by conj(phase), then a real rotation mixes p and q
    for i in 0..m.nrows() {
        let x = m[(i, p)];
        let y = m[(i, q)] * phase.conj();
        m[(i, p)] = x * c - y * s;
        m[(i, q)] = x * s + y * c;
    }
}

/// Two passes of Gram-Schmidt; returns false if `c` was (numerically) in
/// the span of `basis`.
fn orthonormalize(c: &mut nalgebra::DVector<Complex64>, basis: &[nalgebra::DVector<Complex64>]) -> bool {
    let before = c.norm();
    for _ in 0..2 {
        for b in basis {
            let proj = b.dotc(c);
            *c -= b * proj;
        }
    }
    let after = c.norm();
    if after <= 1e-8 * before.max(f64::MIN_POSITIVE) {
        return false;
    }
    *c /= Complex64::new(after, 0.0);
    true
}
