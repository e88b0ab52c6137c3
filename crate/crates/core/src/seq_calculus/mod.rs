//! Truncated real sequences and the `Δ`/`Σ` calculus on them.
//!
//! `Δ` is the backward difference with `(Δa)(0) = a(0)` and `Σ` the partial
//! sum; they are mutually inverse on every prefix. All operations are
//! generic over [`Scalar`](crate::Scalar), so the same code runs in `f64`
//! and in exact rationals.

mod calculus;
mod growth;
pub mod io;
mod sequence;
mod shape;

pub use calculus::{
    binomial, binomial_scalar, cesaro_numbers, cesaro_numbers_exact, delta, hockey_stick,
    iterate, sigma, CesaroSeq, DiffOp,
};
pub use growth::{
    h_index, h_index_certified, l1_tail_fraction, summable_empirically, CertifiedBound,
    EstimateMode, HIndexEstimate, HValue, WindowEvidence,
};
pub use sequence::{Generator, RatSeq, RealSeq, Sequence};
pub use shape::{phi_interpolant, shape_check, shape_check_tol, Shape};
