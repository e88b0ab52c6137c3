//! Sequence difference calculus, least concave majorants, and Nörlund means
//! of powers of finite-dimensional complex operators.
//!
//! The crate is organised bottom-up:
//!
//! * [`seq_calculus`]: truncated real sequences, the backward difference
//!   `Δ` and partial sum `Σ`, Cesàro numbers, shape predicates and the
//!   polynomial growth index.
//! * [`concave_majorant`]: least concave majorants by the chord-slope
//!   recursion, with an upper-hull oracle and contact-set analysis.
//! * [`majorant_builder`]: turns an unbounded sequence of polynomial growth
//!   into a majorant whose `p`-th difference is concave, and checks the
//!   growth properties such majorants enjoy.
//! * [`operator_core`]: dense complex operators, power norms, resolvents,
//!   Abel means and the classification of the point 1.
//! * [`ergodic_engine`]: Nörlund and Cesàro means of operator powers and
//!   convergence diagnostics against the spectral projection.
//!
//! Every truncated object carries its horizon explicitly; nothing here
//! claims more than what a finite prefix can show.

pub mod concave_majorant;
pub mod ergodic_engine;
mod error;
pub mod majorant_builder;
pub mod operator_core;
pub mod scalar;
pub mod seq_calculus;

pub use error::{Error, Result};
pub use scalar::Scalar;
pub use seq_calculus::{RatSeq, RealSeq, Sequence};
