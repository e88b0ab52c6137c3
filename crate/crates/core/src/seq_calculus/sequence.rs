use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;

use crate::scalar::Scalar;
use crate::{Error, Result};

/// Closed-form term generator attached to a sequence.
#[derive(Clone)]
pub struct Generator<T> {
    tag: String,
    f: Arc<dyn Fn(usize) -> T + Send + Sync>,
}

impl<T> Generator<T> {
    pub fn new(tag: impl Into<String>, f: impl Fn(usize) -> T + Send + Sync + 'static) -> Self {
        Self {
            tag: tag.into(),
            f: Arc::new(f),
        }
    }

    pub fn tag(&self) -> &str {
        &self.tag
    }

    pub fn eval(&self, n: usize) -> T {
        (self.f)(n)
    }
}

/// A sequence indexed by `0..=horizon`, stored as its materialized prefix.
///
/// Suprema and limits over the whole of ℕ are always read off this prefix;
/// an optional generator allows extending the horizon on demand.
#[derive(Clone)]
pub struct Sequence<T> {
    prefix: Vec<T>,
    generator: Option<Generator<T>>,
}

/// Double-precision sequence.
pub type RealSeq = Sequence<f64>;
/// Exact-rational sequence.
pub type RatSeq = Sequence<BigRational>;

impl<T: fmt::Debug> fmt::Debug for Sequence<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Sequence")
            .field("horizon", &(self.prefix.len() - 1))
            .field("generator", &self.generator.as_ref().map(|g| g.tag.clone()))
            .field("prefix", &self.prefix)
            .finish()
    }
}

impl<T: PartialEq> PartialEq for Sequence<T> {
    /// Compares materialized prefixes only.
    fn eq(&self, other: &Self) -> bool {
        self.prefix == other.prefix
    }
}

impl<T: Scalar> Sequence<T> {
    /// Wraps an explicit prefix. The prefix must be non-empty.
    pub fn from_vec(prefix: Vec<T>) -> Result<Self> {
        if prefix.is_empty() {
            return Err(Error::InvalidArgument("a sequence needs at least one term".into()));
        }
        Ok(Self {
            prefix,
            generator: None,
        })
    }

    /// Materializes `generator(0..=horizon)` and keeps the generator.
    pub fn from_generator(
        tag: impl Into<String>,
        horizon: usize,
        f: impl Fn(usize) -> T + Send + Sync + 'static,
    ) -> Self {
        let generator = Generator::new(tag, f);
        let prefix = (0..=horizon).map(|n| generator.eval(n)).collect();
        Self {
            prefix,
            generator: Some(generator),
        }
    }

    /// Builds a prefix by `f` without retaining it as a generator.
    pub fn tabulate(horizon: usize, f: impl Fn(usize) -> T) -> Self {
        Self {
            prefix: (0..=horizon).map(f).collect(),
            generator: None,
        }
    }

    /// Attaches a generator to an already-computed prefix; the caller is
    /// responsible for the two agreeing (see [`Sequence::check_generator`]).
    pub(crate) fn with_generator(prefix: Vec<T>, generator: Generator<T>) -> Self {
        debug_assert!(!prefix.is_empty());
        Self {
            prefix,
            generator: Some(generator),
        }
    }

    pub fn horizon(&self) -> usize {
        self.prefix.len() - 1
    }

    pub fn len(&self) -> usize {
        self.prefix.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn values(&self) -> &[T] {
        &self.prefix
    }

    pub fn into_values(self) -> Vec<T> {
        self.prefix
    }

    pub fn generator(&self) -> Option<&Generator<T>> {
        self.generator.as_ref()
    }

    pub fn generator_tag(&self) -> Option<&str> {
        self.generator.as_ref().map(|g| g.tag())
    }

    /// The `n`-th term: from the prefix when materialized, otherwise from
    /// the generator if there is one.
    pub fn get(&self, n: usize) -> Option<T> {
        match self.prefix.get(n) {
            Some(v) => Some(v.clone()),
            None => self.generator.as_ref().map(|g| g.eval(n)),
        }
    }

    /// Extends the prefix to `horizon` using the generator; shrinking is
    /// allowed for any sequence.
    pub fn to_horizon(&self, horizon: usize) -> Result<Self> {
        if horizon <= self.horizon() {
            return Ok(Self {
                prefix: self.prefix[..=horizon].to_vec(),
                generator: self.generator.clone(),
            });
        }
        let g = self.generator.as_ref().ok_or(Error::InsufficientHorizon {
            what: "extending a sequence without a generator",
            needed: horizon,
            got: self.horizon(),
        })?;
        let mut prefix = self.prefix.clone();
        prefix.extend((self.prefix.len()..=horizon).map(|n| g.eval(n)));
        Ok(Self {
            prefix,
            generator: self.generator.clone(),
        })
    }

    /// Checks that every materialized term agrees with the generator within
    /// `rel`. Sequences without a generator pass trivially.
    pub fn check_generator(&self, rel: f64) -> bool {
        match &self.generator {
            None => true,
            Some(g) => self
                .prefix
                .iter()
                .enumerate()
                .all(|(n, v)| v.approx_eq(&g.eval(n), rel)),
        }
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Sequence<U> {
        Sequence {
            prefix: self.prefix.iter().map(f).collect(),
            generator: None,
        }
    }

    pub fn to_real(&self) -> RealSeq {
        self.map(|v| v.to_f64())
    }
}

impl<T: Scalar> std::ops::Index<usize> for Sequence<T> {
    type Output = T;

    fn index(&self, n: usize) -> &T {
        &self.prefix[n]
    }
}
