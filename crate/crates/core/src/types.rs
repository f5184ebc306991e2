//! Domain types shared by every module: box bounds, evaluated individuals,
//! and the fixed-size population.

use crate::rng::RandomSource;
use crate::scalar::Scalar;

/// Box constraints of the search space, `lower[j] < upper[j]` for all `j`.
#[derive(Debug, Clone, PartialEq)]
pub struct Bounds<T> {
    lower: Vec<T>,
    upper: Vec<T>,
}

impl<T: Scalar> Bounds<T> {
    pub fn new(lower: Vec<T>, upper: Vec<T>) -> Self {
        assert_eq!(lower.len(), upper.len(), "bound vectors differ in length");
        assert!(!lower.is_empty(), "bounds must have at least one dimension");
        for (l, u) in lower.iter().zip(&upper) {
            assert!(l.is_finite() && u.is_finite(), "bounds must be finite");
            assert!(l < u, "lower bound must be strictly below upper bound");
        }
        Self { lower, upper }
    }

    /// The symmetric box `[-half, half]^n`.
    pub fn symmetric(n: usize, half: T) -> Self {
        Self::new(vec![-half; n], vec![half; n])
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[T] {
        &self.lower
    }

    pub fn upper(&self) -> &[T] {
        &self.upper
    }

    pub fn contains(&self, x: &[T]) -> bool {
        x.len() == self.dim()
            && x.iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(v, (l, u))| *v >= *l && *v <= *u)
    }

    /// Clamp every component onto the violated bound.
    pub fn repair(&self, x: &mut [T]) {
        assert_eq!(x.len(), self.dim(), "vector length differs from bounds");
        for (v, (l, u)) in x.iter_mut().zip(self.lower.iter().zip(&self.upper)) {
            if *v < *l {
                *v = *l;
            } else if *v > *u {
                *v = *u;
            }
        }
    }

    /// Uniform sample inside the box.
    pub fn sample(&self, rng: &mut RandomSource) -> Vec<T> {
        self.lower
            .iter()
            .zip(&self.upper)
            .map(|(&l, &u)| rng.uniform_in(l, u))
            .collect()
    }
}

/// A decision vector together with its exact evaluation and the ordinal of
/// the function evaluation that produced it (unique within a run).
#[derive(Debug, Clone, PartialEq)]
pub struct Individual<T> {
    pub x: Vec<T>,
    pub f: Vec<T>,
    pub eval_id: u64,
}

impl<T: Scalar> Individual<T> {
    pub fn new(x: Vec<T>, f: Vec<T>, eval_id: u64) -> Self {
        debug_assert!(x.iter().all(|v| v.is_finite()), "non-finite decision vector");
        debug_assert!(f.iter().all(|v| v.is_finite()), "non-finite objective vector");
        Self { x, f, eval_id }
    }

    /// Test helper: an individual that only carries objective values.
    pub fn from_objectives(f: Vec<T>, eval_id: u64) -> Self {
        Self::new(Vec::new(), f, eval_id)
    }
}

/// The current population; `|members|` equals μ at every iteration boundary,
/// and member indices are stable identifiers within one iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct Population<T> {
    pub members: Vec<Individual<T>>,
}

impl<T: Scalar> Population<T> {
    pub fn new(members: Vec<Individual<T>>) -> Self {
        Self { members }
    }

    pub fn mu(&self) -> usize {
        self.members.len()
    }

    pub fn objectives(&self) -> impl Iterator<Item = &[T]> {
        self.members.iter().map(|m| m.f.as_slice())
    }
}
