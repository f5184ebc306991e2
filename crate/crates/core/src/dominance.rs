//! Pareto dominance on objective vectors (minimization, any m >= 2).

use crate::scalar::Scalar;

/// `a` dominates `b` iff `a[i] <= b[i]` for all `i` and `a[i] < b[i]` for at
/// least one `i`. Comparisons are exact; there is no epsilon.
pub fn dominates<T: Scalar>(a: &[T], b: &[T]) -> bool {
    assert_eq!(a.len(), b.len(), "objective vectors differ in length");
    let mut strictly_better = false;
    for (x, y) in a.iter().zip(b) {
        if x > y {
            return false;
        }
        if x < y {
            strictly_better = true;
        }
    }
    strictly_better
}

/// `a` weakly dominates `b` iff `a[i] <= b[i]` for all `i`.
pub fn weakly_dominates<T: Scalar>(a: &[T], b: &[T]) -> bool {
    assert_eq!(a.len(), b.len(), "objective vectors differ in length");
    a.iter().zip(b).all(|(x, y)| x <= y)
}
