//! Unbounded external archive, exact 2-D hypervolume, the normalized
//! quality indicator with region-of-interest fallback, and ECDF aggregation.

use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;

/// A non-dominated objective vector plus the evaluation ordinal that produced
/// it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArchiveEntry<T> {
    pub f: [T; 2],
    pub eval_id: u64,
}

/// Unbounded store of all mutually non-dominated objective vectors found so
/// far (bi-objective). Entries are kept sorted by the first objective, which
/// makes insertion O(log n + removed) and hypervolume sweeps O(n).
#[derive(Debug, Clone, PartialEq)]
pub struct Archive<T> {
    entries: Vec<ArchiveEntry<T>>,
    removed: u64,
    rejected: u64,
}

impl<T: Scalar> Default for Archive<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T: Scalar> Archive<T> {
    pub fn new() -> Self {
        Self {
            entries: Vec::new(),
            removed: 0,
            rejected: 0,
        }
    }

    /// Entries sorted by `f[0]` ascending (and therefore `f[1]` descending).
    pub fn entries(&self) -> &[ArchiveEntry<T>] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Number of entries that were later removed because a dominating point
    /// arrived.
    pub fn removed_count(&self) -> u64 {
        self.removed
    }

    /// Number of offered points rejected because an entry weakly dominated
    /// them (duplicates keep the earliest eval_id).
    pub fn rejected_count(&self) -> u64 {
        self.rejected
    }

    /// Offer a point. Returns true iff it entered the archive.
    pub fn insert(&mut self, f: [T; 2], eval_id: u64) -> bool {
        assert!(f[0].is_finite() && f[1].is_finite(), "non-finite objective vector");
        let idx = self.entries.partition_point(|e| e.f[0] <= f[0]);
        // Sorted with f[1] strictly decreasing, so the entry just left of idx
        // has the smallest f[1] among all entries with f[0] <= f[0]: it weakly
        // dominates the candidate iff any entry does.
        if idx > 0 && self.entries[idx - 1].f[1] <= f[1] {
            self.rejected += 1;
            return false;
        }
        // Drop everything the candidate dominates: the left neighbour when it
        // shares f[0] (its f[1] is larger, see above), and the run of entries
        // to the right whose f[1] >= f[1].
        let start = if idx > 0 && self.entries[idx - 1].f[0] == f[0] {
            idx - 1
        } else {
            idx
        };
        let mut end = start;
        while end < self.entries.len() && self.entries[end].f[1] >= f[1] {
            end += 1;
        }
        self.removed += (end - start) as u64;
        self.entries.drain(start..end);
        self.entries.insert(start, ArchiveEntry { f, eval_id });
        true
    }

    pub fn points(&self) -> Vec<[T; 2]> {
        self.entries.iter().map(|e| e.f).collect()
    }
}

/// Exact hypervolume of a 2-D point set with respect to `reference`
/// (minimization; points that do not strictly dominate the reference
/// contribute nothing).
pub fn hypervolume_2d<T: Scalar>(points: &[[T; 2]], reference: [T; 2]) -> T {
    let mut pts: Vec<[T; 2]> = points
        .iter()
        .copied()
        .filter(|p| p[0] < reference[0] && p[1] < reference[1])
        .collect();
    pts.sort_by(|a, b| {
        a[0].partial_cmp(&b[0])
            .unwrap()
            .then(a[1].partial_cmp(&b[1]).unwrap())
    });
    let mut hv = T::zero();
    let mut ceiling = reference[1];
    for p in pts {
        if p[1] < ceiling {
            hv = hv + (reference[0] - p[0]) * (ceiling - p[1]);
            ceiling = p[1];
        }
    }
    hv
}

/// Normalization data for the quality indicator of one problem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IndicatorContext<T> {
    pub ideal: [T; 2],
    pub nadir: [T; 2],
    /// Best-known hypervolume of the normalized region of interest, in (0, 1].
    pub reference_hv: T,
}

impl<T: Scalar> IndicatorContext<T> {
    pub fn new(ideal: [T; 2], nadir: [T; 2], reference_hv: T) -> Self {
        assert!(ideal[0] < nadir[0] && ideal[1] < nadir[1], "ideal must dominate nadir");
        assert!(
            reference_hv > T::zero() && reference_hv <= T::one(),
            "reference_hv must lie in (0, 1]"
        );
        Self { ideal, nadir, reference_hv }
    }

    fn normalize(&self, f: [T; 2]) -> [T; 2] {
        [
            (f[0] - self.ideal[0]) / (self.nadir[0] - self.ideal[0]),
            (f[1] - self.ideal[1]) / (self.nadir[1] - self.ideal[1]),
        ]
    }
}

/// Euclidean distance from `u` to the unit box `[0,1]^2`.
fn distance_to_roi<T: Scalar>(u: [T; 2]) -> T {
    let mut sq = T::zero();
    for v in u {
        let below = -v;
        let above = v - T::one();
        let d = below.max(above).max(T::zero());
        sq = sq + d * d;
    }
    sq.sqrt()
}

/// Quality indicator of a point set (lower is better): hypervolume shortfall
/// against the stored reference once the normalized region of interest is
/// reached, distance to that region before. Empty sets score
/// `reference_hv + 1` as a documented sentinel.
pub fn icoco_points<T: Scalar>(points: &[[T; 2]], ctx: &IndicatorContext<T>) -> T {
    if points.is_empty() {
        return ctx.reference_hv + T::one();
    }
    let one = T::one();
    let norm: Vec<[T; 2]> = points.iter().map(|&p| ctx.normalize(p)).collect();
    if norm.iter().any(|u| u[0] < one && u[1] < one) {
        ctx.reference_hv - hypervolume_2d(&norm, [one, one])
    } else {
        let d = norm
            .iter()
            .map(|&u| distance_to_roi(u))
            .fold(T::infinity(), |a, b| a.min(b));
        ctx.reference_hv + d
    }
}

/// Quality indicator of the archive contents (lower is better).
pub fn icoco_value<T: Scalar>(archive: &Archive<T>, ctx: &IndicatorContext<T>) -> T {
    icoco_points(&archive.points(), ctx)
}

/// The 58 indicator targets: 51 positive values log-spaced from 10^0 down to
/// 10^-5 at 0.1 decades, then 7 negative values -10^-5.0 .. -10^-4.4, sorted
/// from easiest to hardest.
pub fn default_targets<T: Scalar>() -> Vec<T> {
    let mut targets = Vec::with_capacity(58);
    for j in 0..=50 {
        targets.push(T::of(10f64.powf(-(j as f64) / 10.0)));
    }
    for j in (44..=50).rev() {
        targets.push(T::of(-(10f64.powf(-(j as f64) / 10.0))));
    }
    targets
}

/// Empirical cumulative distribution of first-hit budgets over
/// (record, target) pairs; abscissa is function evaluations divided by the
/// problem dimension, log-spaced.
#[derive(Debug, Clone, PartialEq)]
pub struct EcdfCurve {
    pub abscissa: Vec<f64>,
    pub ordinate: Vec<f64>,
}

/// Earliest evaluation count at which the recorded indicator reached
/// `target`, if any.
pub fn first_hit<T: Scalar>(trace: &[(u64, T)], target: T) -> Option<u64> {
    trace.iter().find(|&&(_, v)| v <= target).map(|&(e, _)| e)
}

const ECDF_POINTS_PER_DECADE: usize = 20;

/// ECDF over all (trace, target) pairs; every trace must come from a run at
/// the same dimension `n`.
pub fn ecdf<T: Scalar>(traces: &[&[(u64, T)]], targets: &[T], n: usize) -> EcdfCurve {
    assert!(n > 0, "dimension must be positive");
    let total = traces.len() * targets.len();
    let mut hits: Vec<f64> = Vec::new();
    let mut max_budget: f64 = 1.0;
    for trace in traces {
        if let Some(&(e, _)) = trace.last() {
            max_budget = max_budget.max(e as f64 / n as f64);
        }
        for &t in targets {
            if let Some(e) = first_hit(trace, t) {
                hits.push(e as f64 / n as f64);
            }
        }
    }
    hits.sort_by(|a, b| a.partial_cmp(b).unwrap());

    let steps = (max_budget.log10().ceil().max(0.0) as usize) * ECDF_POINTS_PER_DECADE;
    let abscissa: Vec<f64> = (0..=steps)
        .map(|k| 10f64.powf(k as f64 / ECDF_POINTS_PER_DECADE as f64))
        .collect();
    let ordinate: Vec<f64> = abscissa
        .iter()
        .map(|&b| {
            if total == 0 {
                0.0
            } else {
                let reached = hits.partition_point(|&h| h <= b);
                reached as f64 / total as f64
            }
        })
        .collect();
    EcdfCurve { abscissa, ordinate }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dominance::{dominates, weakly_dominates};
    use crate::rng::RandomSource;

    fn ctx(reference_hv: f64) -> IndicatorContext<f64> {
        IndicatorContext::new([0.0, 0.0], [1.0, 1.0], reference_hv)
    }

    #[test]
    fn archive_accepts_first_point_and_rejects_dominated() {
        let mut a = Archive::new();
        assert!(a.insert([1.0, 1.0], 1));
        assert!(!a.insert([2.0, 2.0], 2));
        assert_eq!(a.len(), 1);
        assert_eq!(a.entries()[0].eval_id, 1);
        assert_eq!(a.rejected_count(), 1);
    }

    #[test]
    fn archive_removes_newly_dominated_entries() {
        let mut a = Archive::new();
        a.insert([1.0, 3.0], 1);
        a.insert([3.0, 1.0], 2);
        a.insert([2.0, 2.0], 3);
        assert_eq!(a.len(), 3);
        assert!(a.insert([0.5, 0.5], 4));
        assert_eq!(a.len(), 1);
        assert_eq!(a.removed_count(), 3);
    }

    #[test]
    fn archive_keeps_earliest_duplicate() {
        let mut a = Archive::new();
        assert!(a.insert([1.0, 2.0], 5));
        assert!(!a.insert([1.0, 2.0], 9));
        assert_eq!(a.entries()[0].eval_id, 5);
    }

    /// Brute-force oracle: a stream point survives iff nothing in the stream
    /// dominates it and no earlier point equals it.
    fn brute_force_archive(stream: &[([f64; 2], u64)]) -> Vec<([f64; 2], u64)> {
        let mut out: Vec<([f64; 2], u64)> = Vec::new();
        'outer: for &(p, id) in stream {
            for &(q, qid) in stream {
                if dominates(&q, &p) || (q == p && qid < id) {
                    continue 'outer;
                }
            }
            out.push((p, id));
        }
        out.sort_by(|a, b| a.0[0].partial_cmp(&b.0[0]).unwrap());
        out
    }

    #[test]
    fn archive_matches_brute_force_filter_on_random_stream() {
        let mut rng = RandomSource::new(23);
        let mut archive = Archive::new();
        let mut stream = Vec::new();
        for id in 1..=10_000u64 {
            // coarse grid so duplicates and dominance both occur
            let p = [rng.index(30) as f64, rng.index(30) as f64];
            stream.push((p, id));
            archive.insert(p, id);
        }
        let expected = brute_force_archive(&stream);
        let got: Vec<([f64; 2], u64)> =
            archive.entries().iter().map(|e| (e.f, e.eval_id)).collect();
        assert_eq!(got, expected);
        // sorted invariant and mutual non-domination
        for w in archive.entries().windows(2) {
            assert!(w[0].f[0] < w[1].f[0]);
            assert!(w[0].f[1] > w[1].f[1]);
            assert!(!weakly_dominates(&w[0].f, &w[1].f));
            assert!(!weakly_dominates(&w[1].f, &w[0].f));
        }
    }

    #[test]
    fn hypervolume_single_point_unit_box() {
        assert_eq!(hypervolume_2d(&[[0.0, 0.0]], [1.0, 1.0]), 1.0);
    }

    #[test]
    fn hypervolume_two_overlapping_boxes() {
        // 0.5 + 0.5 - 0.25 by inclusion-exclusion
        let hv: f64 = hypervolume_2d(&[[0.0, 0.5], [0.5, 0.0]], [1.0, 1.0]);
        assert!((hv - 0.75).abs() < 1e-15);
    }

    #[test]
    fn hypervolume_ignores_points_outside_reference() {
        let hv = hypervolume_2d(&[[0.0, 0.0], [2.0, -5.0], [-1.0, 3.0]], [1.0, 1.0]);
        assert_eq!(hv, 1.0);
    }

    /// Integer-grid oracle: count unit cells covered inside the reference box.
    fn grid_hv(points: &[[f64; 2]], reference: [f64; 2]) -> f64 {
        let r0 = reference[0] as i64;
        let r1 = reference[1] as i64;
        let lo0 = points.iter().map(|p| p[0] as i64).min().unwrap_or(r0);
        let lo1 = points.iter().map(|p| p[1] as i64).min().unwrap_or(r1);
        let mut cells = 0u64;
        for i in lo0..r0 {
            for j in lo1..r1 {
                if points.iter().any(|p| p[0] as i64 <= i && p[1] as i64 <= j) {
                    cells += 1;
                }
            }
        }
        cells as f64
    }

    #[test]
    fn hypervolume_matches_grid_oracle_on_lattice_inputs() {
        let mut rng = RandomSource::new(31);
        for _ in 0..50 {
            let count = 1 + rng.index(12);
            let points: Vec<[f64; 2]> = (0..count)
                .map(|_| [rng.index(10) as f64, rng.index(10) as f64])
                .collect();
            let reference = [10.0, 10.0];
            let exact = hypervolume_2d(&points, reference);
            assert_eq!(exact, grid_hv(&points, reference), "points {points:?}");
        }
    }

    #[test]
    fn hypervolume_matches_monte_carlo_on_real_inputs() {
        let mut rng = RandomSource::new(37);
        for _ in 0..5 {
            let points: Vec<[f64; 2]> =
                (0..20).map(|_| [rng.uniform_f64(), rng.uniform_f64()]).collect();
            let reference = [1.0, 1.0];
            let exact = hypervolume_2d(&points, reference);
            let samples = 200_000;
            let mut inside = 0u64;
            for _ in 0..samples {
                let q = [rng.uniform_f64(), rng.uniform_f64()];
                if points.iter().any(|p| p[0] <= q[0] && p[1] <= q[1]) {
                    inside += 1;
                }
            }
            let est = inside as f64 / samples as f64;
            let se = (est * (1.0 - est) / samples as f64).sqrt().max(1e-9);
            assert!(
                (exact - est).abs() < 3.0 * se + 1e-9,
                "exact {exact} vs mc {est} (se {se})"
            );
        }
    }

    #[test]
    fn hypervolume_is_permutation_and_dominated_point_invariant() {
        let pts = [[0.1, 0.7], [0.4, 0.4], [0.8, 0.2]];
        let mut shuffled = pts;
        shuffled.swap(0, 2);
        let reference = [1.0, 1.0];
        assert_eq!(hypervolume_2d(&pts, reference), hypervolume_2d(&shuffled, reference));
        let mut with_dominated = pts.to_vec();
        with_dominated.push([0.5, 0.8]);
        assert_eq!(
            hypervolume_2d(&pts, reference),
            hypervolume_2d(&with_dominated, reference)
        );
    }

    #[test]
    fn icoco_distance_branch_corner() {
        // single entry at normalized (2, 2): distance sqrt(2) past the corner
        let c = ctx(0.5);
        let v = icoco_points(&[[2.0, 2.0]], &c);
        assert!((v - (0.5 + 2f64.sqrt())).abs() < 1e-12);
    }

    #[test]
    fn icoco_of_reference_front_is_zero() {
        // archive equal to the set that defined reference_hv scores exactly 0
        let front: Vec<[f64; 2]> = (0..50)
            .map(|i| {
                let t = i as f64 / 49.0;
                [t, (1.0 - t.sqrt()).powi(2)]
            })
            .collect();
        let hv = hypervolume_2d(&front, [1.0, 1.0]);
        let c = ctx(hv);
        assert_eq!(icoco_points(&front, &c), 0.0);
    }

    #[test]
    fn icoco_empty_archive_sentinel() {
        let c = ctx(0.8);
        let a: Archive<f64> = Archive::new();
        assert_eq!(icoco_value(&a, &c), 0.8 + 1.0);
    }

    #[test]
    fn icoco_can_beat_the_stored_reference() {
        let c = ctx(0.25);
        let v = icoco_points(&[[0.0, 0.0]], &c);
        assert!((v - (0.25 - 1.0)).abs() < 1e-15);
        assert!(v < 0.0);
    }

    #[test]
    fn icoco_is_non_increasing_under_archive_insertions() {
        let c = ctx(0.9);
        let mut rng = RandomSource::new(41);
        let mut archive = Archive::new();
        let mut last = f64::INFINITY;
        for id in 1..=2000 {
            let p = [rng.uniform_in(0.0, 3.0), rng.uniform_in(0.0, 3.0)];
            archive.insert(p, id);
            let v = icoco_value(&archive, &c);
            assert!(v <= last + 1e-12, "indicator increased: {last} -> {v}");
            last = v;
        }
    }

    #[test]
    fn default_targets_shape() {
        let t: Vec<f64> = default_targets();
        assert_eq!(t.len(), 58);
        assert_eq!(t[0], 1.0);
        assert!((t[50] - 1e-5).abs() < 1e-18);
        assert!((t[51] + 1e-5).abs() < 1e-18);
        assert!((t[57] + 10f64.powf(-4.4)).abs() < 1e-18);
        for w in t.windows(2) {
            assert!(w[0] > w[1], "targets must be strictly descending");
        }
        assert_eq!(t.iter().filter(|v| **v > 0.0).count(), 51);
        assert_eq!(t.iter().filter(|v| **v < 0.0).count(), 7);
    }

    #[test]
    fn ecdf_never_reaching_any_target_is_zero() {
        let trace: Vec<(u64, f64)> = vec![(10, 5.0), (20, 4.0)];
        let curve = ecdf(&[trace.as_slice()], &[1.0, 0.5], 2);
        assert!(curve.ordinate.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn ecdf_reaching_everything_at_first_evaluation_is_one() {
        let trace: Vec<(u64, f64)> = vec![(1, -10.0)];
        let curve = ecdf(&[trace.as_slice()], &[1.0, 0.5, 0.1], 4);
        assert!(curve.ordinate.iter().all(|&v| v == 1.0));
        assert_eq!(curve.abscissa[0], 1.0);
    }

    #[test]
    fn ecdf_steps_at_hand_computed_crossings() {
        // record A hits 1.0 at eval 10 and 0.1 at eval 1000;
        // record B hits 1.0 at eval 100 and never reaches 0.1.
        let a: Vec<(u64, f64)> = vec![(10, 0.9), (100, 0.5), (1000, 0.05)];
        let b: Vec<(u64, f64)> = vec![(10, 3.0), (100, 0.8), (1000, 0.2)];
        let n = 10;
        let curve = ecdf(&[a.as_slice(), b.as_slice()], &[1.0, 0.1], n);
        let value_at = |budget: f64| -> f64 {
            let i = curve.abscissa.partition_point(|&x| x <= budget);
            if i == 0 {
                0.0
            } else {
                curve.ordinate[i - 1]
            }
        };
        assert_eq!(value_at(0.99), 0.0);
        assert_eq!(value_at(1.0), 0.25); // a reached target 1.0 at fevals/n = 1
        assert_eq!(value_at(9.9), 0.25);
        assert_eq!(value_at(10.0), 0.5); // b reached target 1.0
        assert_eq!(value_at(100.0), 0.75); // a reached target 0.1
        assert_eq!(*curve.ordinate.last().unwrap(), 0.75);
        for w in curve.ordinate.windows(2) {
            assert!(w[0] <= w[1], "ecdf ordinate must be non-decreasing");
        }
    }

    #[test]
    fn ecdf_is_invariant_under_record_order() {
        let a: Vec<(u64, f64)> = vec![(10, 0.9), (1000, 0.05)];
        let b: Vec<(u64, f64)> = vec![(100, 0.8)];
        let t = [1.0, 0.1];
        let c1 = ecdf(&[a.as_slice(), b.as_slice()], &t, 10);
        let c2 = ecdf(&[b.as_slice(), a.as_slice()], &t, 10);
        assert_eq!(c1, c2);
    }
}
