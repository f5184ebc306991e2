//! The four ranking methods (NS, SM, SP, IB), each mapping a set of
//! individuals to a total quality order, best first.
//!
//! NS and SM rank by non-domination level with crowding distance respectively
//! hypervolume contribution as tie-breaker; SP uses the SPEA2 fitness (lower
//! is better) and IB the IBEA additive-ε fitness (higher is better). All
//! remaining ties are broken by eval_id ascending, oldest first, so a ranking
//! is deterministic for a fixed input order.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::dominance::dominates;
use crate::indicators::hypervolume_2d;
use crate::scalar::Scalar;
use crate::types::Individual;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum RankingMethod {
    Ns,
    Sm,
    Sp,
    Ib,
}

impl RankingMethod {
    pub const ALL: [RankingMethod; 4] = [
        RankingMethod::Ns,
        RankingMethod::Sm,
        RankingMethod::Sp,
        RankingMethod::Ib,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            RankingMethod::Ns => "NS",
            RankingMethod::Sm => "SM",
            RankingMethod::Sp => "SP",
            RankingMethod::Ib => "IB",
        }
    }
}

impl std::str::FromStr for RankingMethod {
    type Err = crate::error::ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "NS" => Ok(RankingMethod::Ns),
            "SM" => Ok(RankingMethod::Sm),
            "SP" => Ok(RankingMethod::Sp),
            "IB" => Ok(RankingMethod::Ib),
            _ => Err(crate::error::ConfigError::Unknown {
                what: "ranking method",
                got: s.to_string(),
            }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IbeaConfig<T> {
    pub kappa: T,
}

impl<T: Scalar> Default for IbeaConfig<T> {
    fn default() -> Self {
        Self { kappa: T::of(0.05) }
    }
}

/// Context a ranking may need: an explicit hypervolume reference for SM
/// (computed set-relative when absent) and the IBEA scaling factor.
#[derive(Debug, Clone, PartialEq)]
pub struct RankContext<T> {
    pub sm_reference: Option<[T; 2]>,
    pub ibea: IbeaConfig<T>,
}

impl<T: Scalar> Default for RankContext<T> {
    fn default() -> Self {
        Self { sm_reference: None, ibea: IbeaConfig::default() }
    }
}

/// Per-individual sort key, kept for inspection; `order` is authoritative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RankKey<T> {
    /// Front index (lower is better) plus tie-break value (higher is better).
    FrontTie { front: usize, tie: T },
    /// Scalar fitness in the method's own convention (SP: lower is better,
    /// IB: higher is better).
    Fitness(T),
}

/// A total quality order over the input set: `order[0]` is the best index.
#[derive(Debug, Clone, PartialEq)]
pub struct RankedSet<T> {
    pub order: Vec<usize>,
    pub key: Vec<RankKey<T>>,
}

impl<T> RankedSet<T> {
    /// Inverse permutation: `positions()[i]` is the rank of input index `i`.
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0; self.order.len()];
        for (rank, &i) in self.order.iter().enumerate() {
            pos[i] = rank;
        }
        pos
    }
}

/// Deb's fast non-dominated sort: front 0 holds the non-dominated members,
/// front i the members that become non-dominated once fronts < i are removed.
pub fn fast_nondominated_sort<T: Scalar>(set: &[Individual<T>]) -> Vec<Vec<usize>> {
    assert!(!set.is_empty(), "cannot sort an empty set");
    let n = set.len();
    let mut dominated_by: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut domination_count = vec![0usize; n];
    let mut current: Vec<usize> = Vec::new();

    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            if dominates(&set[i].f, &set[j].f) {
                dominated_by[i].push(j);
            } else if dominates(&set[j].f, &set[i].f) {
                domination_count[i] += 1;
            }
        }
        if domination_count[i] == 0 {
            current.push(i);
        }
    }

    let mut fronts = Vec::new();
    while !current.is_empty() {
        let mut next = Vec::new();
        for &i in &current {
            for &j in &dominated_by[i] {
                domination_count[j] -= 1;
                if domination_count[j] == 0 {
                    next.push(j);
                }
            }
        }
        next.sort_unstable(); // canonical front order: input index ascending
        fronts.push(std::mem::replace(&mut current, next));
    }
    fronts
}

/// NSGA-II crowding distance for one mutually non-dominated front, aligned
/// with `front`. Boundary individuals per objective get +inf; interior ones
/// the sum of normalized cuboid side lengths; zero-range objectives
/// contribute nothing.
pub fn crowding_distance<T: Scalar>(set: &[Individual<T>], front: &[usize]) -> Vec<T> {
    assert!(!front.is_empty(), "crowding distance of an empty front");
    let l = front.len();
    if l <= 2 {
        return vec![T::infinity(); l];
    }
    let m = set[front[0]].f.len();
    let mut dist = vec![T::zero(); l];
    let mut idx: Vec<usize> = (0..l).collect();
    for obj in 0..m {
        idx.sort_by(|&a, &b| {
            set[front[a]].f[obj]
                .partial_cmp(&set[front[b]].f[obj])
                .unwrap()
                .then(a.cmp(&b))
        });
        dist[idx[0]] = T::infinity();
        dist[idx[l - 1]] = T::infinity();
        let range = set[front[idx[l - 1]]].f[obj] - set[front[idx[0]]].f[obj];
        if range > T::zero() {
            for w in 1..l - 1 {
                let gap = set[front[idx[w + 1]]].f[obj] - set[front[idx[w - 1]]].f[obj];
                dist[idx[w]] = dist[idx[w]] + gap / range;
            }
        }
    }
    dist
}

/// Exclusive hypervolume contribution of each front member with respect to
/// `reference` (bi-objective): HV(front) - HV(front without the member).
pub fn hv_contribution_2d<T: Scalar>(
    set: &[Individual<T>],
    front: &[usize],
    reference: [T; 2],
) -> Vec<T> {
    let pts: Vec<[T; 2]> = front
        .iter()
        .map(|&i| {
            assert_eq!(set[i].f.len(), 2, "hypervolume contributions need m = 2");
            [set[i].f[0], set[i].f[1]]
        })
        .collect();
    let total = hypervolume_2d(&pts, reference);
    (0..pts.len())
        .map(|skip| {
            let rest: Vec<[T; 2]> = pts
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != skip)
                .map(|(_, p)| *p)
                .collect();
            total - hypervolume_2d(&rest, reference)
        })
        .collect()
}

/// Set-relative hypervolume reference for SM: the worst observed point plus
/// 10% of the per-objective range.
pub fn sm_reference<T: Scalar>(set: &[Individual<T>]) -> [T; 2] {
    assert!(!set.is_empty());
    assert_eq!(set[0].f.len(), 2, "SM ranking needs m = 2");
    let mut lo = [T::infinity(); 2];
    let mut hi = [T::neg_infinity(); 2];
    for ind in set {
        for d in 0..2 {
            lo[d] = lo[d].min(ind.f[d]);
            hi[d] = hi[d].max(ind.f[d]);
        }
    }
    let margin = T::of(0.1);
    [hi[0] + margin * (hi[0] - lo[0]), hi[1] + margin * (hi[1] - lo[1])]
}

fn order_by<T: Scalar, K>(set: &[Individual<T>], mut better: K) -> Vec<usize>
where
    K: FnMut(usize, usize) -> Ordering,
{
    let mut order: Vec<usize> = (0..set.len()).collect();
    order.sort_by(|&a, &b| better(a, b).then(set[a].eval_id.cmp(&set[b].eval_id)));
    order
}

/// Non-dominated sorting with crowding-distance tie-break (NSGA-II ranking).
pub fn rank_ns<T: Scalar>(set: &[Individual<T>]) -> RankedSet<T> {
    let fronts = fast_nondominated_sort(set);
    let mut key = vec![RankKey::FrontTie { front: 0, tie: T::zero() }; set.len()];
    let mut front_of = vec![0usize; set.len()];
    let mut tie_of = vec![T::zero(); set.len()];
    for (fi, front) in fronts.iter().enumerate() {
        let crowd = crowding_distance(set, front);
        for (&i, &c) in front.iter().zip(&crowd) {
            key[i] = RankKey::FrontTie { front: fi, tie: c };
            front_of[i] = fi;
            tie_of[i] = c;
        }
    }
    let order = order_by(set, |a, b| {
        front_of[a]
            .cmp(&front_of[b])
            .then(tie_of[b].partial_cmp(&tie_of[a]).unwrap())
    });
    RankedSet { order, key }
}

/// Non-dominated sorting with hypervolume-contribution tie-break (SMS-EMOA
/// ranking); contributions are computed within each front against
/// `reference`.
pub fn rank_sm<T: Scalar>(set: &[Individual<T>], reference: [T; 2]) -> RankedSet<T> {
    let fronts = fast_nondominated_sort(set);
    let mut key = vec![RankKey::FrontTie { front: 0, tie: T::zero() }; set.len()];
    let mut front_of = vec![0usize; set.len()];
    let mut tie_of = vec![T::zero(); set.len()];
    for (fi, front) in fronts.iter().enumerate() {
        let contrib = hv_contribution_2d(set, front, reference);
        for (&i, &c) in front.iter().zip(&contrib) {
            key[i] = RankKey::FrontTie { front: fi, tie: c };
            front_of[i] = fi;
            tie_of[i] = c;
        }
    }
    let order = order_by(set, |a, b| {
        front_of[a]
            .cmp(&front_of[b])
            .then(tie_of[b].partial_cmp(&tie_of[a]).unwrap())
    });
    RankedSet { order, key }
}

/// SPEA2 fitness (lower is better): raw dominance fitness plus nearest
/// neighbour density, F(i) = R(i) + 1/(sigma_i^k + 2) with k = floor(sqrt(N)).
pub fn spea2_fitness<T: Scalar>(set: &[Individual<T>]) -> Vec<T> {
    let n = set.len();
    assert!(n >= 2, "SPEA2 fitness needs at least two individuals");
    let mut strength = vec![0usize; n];
    for i in 0..n {
        for j in 0..n {
            if i != j && dominates(&set[i].f, &set[j].f) {
                strength[i] += 1;
            }
        }
    }
    let mut raw = vec![T::zero(); n];
    for i in 0..n {
        for j in 0..n {
            if i != j && dominates(&set[j].f, &set[i].f) {
                raw[i] = raw[i] + T::of(strength[j] as f64);
            }
        }
    }
    let k = (n as f64).sqrt().floor() as usize;
    let k = k.clamp(1, n - 1);
    (0..n)
        .map(|i| {
            let mut dists: Vec<T> = (0..n)
                .filter(|&j| j != i)
                .map(|j| {
                    set[i]
                        .f
                        .iter()
                        .zip(&set[j].f)
                        .map(|(&a, &b)| (a - b) * (a - b))
                        .sum::<T>()
                        .sqrt()
                })
                .collect();
            dists.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let sigma = dists[k - 1];
            raw[i] + T::one() / (sigma + T::of(2.0))
        })
        .collect()
}

/// IBEA fitness with the additive ε indicator (higher is better), on
/// objectives normalized to [0,1] by the set-wise per-objective range and
/// scaled adaptively by the largest absolute indicator value.
pub fn ibea_fitness<T: Scalar>(set: &[Individual<T>], cfg: &IbeaConfig<T>) -> Vec<T> {
    let n = set.len();
    assert!(n >= 2, "IBEA fitness needs at least two individuals");
    assert!(cfg.kappa > T::zero(), "kappa must be positive");
    let m = set[0].f.len();
    let mut lo = vec![T::infinity(); m];
    let mut hi = vec![T::neg_infinity(); m];
    for ind in set {
        for d in 0..m {
            lo[d] = lo[d].min(ind.f[d]);
            hi[d] = hi[d].max(ind.f[d]);
        }
    }
    // constant objectives normalize to 0 for every individual
    let norm: Vec<Vec<T>> = set
        .iter()
        .map(|ind| {
            (0..m)
                .map(|d| {
                    let range = hi[d] - lo[d];
                    if range > T::zero() {
                        (ind.f[d] - lo[d]) / range
                    } else {
                        T::zero()
                    }
                })
                .collect()
        })
        .collect();
    let eps = |a: &[T], b: &[T]| -> T {
        a.iter()
            .zip(b)
            .map(|(&x, &y)| x - y)
            .fold(T::neg_infinity(), |m, v| m.max(v))
    };
    let mut c = T::zero();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                c = c.max(eps(&norm[i], &norm[j]).abs());
            }
        }
    }
    if c == T::zero() {
        // all points identical: every fitness is the same
        return vec![T::zero(); n];
    }
    (0..n)
        .map(|i| {
            let mut fit = T::zero();
            for j in 0..n {
                if j != i {
                    fit = fit - (-eps(&norm[j], &norm[i]) / (c * cfg.kappa)).exp();
                }
            }
            fit
        })
        .collect()
}

/// Dispatch to the configured ranking method. SP orders fitness ascending
/// (lower SPEA2 fitness is better), IB descending; remaining ties by eval_id.
pub fn rank<T: Scalar>(
    method: RankingMethod,
    set: &[Individual<T>],
    ctx: &RankContext<T>,
) -> RankedSet<T> {
    assert!(!set.is_empty(), "cannot rank an empty set");
    if set.len() == 1 {
        let key = match method {
            RankingMethod::Ns | RankingMethod::Sm => {
                RankKey::FrontTie { front: 0, tie: T::infinity() }
            }
            _ => RankKey::Fitness(T::zero()),
        };
        return RankedSet { order: vec![0], key: vec![key] };
    }
    match method {
        RankingMethod::Ns => rank_ns(set),
        RankingMethod::Sm => {
            let reference = ctx.sm_reference.unwrap_or_else(|| sm_reference(set));
            rank_sm(set, reference)
        }
        RankingMethod::Sp => {
            let fitness = spea2_fitness(set);
            let order = order_by(set, |a, b| fitness[a].partial_cmp(&fitness[b]).unwrap());
            let key = fitness.into_iter().map(RankKey::Fitness).collect();
            RankedSet { order, key }
        }
        RankingMethod::Ib => {
            let fitness = ibea_fitness(set, &ctx.ibea);
            let order = order_by(set, |a, b| fitness[b].partial_cmp(&fitness[a]).unwrap());
            let key = fitness.into_iter().map(RankKey::Fitness).collect();
            RankedSet { order, key }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RandomSource;

    fn ind(f: Vec<f64>, id: u64) -> Individual<f64> {
        Individual::from_objectives(f, id)
    }

    fn random_set(rng: &mut RandomSource, n: usize, grid: usize) -> Vec<Individual<f64>> {
        (0..n)
            .map(|i| {
                ind(
                    vec![rng.index(grid) as f64, rng.index(grid) as f64],
                    i as u64,
                )
            })
            .collect()
    }

    /// O(N^2 m) oracle: peel non-dominated layers by repeated scanning.
    fn brute_force_fronts(set: &[Individual<f64>]) -> Vec<Vec<usize>> {
        let mut remaining: Vec<usize> = (0..set.len()).collect();
        let mut fronts = Vec::new();
        while !remaining.is_empty() {
            let front: Vec<usize> = remaining
                .iter()
                .copied()
                .filter(|&i| {
                    !remaining
                        .iter()
                        .any(|&j| j != i && dominates(&set[j].f, &set[i].f))
                })
                .collect();
            remaining.retain(|i| !front.contains(i));
            fronts.push(front);
        }
        fronts
    }

    #[test]
    fn singleton_is_one_front() {
        let s = vec![ind(vec![1.0, 1.0], 0)];
        assert_eq!(fast_nondominated_sort(&s), vec![vec![0]]);
    }

    #[test]
    fn three_point_fronts() {
        let s = vec![
            ind(vec![1.0, 2.0], 0),
            ind(vec![2.0, 1.0], 1),
            ind(vec![2.0, 2.0], 2),
        ];
        assert_eq!(fast_nondominated_sort(&s), vec![vec![0, 1], vec![2]]);
    }

    #[test]
    fn fronts_match_brute_force_oracle() {
        let mut rng = RandomSource::new(101);
        for _ in 0..50 {
            let s = random_set(&mut rng, 200, 40);
            assert_eq!(fast_nondominated_sort(&s), brute_force_fronts(&s));
        }
    }

    #[test]
    fn small_fronts_are_all_boundary() {
        let s = vec![ind(vec![0.0, 1.0], 0), ind(vec![1.0, 0.0], 1)];
        let d = crowding_distance(&s, &[0, 1]);
        assert!(d.iter().all(|v| v.is_infinite()));
    }

    #[test]
    fn symmetric_three_point_crowding() {
        let s = vec![
            ind(vec![0.0, 2.0], 0),
            ind(vec![1.0, 1.0], 1),
            ind(vec![2.0, 0.0], 2),
        ];
        let d = crowding_distance(&s, &[0, 1, 2]);
        assert!(d[0].is_infinite() && d[2].is_infinite());
        assert!((d[1] - 2.0).abs() < 1e-12);
    }

    /// Recompute crowding from its definition, brute force per objective.
    fn brute_force_crowding(set: &[Individual<f64>], front: &[usize]) -> Vec<f64> {
        let l = front.len();
        if l <= 2 {
            return vec![f64::INFINITY; l];
        }
        let m = set[front[0]].f.len();
        let mut out = vec![0.0; l];
        for obj in 0..m {
            let mut vals: Vec<(f64, usize)> = front
                .iter()
                .enumerate()
                .map(|(w, &i)| (set[i].f[obj], w))
                .collect();
            vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
            out[vals[0].1] = f64::INFINITY;
            out[vals[l - 1].1] = f64::INFINITY;
            let range = vals[l - 1].0 - vals[0].0;
            if range > 0.0 {
                for w in 1..l - 1 {
                    out[vals[w].1] += (vals[w + 1].0 - vals[w - 1].0) / range;
                }
            }
        }
        out
    }

    #[test]
    fn crowding_matches_recomputation_on_random_fronts() {
        let mut rng = RandomSource::new(131);
        for _ in 0..100 {
            let s = random_set(&mut rng, 60, 50);
            for front in fast_nondominated_sort(&s) {
                let got = crowding_distance(&s, &front);
                let want = brute_force_crowding(&s, &front);
                for (g, w) in got.iter().zip(&want) {
                    if w.is_infinite() {
                        assert!(g.is_infinite());
                    } else {
                        assert!((g - w).abs() < 1e-9);
                    }
                }
            }
        }
    }

    #[test]
    fn single_point_contribution_is_the_unit_box() {
        let s = vec![ind(vec![0.0, 0.0], 0)];
        let c = hv_contribution_2d(&s, &[0], [1.0, 1.0]);
        assert_eq!(c, vec![1.0]);
    }

    #[test]
    fn middle_point_contribution_by_inclusion_exclusion() {
        let s = vec![
            ind(vec![0.0, 2.0], 0),
            ind(vec![1.0, 1.0], 1),
            ind(vec![2.0, 0.0], 2),
        ];
        let c = hv_contribution_2d(&s, &[0, 1, 2], [3.0, 3.0]);
        assert!((c[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn contributions_sum_below_total_hypervolume() {
        let mut rng = RandomSource::new(151);
        for _ in 0..50 {
            let s = random_set(&mut rng, 30, 25);
            let fronts = fast_nondominated_sort(&s);
            let front = &fronts[0];
            let reference = [30.0, 30.0];
            let pts: Vec<[f64; 2]> = front.iter().map(|&i| [s[i].f[0], s[i].f[1]]).collect();
            let total = hypervolume_2d(&pts, reference);
            let contrib = hv_contribution_2d(&s, front, reference);
            let sum: f64 = contrib.iter().sum();
            if front.len() == 1 {
                assert!((sum - total).abs() < 1e-9);
            } else {
                assert!(sum <= total + 1e-9);
            }
        }
    }

    #[test]
    fn ns_orders_by_crowding_within_one_front() {
        // mutually non-dominated, distinct crowding: extremes first (inf)
        let s = vec![
            ind(vec![0.0, 10.0], 0),
            ind(vec![1.0, 6.0], 1),
            ind(vec![3.0, 5.0], 2),
            ind(vec![10.0, 0.0], 3),
        ];
        let r = rank_ns(&s);
        let crowd = crowding_distance(&s, &[0, 1, 2, 3]);
        for w in r.order.windows(2) {
            assert!(crowd[w[0]] >= crowd[w[1]]);
        }
    }

    #[test]
    fn ns_front_indices_are_non_decreasing_along_the_order() {
        let mut rng = RandomSource::new(161);
        for _ in 0..50 {
            let s = random_set(&mut rng, 80, 20);
            let fronts = fast_nondominated_sort(&s);
            let mut front_of = vec![0usize; s.len()];
            for (fi, front) in fronts.iter().enumerate() {
                for &i in front {
                    front_of[i] = fi;
                }
            }
            for method in [RankingMethod::Ns, RankingMethod::Sm] {
                let r = rank(method, &s, &RankContext::default());
                for w in r.order.windows(2) {
                    assert!(front_of[w[0]] <= front_of[w[1]]);
                }
            }
        }
    }

    #[test]
    fn sm_orders_by_contribution_within_one_front() {
        let s = vec![
            ind(vec![0.0, 3.0], 0),
            ind(vec![1.0, 1.0], 1),
            ind(vec![3.0, 0.0], 2),
        ];
        let r = rank_sm(&s, [4.0, 4.0]);
        let contrib = hv_contribution_2d(&s, &[0, 1, 2], [4.0, 4.0]);
        for w in r.order.windows(2) {
            assert!(contrib[w[0]] >= contrib[w[1]]);
        }
    }

    #[test]
    fn spea2_nondominated_point_has_zero_raw_and_minimal_fitness() {
        let s = vec![
            ind(vec![0.0, 0.0], 0),
            ind(vec![1.0, 2.0], 1),
            ind(vec![2.0, 1.0], 2),
            ind(vec![3.0, 3.0], 3),
        ];
        let f = spea2_fitness(&s);
        // the single non-dominated point: raw part 0, so fitness < 1
        assert!(f[0] < 1.0);
        for i in 1..4 {
            assert!(f[0] < f[i]);
        }
    }

    #[test]
    fn spea2_mutually_nondominated_set_ranks_by_density_only() {
        let s = vec![
            ind(vec![0.0, 3.0], 0),
            ind(vec![1.0, 2.0], 1),
            ind(vec![2.0, 1.0], 2),
            ind(vec![3.0, 0.0], 3),
        ];
        let f = spea2_fitness(&s);
        assert!(f.iter().all(|&v| v < 1.0), "all raw values must be zero");
    }

    #[test]
    fn spea2_raw_matches_double_loop_oracle() {
        let mut rng = RandomSource::new(171);
        let s = random_set(&mut rng, 100, 12);
        let f = spea2_fitness(&s);
        // independent recomputation of R(i), then bound the density part
        for i in 0..s.len() {
            let mut raw = 0.0;
            for j in 0..s.len() {
                if j != i && dominates(&s[j].f, &s[i].f) {
                    let strength_j = (0..s.len())
                        .filter(|&l| l != j && dominates(&s[j].f, &s[l].f))
                        .count();
                    raw += strength_j as f64;
                }
            }
            let density = f[i] - raw;
            assert!(density > 0.0 && density <= 0.5, "density {density} out of range");
        }
    }

    #[test]
    fn ibea_respects_dominance_and_duplicates() {
        let cfg = IbeaConfig::default();
        let s = vec![ind(vec![0.0, 0.0], 0), ind(vec![1.0, 1.0], 1)];
        let f = ibea_fitness(&s, &cfg);
        assert!(f[0] > f[1]);

        let s = vec![
            ind(vec![0.5, 0.5], 0),
            ind(vec![0.5, 0.5], 1),
            ind(vec![0.0, 1.0], 2),
        ];
        let f = ibea_fitness(&s, &cfg);
        assert_eq!(f[0], f[1], "duplicates get identical fitness");
    }

    #[test]
    fn ibea_matches_direct_summation_oracle() {
        let mut rng = RandomSource::new(181);
        let cfg = IbeaConfig { kappa: 0.05 };
        let s = random_set(&mut rng, 60, 100);
        let f = ibea_fitness(&s, &cfg);

        // independent recomputation from the definition
        let m = 2;
        let mut lo = [f64::INFINITY; 2];
        let mut hi = [f64::NEG_INFINITY; 2];
        for ind in &s {
            for d in 0..m {
                lo[d] = lo[d].min(ind.f[d]);
                hi[d] = hi[d].max(ind.f[d]);
            }
        }
        let norm = |ind: &Individual<f64>, d: usize| -> f64 {
            if hi[d] > lo[d] {
                (ind.f[d] - lo[d]) / (hi[d] - lo[d])
            } else {
                0.0
            }
        };
        let eps = |a: &Individual<f64>, b: &Individual<f64>| -> f64 {
            (0..m).map(|d| norm(a, d) - norm(b, d)).fold(f64::NEG_INFINITY, f64::max)
        };
        let mut c: f64 = 0.0;
        for i in 0..s.len() {
            for j in 0..s.len() {
                if i != j {
                    c = c.max(eps(&s[i], &s[j]).abs());
                }
            }
        }
        for i in 0..s.len() {
            let mut want = 0.0;
            for j in 0..s.len() {
                if j != i {
                    want -= (-eps(&s[j], &s[i]) / (c * cfg.kappa)).exp();
                }
            }
            let rel = (f[i] - want).abs() / want.abs().max(1e-300);
            assert!(rel < 1e-12, "fitness {} vs oracle {}", f[i], want);
        }
    }

    #[test]
    fn rank_singleton_under_every_method() {
        let s = vec![ind(vec![1.0, 2.0], 7)];
        for method in RankingMethod::ALL {
            let r = rank(method, &s, &RankContext::default());
            assert_eq!(r.order, vec![0]);
        }
    }

    #[test]
    fn a_point_dominating_all_others_ranks_first_everywhere() {
        let mut rng = RandomSource::new(191);
        for _ in 0..30 {
            let mut s = random_set(&mut rng, 20, 10);
            for ind in s.iter_mut() {
                for v in ind.f.iter_mut() {
                    *v = *v + 1.0; // keep strictly positive
                }
            }
            s.push(ind(vec![0.0, 0.0], 99));
            for method in RankingMethod::ALL {
                let r = rank(method, &s, &RankContext::default());
                assert_eq!(r.order[0], s.len() - 1, "method {method:?}");
            }
        }
    }

    #[test]
    fn dominance_consistency_across_methods() {
        let mut rng = RandomSource::new(201);
        for _ in 0..250 {
            let s = random_set(&mut rng, 24, 8);
            for method in RankingMethod::ALL {
                let r = rank(method, &s, &RankContext::default());
                let pos = r.positions();
                for i in 0..s.len() {
                    for j in 0..s.len() {
                        if dominates(&s[i].f, &s[j].f) {
                            assert!(
                                pos[i] < pos[j],
                                "{method:?}: dominating point ranked behind"
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn rank_is_deterministic() {
        let mut rng = RandomSource::new(211);
        let s = random_set(&mut rng, 50, 6);
        for method in RankingMethod::ALL {
            let a = rank(method, &s, &RankContext::default());
            let b = rank(method, &s, &RankContext::default());
            assert_eq!(a.order, b.order);
        }
    }
}
