//! The main optimizer loop: initialize μ individuals, then repeatedly pick k
//! parents at random, generate λ children from that one parent set, and apply
//! the configured environmental selection. Every evaluation is offered to the
//! unbounded archive the moment it happens, and the indicator traces needed
//! for reporting are sampled along the way.

use serde::{Deserialize, Serialize};

use crate::error::ConfigError;
use crate::indicators::{icoco_points, icoco_value, Archive, ArchiveEntry, IndicatorContext};
use crate::problems::BiObjectiveProblem;
use crate::ranking::{rank, IbeaConfig, RankContext, RankingMethod};
use crate::rng::RandomSource;
use crate::scalar::Scalar;
use crate::selection::{environmental_selection, SelectionKind};
use crate::types::{Individual, Population};
use crate::variation::{
    generate_children, polynomial_mutation, sbx_pair, CrossoverConfig, CrossoverMethod,
};

/// How parents are chosen for child generation. The plain loop draws one
/// random parent set per iteration; the original-EMOA presets use per-pair
/// binary tournaments instead.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MatingScheme {
    SharedParents,
    BinaryTournament,
}

/// Population size μ = floor(100 ln n).
pub fn default_mu(n: usize) -> usize {
    (100.0 * (n as f64).ln()).floor() as usize
}

/// Brood size λ = 10 n.
pub fn default_lambda(n: usize) -> usize {
    10 * n
}

/// Evaluation budget 10^4 n.
pub fn default_budget(n: usize) -> u64 {
    10_000 * n as u64
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig<T> {
    pub selection: SelectionKind,
    pub crossover: CrossoverConfig<T>,
    pub ranking: RankingMethod,
    pub mating: MatingScheme,
    pub mu: usize,
    pub lambda: usize,
    pub max_evals: u64,
    pub seed: u64,
    pub problem_id: String,
    pub kappa: T,
    pub record_population_indicator: bool,
    /// Evaluations between archive-indicator samples (default λ).
    pub record_interval: u64,
}

impl<T: Scalar> RunConfig<T> {
    /// The standard benchmark settings for one algorithm cell on one problem.
    pub fn benchmark_defaults(
        selection: SelectionKind,
        method: CrossoverMethod,
        ranking: RankingMethod,
        problem: &BiObjectiveProblem<T>,
        seed: u64,
    ) -> Self {
        let n = problem.n;
        let lambda = default_lambda(n);
        Self {
            selection,
            crossover: CrossoverConfig::for_problem(method, n),
            ranking,
            mating: MatingScheme::SharedParents,
            mu: default_mu(n),
            lambda,
            max_evals: default_budget(n),
            seed,
            problem_id: problem.id.clone(),
            kappa: T::of(0.05),
            record_population_indicator: false,
            record_interval: lambda as u64,
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let k = self.crossover.k;
        if self.mu < k {
            return Err(ConfigError::MuBelowFamily { mu: self.mu, k });
        }
        if self.selection == SelectionKind::Bc && self.lambda < k {
            return Err(ConfigError::LambdaBelowFamily { lambda: self.lambda, k });
        }
        if self.max_evals < self.mu as u64 {
            return Err(ConfigError::BudgetBelowInit { max_evals: self.max_evals, mu: self.mu });
        }
        if self.record_interval == 0 {
            return Err(ConfigError::ZeroRecordInterval);
        }
        if self.crossover.method == CrossoverMethod::Sbx && self.lambda % 2 != 0 {
            return Err(ConfigError::OddSbxBrood(self.lambda));
        }
        if self.mating == MatingScheme::BinaryTournament
            && self.crossover.method != CrossoverMethod::Sbx
        {
            return Err(ConfigError::MatingNeedsSbx);
        }
        Ok(())
    }
}

/// Per-run metadata; everything except `wall_time_s` is deterministic.
#[derive(Debug, Clone, Serialize)]
pub struct RunMeta<T> {
    pub config: RunConfig<T>,
    pub n: usize,
    pub k: usize,
    pub rng_algorithm: &'static str,
    pub total_evals: u64,
    pub iterations: u64,
    pub wall_time_s: f64,
}

/// Everything recorded during one run.
#[derive(Debug, Clone)]
pub struct RunRecord<T> {
    /// (evaluation count, archive indicator), sampled every record_interval
    /// evaluations plus once after initialization and once at the end.
    pub indicator_trace: Vec<(u64, T)>,
    /// (evaluation count, population indicator) at every iteration end.
    pub population_trace: Option<Vec<(u64, T)>>,
    /// (evaluation count, cumulative parents replaced) at every iteration end.
    pub cumulative_replacements: Vec<(u64, u64)>,
    pub final_archive: Vec<ArchiveEntry<T>>,
    pub meta: RunMeta<T>,
}

/// Uniform initialization inside the bounds; `evaluate` performs the actual
/// evaluation (and whatever archive/trace bookkeeping the caller wires in).
pub fn init_population<T, F>(
    problem: &BiObjectiveProblem<T>,
    mu: usize,
    rng: &mut RandomSource,
    mut evaluate: F,
) -> Population<T>
where
    T: Scalar,
    F: FnMut(Vec<T>) -> Individual<T>,
{
    assert!(mu >= 1, "population size must be positive");
    Population::new((0..mu).map(|_| evaluate(problem.bounds.sample(rng))).collect())
}

/// k distinct parent indices, uniform without replacement and without any
/// fitness bias.
pub fn select_parents<T: Scalar>(
    population: &Population<T>,
    k: usize,
    rng: &mut RandomSource,
) -> Vec<usize> {
    assert!(k <= population.mu(), "cannot select more parents than members");
    rng.distinct_indices(population.mu(), k)
}

struct Evaluator<'a, T: Scalar, S: FnMut(u64, [T; 2])> {
    problem: &'a BiObjectiveProblem<T>,
    ctx: &'a IndicatorContext<T>,
    archive: Archive<T>,
    evals: u64,
    interval: u64,
    trace: Vec<(u64, T)>,
    sink: S,
}

impl<'a, T: Scalar, S: FnMut(u64, [T; 2])> Evaluator<'a, T, S> {
    fn evaluate(&mut self, x: Vec<T>) -> Individual<T> {
        let f = self.problem.evaluate(&x);
        self.evals += 1;
        self.archive.insert(f, self.evals);
        (self.sink)(self.evals, f);
        if self.evals % self.interval == 0 {
            self.trace.push((self.evals, icoco_value(&self.archive, self.ctx)));
        }
        Individual::new(x, vec![f[0], f[1]], self.evals)
    }

    /// Force a sample at the current evaluation count (deduplicated).
    fn sample_now(&mut self) {
        if self.trace.last().map(|&(e, _)| e) != Some(self.evals) {
            self.trace.push((self.evals, icoco_value(&self.archive, self.ctx)));
        }
    }
}

/// Run to completion; see [`run_with_sink`].
pub fn run<T: Scalar>(
    cfg: &RunConfig<T>,
    problem: &BiObjectiveProblem<T>,
    ctx: &IndicatorContext<T>,
) -> Result<RunRecord<T>, ConfigError> {
    run_with_sink(cfg, problem, ctx, |_, _| {})
}

/// Run to completion, calling `sink(eval_id, f)` for every single function
/// evaluation in order. Iterations run while a full brood still fits in the
/// budget, so `total_evals = mu + lambda * iterations <= max_evals`.
pub fn run_with_sink<T, S>(
    cfg: &RunConfig<T>,
    problem: &BiObjectiveProblem<T>,
    ctx: &IndicatorContext<T>,
    sink: S,
) -> Result<RunRecord<T>, ConfigError>
where
    T: Scalar,
    S: FnMut(u64, [T; 2]),
{
    cfg.validate()?;
    debug_assert_eq!(cfg.problem_id, problem.id, "config built for a different problem");
    let started = std::time::Instant::now();
    let mut rng = RandomSource::new(cfg.seed);
    let mut evaluator = Evaluator {
        problem,
        ctx,
        archive: Archive::new(),
        evals: 0,
        interval: cfg.record_interval,
        trace: Vec::new(),
        sink,
    };
    let rank_ctx = RankContext { sm_reference: None, ibea: IbeaConfig { kappa: cfg.kappa } };

    let mut population = init_population(problem, cfg.mu, &mut rng, |x| evaluator.evaluate(x));
    evaluator.sample_now();

    let k = cfg.crossover.k;
    let lambda = cfg.lambda;
    let mut iterations = 0u64;
    let mut cumulative_replaced = 0u64;
    let mut replacements = Vec::new();
    let mut population_trace = cfg.record_population_indicator.then(Vec::new);

    while evaluator.evals + lambda as u64 <= cfg.max_evals {
        let (parent_indices, children) = match cfg.mating {
            MatingScheme::SharedParents => {
                let parent_indices = select_parents(&population, k, &mut rng);
                let parent_refs: Vec<&Individual<T>> =
                    parent_indices.iter().map(|&i| &population.members[i]).collect();
                let children = generate_children(
                    &parent_refs,
                    lambda,
                    &cfg.crossover,
                    &problem.bounds,
                    &mut rng,
                    |x| evaluator.evaluate(x),
                )?;
                (parent_indices, children)
            }
            MatingScheme::BinaryTournament => {
                let pos = rank(cfg.ranking, &population.members, &rank_ctx).positions();
                let mut used = vec![false; population.mu()];
                let tournament = |rng: &mut RandomSource| -> usize {
                    let pair = rng.distinct_indices(population.mu(), 2);
                    if pos[pair[0]] <= pos[pair[1]] { pair[0] } else { pair[1] }
                };
                let mut children = Vec::with_capacity(lambda);
                for _ in 0..lambda / 2 {
                    let a = tournament(&mut rng);
                    let b = tournament(&mut rng);
                    used[a] = true;
                    used[b] = true;
                    let (c1, c2) = sbx_pair(
                        &population.members[a].x,
                        &population.members[b].x,
                        &cfg.crossover,
                        &problem.bounds,
                        &mut rng,
                    );
                    let c1 = polynomial_mutation(&c1, &problem.bounds, &cfg.crossover, &mut rng);
                    let c2 = polynomial_mutation(&c2, &problem.bounds, &cfg.crossover, &mut rng);
                    children.push(evaluator.evaluate(c1));
                    children.push(evaluator.evaluate(c2));
                }
                let parent_indices: Vec<usize> =
                    (0..population.mu()).filter(|&i| used[i]).collect();
                (parent_indices, children)
            }
        };

        let outcome = environmental_selection(
            cfg.selection,
            &population,
            children,
            &parent_indices,
            cfg.ranking,
            &rank_ctx,
        )?;
        population = outcome.next_population;
        cumulative_replaced += outcome.replaced_parent_count as u64;
        iterations += 1;
        replacements.push((evaluator.evals, cumulative_replaced));
        if let Some(trace) = population_trace.as_mut() {
            let points: Vec<[T; 2]> =
                population.members.iter().map(|m| [m.f[0], m.f[1]]).collect();
            trace.push((evaluator.evals, icoco_points(&points, ctx)));
        }
    }
    evaluator.sample_now();

    Ok(RunRecord {
        indicator_trace: evaluator.trace,
        population_trace,
        cumulative_replacements: replacements,
        final_archive: evaluator.archive.entries().to_vec(),
        meta: RunMeta {
            config: cfg.clone(),
            n: problem.n,
            k,
            rng_algorithm: RandomSource::ALGORITHM,
            total_evals: evaluator.evals,
            iterations,
            wall_time_s: started.elapsed().as_secs_f64(),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dominance::dominates;
    use crate::problems::make_suite;

    fn test_ctx(problem: &BiObjectiveProblem<f64>) -> IndicatorContext<f64> {
        IndicatorContext::new(problem.ideal, problem.nadir, 1.0)
    }

    fn base_config(
        problem: &BiObjectiveProblem<f64>,
        selection: SelectionKind,
        method: CrossoverMethod,
    ) -> RunConfig<f64> {
        RunConfig::benchmark_defaults(selection, method, RankingMethod::Ns, problem, 1)
    }

    #[test]
    fn population_size_formula() {
        assert_eq!(default_mu(10), 230);
        assert_eq!(default_mu(2), 69);
        assert_eq!(default_mu(20), 299);
        assert_eq!(default_lambda(10), 100);
        assert_eq!(default_budget(10), 100_000);
    }

    #[test]
    fn initial_population_is_uniform_in_bounds_with_sequential_ids() {
        let suite = make_suite::<f64>(&[10], 1);
        let problem = &suite.problems[0];
        let mut rng = RandomSource::new(5);
        let mut next = 0u64;
        let pop = init_population(problem, 230, &mut rng, |x| {
            next += 1;
            let f = problem.evaluate(&x);
            Individual::new(x, vec![f[0], f[1]], next)
        });
        assert_eq!(pop.mu(), 230);
        for (i, m) in pop.members.iter().enumerate() {
            assert_eq!(m.eval_id, i as u64 + 1);
            assert!(problem.bounds.contains(&m.x));
        }
    }

    #[test]
    fn parent_selection_is_unbiased_and_distinct() {
        let suite = make_suite::<f64>(&[2], 1);
        let problem = &suite.problems[0];
        let mut rng = RandomSource::new(5);
        let pop = init_population(problem, 10, &mut rng, |x| {
            let f = problem.evaluate(&x);
            Individual::new(x, vec![f[0], f[1]], 0)
        });
        let all = select_parents(&pop, 10, &mut rng);
        assert_eq!(all.len(), 10);
        let mut sorted = all.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, (0..10).collect::<Vec<_>>());
    }

    #[test]
    fn budget_of_exactly_mu_stops_after_initialization() {
        let suite = make_suite::<f64>(&[5], 1);
        let problem = suite.find("sphere_sphere_n5").unwrap();
        let mut cfg = base_config(problem, SelectionKind::Ba, CrossoverMethod::Spx);
        cfg.max_evals = cfg.mu as u64;
        let record = run(&cfg, problem, &test_ctx(problem)).unwrap();
        assert_eq!(record.meta.iterations, 0);
        assert_eq!(record.meta.total_evals, cfg.mu as u64);
        assert!(record.cumulative_replacements.is_empty());
        assert!(!record.indicator_trace.is_empty());
        assert_eq!(record.indicator_trace.last().unwrap().0, cfg.mu as u64);
    }

    #[test]
    fn evaluation_accounting_is_exact() {
        let suite = make_suite::<f64>(&[5], 1);
        let problem = suite.find("sphere_rosenbrock_n5").unwrap();
        for (selection, method) in [
            (SelectionKind::Ba, CrossoverMethod::Sbx),
            (SelectionKind::Bf, CrossoverMethod::Spx),
            (SelectionKind::Bc, CrossoverMethod::Rex),
        ] {
            let mut cfg = base_config(problem, selection, method);
            cfg.max_evals = 4321;
            let record = run(&cfg, problem, &test_ctx(problem)).unwrap();
            let total = cfg.mu as u64 + cfg.lambda as u64 * record.meta.iterations;
            assert_eq!(record.meta.total_evals, total);
            assert!(total <= cfg.max_evals);
            assert!(cfg.max_evals < total + cfg.lambda as u64);
        }
    }

    #[test]
    fn bc_replacement_count_is_k_times_iterations() {
        let suite = make_suite::<f64>(&[10], 1);
        let problem = suite.find("rastrigin_rastrigin_rot_n10").unwrap();
        let cfg = base_config(problem, SelectionKind::Bc, CrossoverMethod::Spx);
        // full standard budget at n = 10: 10^5 evaluations
        let record = run(&cfg, problem, &test_ctx(problem)).unwrap();
        let mu = cfg.mu as u64; // 230
        let lambda = cfg.lambda as u64; // 100
        let expected_iterations = (100_000 - mu) / lambda; // floor
        assert_eq!(record.meta.iterations, expected_iterations);
        let k = cfg.crossover.k as u64; // n + 1
        let (_, final_count) = *record.cumulative_replacements.last().unwrap();
        assert_eq!(final_count, k * expected_iterations);
        // every iteration contributes exactly k
        for (i, &(_, c)) in record.cumulative_replacements.iter().enumerate() {
            assert_eq!(c, k * (i as u64 + 1));
        }
    }

    #[test]
    fn equal_seeds_give_bit_identical_records() {
        let suite = make_suite::<f64>(&[5], 1);
        let problem = suite.find("ellipsoid_rastrigin_rot_n5").unwrap();
        let mut cfg = base_config(problem, SelectionKind::Bf, CrossoverMethod::Spx);
        cfg.max_evals = 3000;
        cfg.record_population_indicator = true;
        let ctx = test_ctx(problem);
        let a = run(&cfg, problem, &ctx).unwrap();
        let b = run(&cfg, problem, &ctx).unwrap();
        assert_eq!(a.indicator_trace, b.indicator_trace);
        assert_eq!(a.population_trace, b.population_trace);
        assert_eq!(a.cumulative_replacements, b.cumulative_replacements);
        assert_eq!(a.final_archive, b.final_archive);
        assert_eq!(a.meta.total_evals, b.meta.total_evals);
    }

    #[test]
    fn archive_holds_every_nondominated_evaluation() {
        let suite = make_suite::<f64>(&[2], 1);
        let problem = suite.find("sphere_rastrigin_rot_n2").unwrap();
        let mut cfg = base_config(problem, SelectionKind::Bc, CrossoverMethod::Spx);
        cfg.max_evals = 2500;
        let mut log: Vec<(u64, [f64; 2])> = Vec::new();
        let record = run_with_sink(&cfg, problem, &test_ctx(problem), |id, f| {
            log.push((id, f));
        })
        .unwrap();
        assert_eq!(log.len(), record.meta.total_evals as usize);
        // brute-force non-dominated filter over the full evaluation log
        let mut expected: Vec<(u64, [f64; 2])> = Vec::new();
        'outer: for &(id, f) in &log {
            for &(other_id, g) in &log {
                if dominates(&g, &f) || (g == f && other_id < id) {
                    continue 'outer;
                }
            }
            expected.push((id, f));
        }
        expected.sort_by(|a, b| a.1[0].partial_cmp(&b.1[0]).unwrap());
        let got: Vec<(u64, [f64; 2])> =
            record.final_archive.iter().map(|e| (e.eval_id, e.f)).collect();
        assert_eq!(got, expected);
    }

    #[test]
    fn archive_indicator_trace_is_non_increasing() {
        let suite = make_suite::<f64>(&[5], 1);
        let problem = suite.find("rastrigin_rosenbrock_n5").unwrap();
        for selection in SelectionKind::ALL {
            let mut cfg = base_config(problem, selection, CrossoverMethod::Spx);
            cfg.max_evals = 5000;
            let record = run(&cfg, problem, &test_ctx(problem)).unwrap();
            for w in record.indicator_trace.windows(2) {
                assert!(w[0].0 < w[1].0, "eval counts must strictly increase");
                assert!(w[1].1 <= w[0].1 + 1e-12, "indicator worsened");
            }
        }
    }

    #[test]
    fn bc_population_indicator_is_non_monotonic_on_a_multimodal_pair() {
        let suite = make_suite::<f64>(&[5], 1);
        let problem = suite.find("rastrigin_rastrigin_rot_n5").unwrap();
        let mut cfg = base_config(problem, SelectionKind::Bc, CrossoverMethod::Spx);
        cfg.max_evals = 20_000;
        cfg.record_population_indicator = true;
        let record = run(&cfg, problem, &test_ctx(problem)).unwrap();
        let trace = record.population_trace.unwrap();
        let worsened = trace.windows(2).any(|w| w[1].1 > w[0].1 + 1e-12);
        assert!(worsened, "expected at least one strictly worsening sample pair");
    }

    #[test]
    fn tournament_mating_is_rejected_for_multi_parent_crossovers() {
        let suite = make_suite::<f64>(&[5], 1);
        let problem = &suite.problems[0];
        let mut cfg = base_config(problem, SelectionKind::Ba, CrossoverMethod::Spx);
        cfg.mating = MatingScheme::BinaryTournament;
        assert_eq!(cfg.validate(), Err(ConfigError::MatingNeedsSbx));
    }

    #[test]
    fn tournament_mating_runs_and_stays_deterministic() {
        let suite = make_suite::<f64>(&[5], 1);
        let problem = suite.find("sphere_sphere_n5").unwrap();
        let mut cfg = base_config(problem, SelectionKind::Ba, CrossoverMethod::Sbx);
        cfg.mating = MatingScheme::BinaryTournament;
        cfg.lambda = cfg.mu - cfg.mu % 2;
        cfg.max_evals = 2000;
        let ctx = test_ctx(problem);
        let a = run(&cfg, problem, &ctx).unwrap();
        let b = run(&cfg, problem, &ctx).unwrap();
        assert_eq!(a.indicator_trace, b.indicator_trace);
        assert!(a.meta.iterations > 0);
    }

    #[test]
    fn invalid_budget_is_rejected() {
        let suite = make_suite::<f64>(&[5], 1);
        let problem = &suite.problems[0];
        let mut cfg = base_config(problem, SelectionKind::Ba, CrossoverMethod::Spx);
        cfg.max_evals = 10;
        assert!(matches!(cfg.validate(), Err(ConfigError::BudgetBelowInit { .. })));
    }
}
