//! Campaign configuration: a TOML file resolved into the exact grid of
//! (algorithm, problem, seed) cells to execute, plus a content hash over the
//! resolved grid that every output file carries.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Deserialize;
use sha2::{Digest, Sha256};

use emoa::engine::{default_mu, MatingScheme, RunConfig};
use emoa::problems::make_suite;
use emoa::ranking::RankingMethod;
use emoa::selection::SelectionKind;
use emoa::variation::{CrossoverConfig, CrossoverMethod};
use emoa::{BiObjectiveProblem, ProblemSuite, Real};

use crate::error::CliError;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CampaignFile {
    pub campaign: CampaignSection,
    pub suite: SuiteSection,
    #[serde(default)]
    pub algorithm: Vec<AlgorithmSpec>,
    #[serde(default)]
    pub reference: ReferenceSection,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CampaignSection {
    pub name: String,
    #[serde(default)]
    pub out_dir: Option<PathBuf>,
    #[serde(default = "default_seed_base")]
    pub seed_base: u64,
    #[serde(default = "default_num_seeds")]
    pub num_seeds: usize,
    #[serde(default = "default_budget_multiplier")]
    pub budget_multiplier: u64,
    #[serde(default)]
    pub record_population_indicator: bool,
    #[serde(default)]
    pub record_interval: Option<u64>,
    #[serde(default)]
    pub workers: Option<usize>,
    #[serde(default)]
    pub presets: Vec<String>,
    #[serde(default)]
    pub reference_file: Option<PathBuf>,
}

fn default_seed_base() -> u64 {
    1
}
fn default_num_seeds() -> usize {
    15
}
fn default_budget_multiplier() -> u64 {
    10_000
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteSection {
    #[serde(default = "default_suite_seed")]
    pub seed: u64,
    pub dims: Vec<usize>,
    /// Pair names or full problem ids; empty means the whole suite.
    #[serde(default)]
    pub problems: Vec<String>,
}

fn default_suite_seed() -> u64 {
    1
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgorithmSpec {
    #[serde(default)]
    pub name: Option<String>,
    pub selection: String,
    pub crossover: String,
    pub ranking: String,
    #[serde(default)]
    pub mating: Option<String>,
    #[serde(default)]
    pub lambda_multiplier: Option<usize>,
    #[serde(default)]
    pub mu: Option<usize>,
    #[serde(default)]
    pub kappa: Option<f64>,
    #[serde(default)]
    pub eta_c: Option<f64>,
    #[serde(default)]
    pub eta_m: Option<f64>,
    #[serde(default)]
    pub p_c: Option<f64>,
    #[serde(default)]
    pub p_m: Option<f64>,
    #[serde(default)]
    pub alpha: Option<f64>,
    #[serde(default)]
    pub sigma_zeta_sq: Option<f64>,
    #[serde(default)]
    pub sigma_eta_sq: Option<f64>,
    #[serde(default)]
    pub epsilon: Option<f64>,
    #[serde(default)]
    pub sigma_sq: Option<f64>,
}

/// Settings for `emoa reference`: which runs feed the reference campaign.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReferenceSection {
    #[serde(default = "default_reference_budget")]
    pub budget_multiplier: u64,
    #[serde(default = "default_reference_seeds")]
    pub num_seeds: usize,
    #[serde(default = "default_reference_seed_base")]
    pub seed_base: u64,
}

fn default_reference_budget() -> u64 {
    100_000
}
fn default_reference_seeds() -> usize {
    15
}
fn default_reference_seed_base() -> u64 {
    9_000
}

impl Default for ReferenceSection {
    fn default() -> Self {
        Self {
            budget_multiplier: default_reference_budget(),
            num_seeds: default_reference_seeds(),
            seed_base: default_reference_seed_base(),
        }
    }
}

/// One fully resolved algorithm cell of the grid.
#[derive(Debug, Clone)]
pub struct ResolvedAlgorithm {
    pub name: String,
    pub selection: SelectionKind,
    pub crossover: CrossoverMethod,
    pub ranking: RankingMethod,
    pub mating: MatingScheme,
    /// λ = multiplier · n under shared-parents mating.
    pub lambda_multiplier: usize,
    /// Generational presets use λ = μ (rounded down to even).
    pub lambda_equals_mu: bool,
    pub mu_override: Option<usize>,
    pub kappa: f64,
    pub overrides: OperatorOverrides,
}

#[derive(Debug, Clone, Default)]
pub struct OperatorOverrides {
    pub eta_c: Option<f64>,
    pub eta_m: Option<f64>,
    pub p_c: Option<f64>,
    pub p_m: Option<f64>,
    pub alpha: Option<f64>,
    pub sigma_zeta_sq: Option<f64>,
    pub sigma_eta_sq: Option<f64>,
    pub epsilon: Option<f64>,
    pub sigma_sq: Option<f64>,
}

impl ResolvedAlgorithm {
    pub fn simple(
        selection: SelectionKind,
        crossover: CrossoverMethod,
        ranking: RankingMethod,
    ) -> Self {
        Self {
            name: format!("{}-{}-{}", selection.name(), crossover.name(), ranking.name()),
            selection,
            crossover,
            ranking,
            mating: MatingScheme::SharedParents,
            lambda_multiplier: 10,
            lambda_equals_mu: false,
            mu_override: None,
            kappa: 0.05,
            overrides: OperatorOverrides::default(),
        }
    }

    /// Generational preset mimicking one of the original EMOAs: binary
    /// tournament mating, SBX+PM, λ = μ truncation under BA. Not a faithful
    /// reimplementation; deviations are documented in the preset notes the
    /// runner writes next to the manifest.
    pub fn original_preset(name: &str, ranking: RankingMethod) -> Self {
        Self {
            name: name.to_string(),
            selection: SelectionKind::Ba,
            crossover: CrossoverMethod::Sbx,
            ranking,
            mating: MatingScheme::BinaryTournament,
            lambda_multiplier: 10,
            lambda_equals_mu: true,
            mu_override: None,
            kappa: 0.05,
            overrides: OperatorOverrides::default(),
        }
    }

    pub fn mu(&self, n: usize) -> usize {
        self.mu_override.unwrap_or_else(|| default_mu(n))
    }

    pub fn lambda(&self, n: usize) -> usize {
        if self.lambda_equals_mu {
            let mu = self.mu(n);
            mu - mu % 2
        } else {
            self.lambda_multiplier * n
        }
    }

    /// Concrete engine configuration for one (problem, seed) cell.
    pub fn run_config(
        &self,
        problem: &BiObjectiveProblem,
        seed: u64,
        budget_multiplier: u64,
        record_population_indicator: bool,
        record_interval: Option<u64>,
    ) -> RunConfig<Real> {
        let n = problem.n;
        let mut crossover = CrossoverConfig::for_problem(self.crossover, n);
        let o = &self.overrides;
        if let Some(v) = o.eta_c {
            crossover.eta_c = v;
        }
        if let Some(v) = o.eta_m {
            crossover.eta_m = v;
        }
        if let Some(v) = o.p_c {
            crossover.p_c = v;
        }
        if let Some(v) = o.p_m {
            crossover.p_m = v;
        }
        if let Some(v) = o.alpha {
            crossover.alpha = v;
        }
        if let Some(v) = o.sigma_zeta_sq {
            crossover.sigma_zeta_sq = v;
        }
        if let Some(v) = o.sigma_eta_sq {
            crossover.sigma_eta_sq = v;
        }
        if let Some(v) = o.epsilon {
            crossover.epsilon = v;
        }
        if let Some(v) = o.sigma_sq {
            crossover.sigma_sq = v;
        }
        let lambda = self.lambda(n);
        RunConfig {
            selection: self.selection,
            crossover,
            ranking: self.ranking,
            mating: self.mating,
            mu: self.mu(n),
            lambda,
            max_evals: budget_multiplier * n as u64,
            seed,
            problem_id: problem.id.clone(),
            kappa: self.kappa,
            record_population_indicator,
            record_interval: record_interval.unwrap_or(lambda as u64),
        }
    }

    fn manifest_line(&self) -> String {
        format!(
            "algorithm {} selection={} crossover={} ranking={} mating={:?} lambda_mult={} lambda_eq_mu={} mu={:?} kappa={} overrides={:?}",
            self.name,
            self.selection.name(),
            self.crossover.name(),
            self.ranking.name(),
            self.mating,
            self.lambda_multiplier,
            self.lambda_equals_mu,
            self.mu_override,
            self.kappa,
            self.overrides
        )
    }
}

/// Expand a named preset into algorithm cells.
pub fn expand_preset(name: &str) -> Result<Vec<ResolvedAlgorithm>, CliError> {
    match name {
        // the four algorithms compared in the headline experiment
        "paper-core" => Ok(vec![
            ResolvedAlgorithm::original_preset("NSGA-II", RankingMethod::Ns),
            ResolvedAlgorithm::simple(SelectionKind::Ba, CrossoverMethod::Spx, RankingMethod::Ns),
            ResolvedAlgorithm::simple(SelectionKind::Bf, CrossoverMethod::Spx, RankingMethod::Ns),
            ResolvedAlgorithm::simple(SelectionKind::Bc, CrossoverMethod::Spx, RankingMethod::Ns),
        ]),
        "originals" => Ok(vec![
            ResolvedAlgorithm::original_preset("NSGA-II", RankingMethod::Ns),
            ResolvedAlgorithm::original_preset("SPEA2", RankingMethod::Sp),
            ResolvedAlgorithm::original_preset("SMS-EMOA", RankingMethod::Sm),
            ResolvedAlgorithm::original_preset("IBEA", RankingMethod::Ib),
        ]),
        "lambda-sweep" => Ok([1usize, 3, 5, 8, 10]
            .into_iter()
            .map(|m| {
                let mut alg = ResolvedAlgorithm::simple(
                    SelectionKind::Ba,
                    CrossoverMethod::Spx,
                    RankingMethod::Ns,
                );
                alg.lambda_multiplier = m;
                alg.name = format!("BA-SPX-NS-l{m}n");
                alg
            })
            .collect()),
        other => Err(CliError::Config(format!("unknown preset: {other}"))),
    }
}

fn resolve_spec(spec: &AlgorithmSpec) -> Result<ResolvedAlgorithm, CliError> {
    let selection = SelectionKind::from_str(&spec.selection)?;
    let crossover = CrossoverMethod::from_str(&spec.crossover)?;
    let ranking = RankingMethod::from_str(&spec.ranking)?;
    let mating = match spec.mating.as_deref() {
        None | Some("shared") => MatingScheme::SharedParents,
        Some("tournament") => MatingScheme::BinaryTournament,
        Some(other) => {
            return Err(CliError::Config(format!(
                "key mating: expected \"shared\" or \"tournament\", got {other:?}"
            )))
        }
    };
    let lambda_multiplier = spec.lambda_multiplier.unwrap_or(10);
    let mut name = spec.name.clone().unwrap_or_else(|| {
        let base = format!("{}-{}-{}", selection.name(), crossover.name(), ranking.name());
        if lambda_multiplier != 10 {
            format!("{base}-l{lambda_multiplier}n")
        } else {
            base
        }
    });
    name.retain(|c| !c.is_whitespace());
    Ok(ResolvedAlgorithm {
        name,
        selection,
        crossover,
        ranking,
        mating,
        lambda_multiplier,
        lambda_equals_mu: false,
        mu_override: spec.mu,
        kappa: spec.kappa.unwrap_or(0.05),
        overrides: OperatorOverrides {
            eta_c: spec.eta_c,
            eta_m: spec.eta_m,
            p_c: spec.p_c,
            p_m: spec.p_m,
            alpha: spec.alpha,
            sigma_zeta_sq: spec.sigma_zeta_sq,
            sigma_eta_sq: spec.sigma_eta_sq,
            epsilon: spec.epsilon,
            sigma_sq: spec.sigma_sq,
        },
    })
}

/// A fully resolved campaign.
#[derive(Debug)]
pub struct Campaign {
    pub name: String,
    pub out_dir: PathBuf,
    pub suite: ProblemSuite,
    /// Indices into `suite.problems` selected for this campaign.
    pub problem_indices: Vec<usize>,
    pub algorithms: Vec<ResolvedAlgorithm>,
    pub seeds: Vec<u64>,
    pub budget_multiplier: u64,
    pub record_population_indicator: bool,
    pub record_interval: Option<u64>,
    pub workers: Option<usize>,
    pub reference_path: PathBuf,
    pub reference: ReferenceSection,
    pub manifest: String,
    pub manifest_hash: String,
}

impl Campaign {
    pub fn problems(&self) -> impl Iterator<Item = &BiObjectiveProblem> {
        self.problem_indices.iter().map(|&i| &self.suite.problems[i])
    }
}

pub struct CliOverrides {
    pub out: Option<PathBuf>,
    pub workers: Option<usize>,
    pub seed_base: Option<u64>,
}

/// Parse and resolve a campaign file. The manifest hash covers the semantic
/// content (suite, grid, seeds, budget) but not the output location, so
/// re-running the same campaign elsewhere produces byte-identical traces.
pub fn load_campaign(path: &Path, overrides: &CliOverrides) -> Result<Campaign, CliError> {
    let text = std::fs::read_to_string(path).map_err(CliError::io(path))?;
    let file: CampaignFile = toml::from_str(&text)
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;

    if file.suite.dims.is_empty() {
        return Err(CliError::Config("key suite.dims: must list at least one dimension".into()));
    }
    if file.suite.dims.iter().any(|&n| n < 2) {
        return Err(CliError::Config("key suite.dims: every dimension must be >= 2".into()));
    }
    let seed_base = overrides.seed_base.unwrap_or(file.campaign.seed_base);
    if file.campaign.num_seeds == 0 {
        return Err(CliError::Config("key campaign.num_seeds: must be positive".into()));
    }
    let seeds: Vec<u64> = (0..file.campaign.num_seeds as u64).map(|i| seed_base + i).collect();

    let mut algorithms: Vec<ResolvedAlgorithm> = Vec::new();
    for preset in &file.campaign.presets {
        algorithms.extend(expand_preset(preset)?);
    }
    for spec in &file.algorithm {
        algorithms.push(resolve_spec(spec)?);
    }
    if algorithms.is_empty() {
        return Err(CliError::Config(
            "key algorithm: the grid is empty; list [[algorithm]] entries or campaign.presets"
                .into(),
        ));
    }
    let mut names = BTreeSet::new();
    for a in &algorithms {
        if !names.insert(a.name.clone()) {
            return Err(CliError::Config(format!("duplicate algorithm name {}", a.name)));
        }
    }

    let suite = make_suite::<Real>(&file.suite.dims, file.suite.seed);
    let problem_indices: Vec<usize> = if file.suite.problems.is_empty() {
        (0..suite.problems.len()).collect()
    } else {
        let mut idx = Vec::new();
        for wanted in &file.suite.problems {
            let matches: Vec<usize> = suite
                .problems
                .iter()
                .enumerate()
                .filter(|(_, p)| p.id == *wanted || p.pair_name == *wanted)
                .map(|(i, _)| i)
                .collect();
            if matches.is_empty() {
                return Err(CliError::UnknownProblem(wanted.clone()));
            }
            idx.extend(matches);
        }
        idx.sort_unstable();
        idx.dedup();
        idx
    };

    let out_dir = overrides
        .out
        .clone()
        .or_else(|| file.campaign.out_dir.clone())
        .ok_or_else(|| {
            CliError::Config("key campaign.out_dir: missing (or pass --out)".into())
        })?;
    let reference_path = file
        .campaign
        .reference_file
        .clone()
        .unwrap_or_else(|| out_dir.join("reference.csv"));

    let mut manifest = String::new();
    let _ = writeln!(manifest, "campaign {}", file.campaign.name);
    let _ = writeln!(manifest, "suite seed={} dims={:?}", file.suite.seed, file.suite.dims);
    for &i in &problem_indices {
        let p = &suite.problems[i];
        let _ = writeln!(manifest, "problem {} instance_seed={}", p.id, p.instance_seed);
    }
    for a in &algorithms {
        let _ = writeln!(manifest, "{}", a.manifest_line());
    }
    let _ = writeln!(manifest, "seeds {seeds:?}");
    let _ = writeln!(manifest, "budget_multiplier {}", file.campaign.budget_multiplier);
    let _ = writeln!(
        manifest,
        "record_population_indicator {} record_interval {:?}",
        file.campaign.record_population_indicator, file.campaign.record_interval
    );
    let hash = Sha256::digest(manifest.as_bytes());
    let manifest_hash: String = hash[..8].iter().map(|b| format!("{b:02x}")).collect();

    Ok(Campaign {
        name: file.campaign.name,
        out_dir,
        suite,
        problem_indices,
        algorithms,
        seeds,
        budget_multiplier: file.campaign.budget_multiplier,
        record_population_indicator: file.campaign.record_population_indicator,
        record_interval: file.campaign.record_interval,
        workers: overrides.workers.or(file.campaign.workers),
        reference_path,
        reference: file.reference,
        manifest,
        manifest_hash,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write_config(dir: &Path, body: &str) -> PathBuf {
        let path = dir.join("campaign.toml");
        std::fs::write(&path, body).unwrap();
        path
    }

    fn no_overrides() -> CliOverrides {
        CliOverrides { out: Some(PathBuf::from("/tmp/x")), workers: None, seed_base: None }
    }

    #[test]
    fn minimal_config_resolves() {
        let dir = tempfile::tempdir().unwrap();
        let path = write_config(
            dir.path(),
            r#"
[campaign]
name = "t"
num_seeds = 2

[suite]
seed = 1
dims = [2]
problems = ["sphere_sphere"]

[[algorithm]]
selection = "BC"
crossover = "SPX"
ranking = "NS"
"#,
        );
        let c = load_campaign(&path, &no_overrides()).unwrap();
        assert_eq!(c.algorithms.len(), 1);
        assert_eq!(c.algorithms[0].name, "BC-SPX-NS");
        assert_eq!(c.seeds, vec![1, 2]);
        assert_eq!(c.problem_indices.len(), 1);
        assert_eq!(c.manifest_hash.len(), 16);
    }

    #[test]
    fn unknown_keys_are_named() {
        let dir = tempfile::tempdir().unwrap();
        let path = write_config(
            dir.path(),
            r#"
[campaign]
name = "t"
bogus_key = 3

[suite]
dims = [2]
"#,
        );
        let err = load_campaign(&path, &no_overrides()).unwrap_err();
        let msg = format!("{err}");
        assert!(msg.contains("bogus_key"), "diagnostic must name the key: {msg}");
        assert_eq!(err.code(), "E_CONFIG");
    }

    #[test]
    fn paper_core_preset_expands_to_the_four_headline_algorithms() {
        let algs = expand_preset("paper-core").unwrap();
        let names: Vec<&str> = algs.iter().map(|a| a.name.as_str()).collect();
        assert_eq!(names, vec!["NSGA-II", "BA-SPX-NS", "BF-SPX-NS", "BC-SPX-NS"]);
        assert_eq!(algs[0].mating, MatingScheme::BinaryTournament);
        assert!(algs[0].lambda_equals_mu);
    }

    #[test]
    fn lambda_sweep_preset_has_five_brood_sizes() {
        let algs = expand_preset("lambda-sweep").unwrap();
        let lambdas: Vec<usize> = algs.iter().map(|a| a.lambda(10)).collect();
        assert_eq!(lambdas, vec![10, 30, 50, 80, 100]);
        assert!(algs.iter().all(|a| a.name.starts_with("BA-SPX-NS-l")));
    }

    #[test]
    fn unknown_preset_is_rejected() {
        assert!(expand_preset("no-such-preset").is_err());
    }

    #[test]
    fn empty_grid_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = write_config(
            dir.path(),
            r#"
[campaign]
name = "t"

[suite]
dims = [2]
"#,
        );
        let err = load_campaign(&path, &no_overrides()).unwrap_err();
        assert!(format!("{err}").contains("algorithm"));
    }

    #[test]
    fn manifest_hash_ignores_out_dir() {
        let dir = tempfile::tempdir().unwrap();
        let body = r#"
[campaign]
name = "t"

[suite]
dims = [2]

[[algorithm]]
selection = "BA"
crossover = "SBX"
ranking = "NS"
"#;
        let path = write_config(dir.path(), body);
        let a = load_campaign(
            &path,
            &CliOverrides { out: Some("/tmp/a".into()), workers: None, seed_base: None },
        )
        .unwrap();
        let b = load_campaign(
            &path,
            &CliOverrides { out: Some("/tmp/b".into()), workers: None, seed_base: None },
        )
        .unwrap();
        assert_eq!(a.manifest_hash, b.manifest_hash);
    }

    #[test]
    fn preset_lambda_equals_mu_is_even() {
        let alg = ResolvedAlgorithm::original_preset("NSGA-II", RankingMethod::Ns);
        // mu(20) = 299, so lambda must round down to 298
        assert_eq!(alg.mu(20), 299);
        assert_eq!(alg.lambda(20), 298);
    }
}
