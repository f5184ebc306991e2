//! Campaign execution: the (algorithm × problem × seed) grid runner with
//! resume support, and the reference campaign that produces the per-problem
//! normalization values.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;

use emoa::engine::{run, MatingScheme, RunConfig, RunRecord};
use emoa::indicators::{hypervolume_2d, Archive, IndicatorContext};
use emoa::{BiObjectiveProblem, Real};

use crate::config::{expand_preset, Campaign, ResolvedAlgorithm};
use crate::error::CliError;

/// Smallest admissible reference_hv; keeps the stored value inside (0, 1]
/// even for a reference campaign that never reached the region of interest.
const REFERENCE_HV_FLOOR: f64 = 1e-6;

#[derive(Debug)]
pub struct RunOutcome {
    pub executed: usize,
    pub skipped: usize,
    pub evaluations: u64,
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).map_err(CliError::io(dir))?;
    }
    let mut f = std::fs::File::create(path).map_err(CliError::io(path))?;
    f.write_all(contents.as_bytes()).map_err(CliError::io(path))?;
    Ok(())
}

fn provenance(campaign: &Campaign) -> String {
    format!("# campaign={}\n", campaign.manifest_hash)
}

pub fn cell_dir(out_dir: &Path, algo: &str, problem_id: &str, seed: u64) -> PathBuf {
    out_dir.join("runs").join(algo).join(problem_id).join(format!("seed{seed}"))
}

#[derive(Serialize)]
struct MetaFile<'a> {
    campaign: &'a str,
    algo: &'a str,
    problem: &'a str,
    n: usize,
    k: usize,
    seed: u64,
    rng: &'a str,
    total_evals: u64,
    iterations: u64,
    wall_time_s: f64,
    config: &'a RunConfig<Real>,
}

fn write_record(
    dir: &Path,
    campaign: &Campaign,
    algo: &str,
    record: &RunRecord<Real>,
) -> Result<(), CliError> {
    let head = provenance(campaign);

    let mut indicator = format!("{head}evals,icoco\n");
    for (e, v) in &record.indicator_trace {
        let _ = writeln!(indicator, "{e},{v}");
    }
    write_file(&dir.join("indicator.csv"), &indicator)?;

    let mut replacements = format!("{head}evals,replaced_cumulative\n");
    for (e, c) in &record.cumulative_replacements {
        let _ = writeln!(replacements, "{e},{c}");
    }
    write_file(&dir.join("replacements.csv"), &replacements)?;

    if let Some(trace) = &record.population_trace {
        let mut population = format!("{head}evals,icoco_pop\n");
        for (e, v) in trace {
            let _ = writeln!(population, "{e},{v}");
        }
        write_file(&dir.join("population.csv"), &population)?;
    }

    let mut archive = format!("{head}f1,f2,eval_id\n");
    for entry in &record.final_archive {
        let _ = writeln!(archive, "{},{},{}", entry.f[0], entry.f[1], entry.eval_id);
    }
    write_file(&dir.join("archive.csv"), &archive)?;

    let meta = MetaFile {
        campaign: &campaign.manifest_hash,
        algo,
        problem: &record.meta.config.problem_id,
        n: record.meta.n,
        k: record.meta.k,
        seed: record.meta.config.seed,
        rng: record.meta.rng_algorithm,
        total_evals: record.meta.total_evals,
        iterations: record.meta.iterations,
        wall_time_s: record.meta.wall_time_s,
        config: &record.meta.config,
    };
    let meta_text =
        toml::to_string(&meta).map_err(|e| CliError::Config(format!("meta encoding: {e}")))?;
    write_file(&dir.join("meta.toml"), &meta_text)?;
    // marker last: a cell is complete only once all files are on disk
    write_file(&dir.join("DONE"), "")?;
    Ok(())
}

fn write_suite_csv(campaign: &Campaign) -> Result<(), CliError> {
    let mut out = format!("{}problem_id,base_pair,n,instance_seed,nadir1,nadir2\n", provenance(campaign));
    for p in campaign.problems() {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            p.id, p.pair_name, p.n, p.instance_seed, p.nadir[0], p.nadir[1]
        );
    }
    write_file(&campaign.out_dir.join("suite.csv"), &out)
}

const PRESET_NOTES: &str = "\
The NSGA-II / SPEA2 / SMS-EMOA / IBEA entries are generational presets of\n\
this framework, not faithful reimplementations of the original publications:\n\
- mating: binary tournament on the configured ranking, parents drawn per pair\n\
- variation: SBX + polynomial mutation (p_c = 0.9, eta_c = 20, p_m = 1/n, eta_m = 20)\n\
- environmental selection: best-mu truncation over parents and children (BA)\n\
- brood size: lambda = mu rounded down to even, instead of steady-state\n\
  (SMS-EMOA) or archive-based (SPEA2, IBEA) reproduction\n";

fn build_pool(workers: Option<usize>) -> Result<rayon::ThreadPool, CliError> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Config(format!("worker pool: {e}")))
}

/// Execute every cell of the campaign grid, skipping cells whose outputs are
/// already complete unless `force` is set.
pub fn cmd_run(campaign: &Campaign, force: bool) -> Result<RunOutcome, CliError> {
    let reference = read_reference(&campaign.reference_path)?;
    for p in campaign.problems() {
        let row = reference
            .get(&p.id)
            .ok_or_else(|| CliError::MissingReferenceRow(p.id.clone()))?;
        let drift = (row.nadir[0] - p.nadir[0]).abs() + (row.nadir[1] - p.nadir[1]).abs();
        if row.n != p.n || drift > 1e-9 * (1.0 + row.nadir[0].abs() + row.nadir[1].abs()) {
            return Err(CliError::Config(format!(
                "reference file was produced for a different suite (problem {})",
                p.id
            )));
        }
    }

    std::fs::create_dir_all(&campaign.out_dir).map_err(CliError::io(&campaign.out_dir))?;
    write_file(
        &campaign.out_dir.join("manifest.txt"),
        &format!("{}{}", provenance(campaign), campaign.manifest),
    )?;
    write_suite_csv(campaign)?;
    if campaign.algorithms.iter().any(|a| a.mating == MatingScheme::BinaryTournament) {
        write_file(
            &campaign.out_dir.join("preset_notes.txt"),
            &format!("{}{PRESET_NOTES}", provenance(campaign)),
        )?;
    }

    struct Cell<'a> {
        algorithm: &'a ResolvedAlgorithm,
        problem: &'a BiObjectiveProblem,
        ctx: IndicatorContext<Real>,
        seed: u64,
    }
    let mut cells = Vec::new();
    for algorithm in &campaign.algorithms {
        for problem in campaign.problems() {
            let row = &reference[&problem.id];
            let ctx = IndicatorContext::new(row.ideal, row.nadir, row.reference_hv);
            for &seed in &campaign.seeds {
                cells.push(Cell { algorithm, problem, ctx, seed });
            }
        }
    }

    let pool = build_pool(campaign.workers)?;
    let results: Vec<Result<Option<u64>, CliError>> = pool.install(|| {
        cells
            .par_iter()
            .map(|cell| {
                let dir =
                    cell_dir(&campaign.out_dir, &cell.algorithm.name, &cell.problem.id, cell.seed);
                if !force && dir.join("DONE").exists() {
                    return Ok(None);
                }
                let cfg = cell.algorithm.run_config(
                    cell.problem,
                    cell.seed,
                    campaign.budget_multiplier,
                    campaign.record_population_indicator,
                    campaign.record_interval,
                );
                let record = run(&cfg, cell.problem, &cell.ctx)?;
                write_record(&dir, campaign, &cell.algorithm.name, &record)?;
                Ok(Some(record.meta.total_evals))
            })
            .collect()
    });

    let mut outcome = RunOutcome { executed: 0, skipped: 0, evaluations: 0 };
    for r in results {
        match r? {
            Some(evals) => {
                outcome.executed += 1;
                outcome.evaluations += evals;
            }
            None => outcome.skipped += 1,
        }
    }
    Ok(outcome)
}

#[derive(Debug, Clone)]
pub struct ReferenceRow {
    pub problem_id: String,
    pub n: usize,
    pub ideal: [Real; 2],
    pub nadir: [Real; 2],
    pub reference_hv: Real,
    pub campaign_seed: u64,
}

pub fn read_reference(path: &Path) -> Result<BTreeMap<String, ReferenceRow>, CliError> {
    if !path.exists() {
        return Err(CliError::MissingReference(path.to_path_buf()));
    }
    let text = std::fs::read_to_string(path).map_err(CliError::io(path))?;
    let mut rows = BTreeMap::new();
    for line in text.lines() {
        if line.starts_with('#') || line.starts_with("problem_id") || line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 8 {
            return Err(CliError::Config(format!(
                "{}: malformed reference row: {line}",
                path.display()
            )));
        }
        let parse = |i: usize| -> Result<f64, CliError> {
            fields[i].parse().map_err(|_| {
                CliError::Config(format!("{}: bad number in reference row: {line}", path.display()))
            })
        };
        rows.insert(
            fields[0].to_string(),
            ReferenceRow {
                problem_id: fields[0].to_string(),
                n: parse(1)? as usize,
                ideal: [parse(2)?, parse(3)?],
                nadir: [parse(4)?, parse(5)?],
                reference_hv: parse(6)?,
                campaign_seed: parse(7)? as u64,
            },
        );
    }
    Ok(rows)
}

/// Run the reference campaign (the four paper-core algorithms over the
/// configured reference seeds and budget), pool every archive, and store one
/// normalized-hypervolume reference value per problem.
pub fn cmd_reference(
    campaign: &Campaign,
    out: Option<&Path>,
    budget_multiplier: Option<u64>,
    num_seeds: Option<usize>,
) -> Result<PathBuf, CliError> {
    let path = out.unwrap_or(&campaign.reference_path).to_path_buf();
    let budget = budget_multiplier.unwrap_or(campaign.reference.budget_multiplier);
    let seeds: Vec<u64> = (0..num_seeds.unwrap_or(campaign.reference.num_seeds) as u64)
        .map(|i| campaign.reference.seed_base + i)
        .collect();
    let algorithms = expand_preset("paper-core").expect("built-in preset");

    let problems: Vec<&BiObjectiveProblem> = campaign.problems().collect();
    let pool = build_pool(campaign.workers)?;
    let mut lines = Vec::with_capacity(problems.len());
    for problem in problems {
        // campaign runs are normalized by this same box later on
        let placeholder = IndicatorContext::new(problem.ideal, problem.nadir, 1.0);
        let archives: Vec<Result<Vec<[Real; 2]>, CliError>> = pool.install(|| {
            algorithms
                .par_iter()
                .flat_map(|alg| seeds.par_iter().map(move |&s| (alg, s)))
                .map(|(alg, seed)| {
                    let cfg = alg.run_config(problem, seed, budget, false, None);
                    let record = run(&cfg, problem, &placeholder)?;
                    Ok(record.final_archive.iter().map(|e| e.f).collect())
                })
                .collect()
        });
        let mut union: Archive<Real> = Archive::new();
        let mut next_id = 0u64;
        for archive in archives {
            for f in archive? {
                next_id += 1;
                union.insert(f, next_id);
            }
        }
        let normalized: Vec<[Real; 2]> = union
            .entries()
            .iter()
            .map(|e| {
                [
                    (e.f[0] - problem.ideal[0]) / (problem.nadir[0] - problem.ideal[0]),
                    (e.f[1] - problem.ideal[1]) / (problem.nadir[1] - problem.ideal[1]),
                ]
            })
            .collect();
        let hv = hypervolume_2d(&normalized, [1.0, 1.0]);
        let reference_hv = hv.clamp(REFERENCE_HV_FLOOR, 1.0);
        lines.push(format!(
            "{},{},{},{},{},{},{},{}",
            problem.id,
            problem.n,
            problem.ideal[0],
            problem.ideal[1],
            problem.nadir[0],
            problem.nadir[1],
            reference_hv,
            campaign.reference.seed_base
        ));
    }

    let mut text = format!(
        "{}problem_id,n,ideal1,ideal2,nadir1,nadir2,reference_hv,campaign_seed\n",
        provenance(campaign)
    );
    for line in lines {
        let _ = writeln!(text, "{line}");
    }
    write_file(&path, &text)?;
    Ok(path)
}
