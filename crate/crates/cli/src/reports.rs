//! Aggregation over a finished campaign directory: ECDF runtime profiles and
//! the per-run diagnostic plots (population indicator, cumulative
//! replacements) with the archive-monotonicity check.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use emoa::indicators::{default_targets, ecdf};
use emoa::Real;

use crate::error::CliError;
use crate::svg::{render, Plot, Series, PALETTE};

#[derive(Debug)]
pub struct RunData {
    pub algo: String,
    pub problem: String,
    pub seed: u64,
    pub n: usize,
    pub k: usize,
    pub dir: PathBuf,
    pub indicator: Vec<(u64, Real)>,
    pub replacements: Vec<(u64, u64)>,
    pub population: Option<Vec<(u64, Real)>>,
}

fn parse_trace(path: &Path) -> Result<Vec<(u64, f64)>, CliError> {
    let text = std::fs::read_to_string(path).map_err(CliError::io(path))?;
    let mut out = Vec::new();
    for line in text.lines().filter(|l| !l.starts_with('#') && !l.trim().is_empty()) {
        let mut fields = line.split(',');
        let (a, b) = (fields.next(), fields.next());
        if let (Some(a), Some(b)) = (a, b) {
            if let (Ok(e), Ok(v)) = (a.parse::<u64>(), b.parse::<f64>()) {
                out.push((e, v));
            }
        }
    }
    Ok(out)
}

fn parse_counter_trace(path: &Path) -> Result<Vec<(u64, u64)>, CliError> {
    Ok(parse_trace(path)?.into_iter().map(|(e, v)| (e, v as u64)).collect())
}

/// Read the campaign hash out of manifest.txt (first line: `# campaign=..`).
pub fn campaign_hash(campaign_dir: &Path) -> Result<String, CliError> {
    let path = campaign_dir.join("manifest.txt");
    let text = std::fs::read_to_string(&path).map_err(CliError::io(&path))?;
    Ok(text
        .lines()
        .next()
        .and_then(|l| l.strip_prefix("# campaign="))
        .unwrap_or("unknown")
        .to_string())
}

/// Load every completed run below `<campaign>/runs`, sorted by
/// (algo, problem, seed) for deterministic aggregation.
pub fn discover_runs(campaign_dir: &Path, with_aux: bool) -> Result<Vec<RunData>, CliError> {
    let runs_dir = campaign_dir.join("runs");
    if !runs_dir.is_dir() {
        return Err(CliError::EmptySelection(format!(
            "no runs directory under {}",
            campaign_dir.display()
        )));
    }
    let mut out = Vec::new();
    let list_dirs = |p: &Path| -> Result<Vec<PathBuf>, CliError> {
        let mut v: Vec<PathBuf> = std::fs::read_dir(p)
            .map_err(CliError::io(p))?
            .filter_map(|e| e.ok())
            .map(|e| e.path())
            .filter(|p| p.is_dir())
            .collect();
        v.sort();
        Ok(v)
    };
    for algo_dir in list_dirs(&runs_dir)? {
        let algo = algo_dir.file_name().unwrap().to_string_lossy().to_string();
        for problem_dir in list_dirs(&algo_dir)? {
            let problem = problem_dir.file_name().unwrap().to_string_lossy().to_string();
            for seed_dir in list_dirs(&problem_dir)? {
                let seed_name = seed_dir.file_name().unwrap().to_string_lossy().to_string();
                let Some(seed) = seed_name.strip_prefix("seed").and_then(|s| s.parse().ok())
                else {
                    continue;
                };
                if !seed_dir.join("DONE").exists() {
                    continue;
                }
                let meta_path = seed_dir.join("meta.toml");
                let meta_text =
                    std::fs::read_to_string(&meta_path).map_err(CliError::io(&meta_path))?;
                let meta: toml::Table = meta_text
                    .parse()
                    .map_err(|e| CliError::Config(format!("{}: {e}", meta_path.display())))?;
                let n = meta.get("n").and_then(|v| v.as_integer()).unwrap_or(0) as usize;
                let k = meta.get("k").and_then(|v| v.as_integer()).unwrap_or(0) as usize;
                let indicator = parse_trace(&seed_dir.join("indicator.csv"))?;
                let (replacements, population) = if with_aux {
                    let replacements = parse_counter_trace(&seed_dir.join("replacements.csv"))?;
                    let pop_path = seed_dir.join("population.csv");
                    let population =
                        if pop_path.exists() { Some(parse_trace(&pop_path)?) } else { None };
                    (replacements, population)
                } else {
                    (Vec::new(), None)
                };
                out.push(RunData {
                    algo: algo.clone(),
                    problem: problem.clone(),
                    seed,
                    n,
                    k,
                    dir: seed_dir,
                    indicator,
                    replacements,
                    population,
                });
            }
        }
    }
    out.sort_by(|a, b| {
        (&a.algo, &a.problem, a.seed).cmp(&(&b.algo, &b.problem, b.seed))
    });
    Ok(out)
}

fn sanitize(s: &str) -> String {
    s.chars().map(|c| if c.is_alphanumeric() || c == '-' || c == '_' { c } else { '_' }).collect()
}

/// ECDF aggregation: one curve per algorithm over all selected
/// (problem, seed) runs at a single dimension. Returns (csv, svg) paths.
pub fn cmd_ecdf(
    campaign_dir: &Path,
    problem_filter: Option<&str>,
    dim: Option<usize>,
    out_dir: Option<&Path>,
) -> Result<(PathBuf, PathBuf), CliError> {
    let hash = campaign_hash(campaign_dir)?;
    let mut runs = discover_runs(campaign_dir, false)?;
    if let Some(filter) = problem_filter {
        runs.retain(|r| r.problem == filter || r.problem.starts_with(&format!("{filter}_n")));
        if runs.is_empty() {
            return Err(CliError::UnknownProblem(filter.to_string()));
        }
    }
    if let Some(n) = dim {
        runs.retain(|r| r.n == n);
    }
    if runs.is_empty() {
        return Err(CliError::EmptySelection("no runs match the requested scope".into()));
    }
    let dims: BTreeSet<usize> = runs.iter().map(|r| r.n).collect();
    if dims.len() > 1 {
        return Err(CliError::MixedDimensions(dims.into_iter().collect()));
    }
    let n = *dims.iter().next().unwrap();

    let targets: Vec<Real> = default_targets();
    let mut by_algo: BTreeMap<&str, Vec<&[(u64, Real)]>> = BTreeMap::new();
    for r in &runs {
        by_algo.entry(&r.algo).or_default().push(r.indicator.as_slice());
    }
    let curves: Vec<(String, emoa::indicators::EcdfCurve)> = by_algo
        .iter()
        .map(|(name, traces)| (name.to_string(), ecdf(traces, &targets, n)))
        .collect();

    // shared abscissa: the grids are prefixes of one another by construction
    let longest = curves
        .iter()
        .max_by_key(|(_, c)| c.abscissa.len())
        .map(|(_, c)| c.abscissa.clone())
        .unwrap_or_default();

    let scope = problem_filter.map(sanitize).unwrap_or_else(|| "all".to_string());
    let dir = out_dir.unwrap_or(campaign_dir).join("reports");
    std::fs::create_dir_all(&dir).map_err(CliError::io(&dir))?;
    let csv_path = dir.join(format!("ecdf_{scope}_n{n}.csv"));
    let svg_path = dir.join(format!("ecdf_{scope}_n{n}.svg"));

    // flagged deviations: raw first-hit budgets (no bootstrapped restarts),
    // and an approximate target enumeration
    let mut csv = format!(
        "# campaign={hash} runtimes=raw-first-hit(no-bootstrap) targets=51pos+7neg-log10-0.1dec\n"
    );
    let _ = write!(csv, "fevals_per_n");
    for (name, _) in &curves {
        let _ = write!(csv, ",{name}");
    }
    csv.push('\n');
    for (i, x) in longest.iter().enumerate() {
        let _ = write!(csv, "{x}");
        for (_, curve) in &curves {
            let v = if i < curve.ordinate.len() {
                curve.ordinate[i]
            } else {
                *curve.ordinate.last().unwrap_or(&0.0)
            };
            let _ = write!(csv, ",{v}");
        }
        csv.push('\n');
    }
    std::fs::write(&csv_path, &csv).map_err(CliError::io(&csv_path))?;

    let mut plot = Plot::new(
        format!("ECDF of indicator targets reached ({scope}, n={n})"),
        "FEvals/n",
        "fraction of (run, target) pairs",
    );
    plot.log_x = true;
    for (i, (name, curve)) in curves.iter().enumerate() {
        let pts: Vec<(f64, f64)> = curve
            .abscissa
            .iter()
            .zip(&curve.ordinate)
            .map(|(&x, &y)| (x, y))
            .collect();
        plot.series.push(Series::line(name.clone(), pts, PALETTE[i % PALETTE.len()]));
    }
    let svg = render(
        &plot,
        &format!("campaign={hash} runtimes=raw-first-hit(no-bootstrap) targets=51pos+7neg-log10-0.1dec"),
    );
    std::fs::write(&svg_path, &svg).map_err(CliError::io(&svg_path))?;
    Ok((csv_path, svg_path))
}

#[derive(Debug)]
pub struct DiagnosticsOutcome {
    pub report_csv: PathBuf,
    pub plots: Vec<PathBuf>,
    pub monotonic: bool,
}

/// Per-run diagnostic plots plus the automatic archive-monotonicity check.
/// Errors with E_MONOTONICITY (after writing the report) if any archive
/// indicator trace ever increased.
pub fn cmd_diagnostics(
    campaign_dir: &Path,
    out_dir: Option<&Path>,
) -> Result<DiagnosticsOutcome, CliError> {
    let hash = campaign_hash(campaign_dir)?;
    let runs = discover_runs(campaign_dir, true)?;
    if runs.is_empty() {
        return Err(CliError::EmptySelection("campaign has no completed runs".into()));
    }
    for r in &runs {
        if r.population.is_none() {
            return Err(CliError::MissingTrace(r.dir.join("population.csv")));
        }
    }
    let dir = out_dir.unwrap_or(campaign_dir).join("reports").join("diagnostics");
    std::fs::create_dir_all(&dir).map_err(CliError::io(&dir))?;

    let mut plots = Vec::new();
    let mut report = format!("# campaign={hash}\n");
    report.push_str("algo,problem,seed,archive_monotone,final_evals,final_icoco\n");
    let mut all_monotone = true;
    let mut first_violation: Option<String> = None;

    for r in &runs {
        let monotone = r.indicator.windows(2).all(|w| w[1].1 <= w[0].1 + 1e-12);
        if !monotone {
            all_monotone = false;
            first_violation
                .get_or_insert_with(|| format!("{}/{}/seed{}", r.algo, r.problem, r.seed));
        }
        let (fe, fv) = r.indicator.last().copied().unwrap_or((0, f64::NAN));
        let _ = writeln!(
            report,
            "{},{},{},{},{},{}",
            r.algo, r.problem, r.seed, monotone, fe, fv
        );

        let base = format!("{}_{}_seed{}", sanitize(&r.algo), sanitize(&r.problem), r.seed);
        let pop = r.population.as_ref().unwrap();
        let mut plot = Plot::new(
            format!("population indicator: {} on {} seed {}", r.algo, r.problem, r.seed),
            "FEvals",
            "population indicator",
        );
        plot.log_x = true;
        plot.series.push(Series::line(
            "",
            pop.iter().map(|&(e, v)| (e as f64, v)).collect(),
            PALETTE[0],
        ));
        let path = dir.join(format!("{base}_population.svg"));
        std::fs::write(&path, render(&plot, &format!("campaign={hash}")))
            .map_err(CliError::io(&path))?;
        plots.push(path);

        let mut plot = Plot::new(
            format!("parents replaced: {} on {} seed {}", r.algo, r.problem, r.seed),
            "FEvals",
            "cumulative replacements",
        );
        plot.series.push(Series::line(
            "",
            r.replacements.iter().map(|&(e, c)| (e as f64, c as f64)).collect(),
            PALETTE[1],
        ));
        let path = dir.join(format!("{base}_replacements.svg"));
        std::fs::write(&path, render(&plot, &format!("campaign={hash}")))
            .map_err(CliError::io(&path))?;
        plots.push(path);
    }

    // one overlay per problem: first-seed population trace of every algorithm
    let problems: BTreeSet<&str> = runs.iter().map(|r| r.problem.as_str()).collect();
    for problem in problems {
        let mut plot = Plot::new(
            format!("population indicator by algorithm: {problem}"),
            "FEvals",
            "population indicator",
        );
        plot.log_x = true;
        let mut seen: BTreeSet<&str> = BTreeSet::new();
        let mut color = 0usize;
        for r in runs.iter().filter(|r| r.problem == problem) {
            if !seen.insert(&r.algo) {
                continue;
            }
            let pop = r.population.as_ref().unwrap();
            plot.series.push(Series::line(
                r.algo.clone(),
                pop.iter().map(|&(e, v)| (e as f64, v)).collect(),
                PALETTE[color % PALETTE.len()],
            ));
            color += 1;
        }
        let path = dir.join(format!("overlay_{}_population.svg", sanitize(problem)));
        std::fs::write(&path, render(&plot, &format!("campaign={hash}")))
            .map_err(CliError::io(&path))?;
        plots.push(path);
    }

    let report_csv = dir.join("monotonicity_report.csv");
    std::fs::write(&report_csv, &report).map_err(CliError::io(&report_csv))?;

    if let Some(name) = first_violation {
        return Err(CliError::Monotonicity(name));
    }
    Ok(DiagnosticsOutcome { report_csv, plots, monotonic: all_monotone })
}
