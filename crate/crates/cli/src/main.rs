use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use emoa_cli::config::{load_campaign, CliOverrides};
use emoa_cli::{campaign, reports, scatter, CliError};

#[derive(Parser)]
#[command(name = "emoa", version, about = "multi-objective optimizer benchmark harness")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Execute the campaign grid described by a config file.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Output directory (overrides campaign.out_dir).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Re-run cells whose outputs already exist.
        #[arg(long)]
        force: bool,
        #[arg(long)]
        workers: Option<usize>,
        /// First seed of the consecutive seed list.
        #[arg(long)]
        seed_base: Option<u64>,
    },
    /// Produce the per-problem reference-value file for a suite.
    Reference {
        #[arg(long)]
        config: PathBuf,
        /// Where to write the reference CSV (default: campaign reference path).
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        budget_multiplier: Option<u64>,
        #[arg(long)]
        seeds: Option<usize>,
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Aggregate ECDF runtime profiles from a finished campaign.
    Ecdf {
        #[arg(long)]
        campaign: PathBuf,
        /// Restrict to one problem (pair name or full id).
        #[arg(long)]
        problem: Option<String>,
        /// Restrict to one dimension (required when the campaign mixes dims).
        #[arg(long)]
        dim: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Per-run diagnostic plots plus the archive-monotonicity check.
    Diagnostics {
        #[arg(long)]
        campaign: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Scatter the children of one crossover operator (or "all") on 2-D parents.
    Scatter {
        #[arg(long)]
        operator: String,
        /// CSV file with one x1,x2 parent per line.
        #[arg(long)]
        parents: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        children: usize,
    },
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Run { config, out, force, workers, seed_base } => {
            let campaign_cfg =
                load_campaign(&config, &CliOverrides { out, workers, seed_base })?;
            let outcome = campaign::cmd_run(&campaign_cfg, force)?;
            println!(
                "campaign {} complete: {} cells executed, {} skipped, {} evaluations, outputs in {} (manifest {})",
                campaign_cfg.name,
                outcome.executed,
                outcome.skipped,
                outcome.evaluations,
                campaign_cfg.out_dir.display(),
                campaign_cfg.manifest_hash,
            );
            Ok(())
        }
        Command::Reference { config, out, budget_multiplier, seeds, workers } => {
            let campaign_cfg =
                load_campaign(&config, &CliOverrides { out: None, workers, seed_base: None })
                    .or_else(|e| {
                        // reference generation does not need an out_dir when
                        // --out names the file explicitly
                        if out.is_some() {
                            if let CliError::Config(msg) = &e {
                                if msg.contains("out_dir") {
                                    return load_campaign(
                                        &config,
                                        &CliOverrides {
                                            out: Some(PathBuf::from(".")),
                                            workers,
                                            seed_base: None,
                                        },
                                    );
                                }
                            }
                        }
                        Err(e)
                    })?;
            let path = campaign::cmd_reference(
                &campaign_cfg,
                out.as_deref(),
                budget_multiplier,
                seeds,
            )?;
            println!("reference values written to {}", path.display());
            Ok(())
        }
        Command::Ecdf { campaign, problem, dim, out } => {
            let (csv, svg) = reports::cmd_ecdf(&campaign, problem.as_deref(), dim, out.as_deref())?;
            println!("ecdf written to {} and {}", csv.display(), svg.display());
            Ok(())
        }
        Command::Diagnostics { campaign, out } => {
            let outcome = reports::cmd_diagnostics(&campaign, out.as_deref())?;
            println!(
                "diagnostics written: {} plots, report {} (archive monotonicity: {})",
                outcome.plots.len(),
                outcome.report_csv.display(),
                if outcome.monotonic { "ok" } else { "VIOLATED" },
            );
            Ok(())
        }
        Command::Scatter { operator, parents, out, seed, children } => {
            let path = scatter::cmd_scatter(&operator, &parents, &out, seed, children)?;
            println!("scatter written to {}", path.display());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error[{}]: {e}", e.code());
            ExitCode::from(2)
        }
    }
}
