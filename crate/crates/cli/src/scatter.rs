//! Qualitative child-distribution scatter plots for the five crossover
//! operators on 2-D parent sets.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use emoa::rng::RandomSource;
use emoa::types::Bounds;
use emoa::variation::{
    blx_alpha, pcx, polynomial_mutation, rex, sbx_pair, spx, CrossoverConfig, CrossoverMethod,
};
use emoa::Real;

use crate::error::CliError;
use crate::svg::{render_row, Plot, Series, PALETTE};

const SCATTER_HALF_WIDTH: f64 = 5.0;

/// Parse a two-column CSV of parent coordinates; `#` comments and one header
/// line are tolerated.
pub fn parse_parents(path: &Path) -> Result<Vec<[Real; 2]>, CliError> {
    let text = std::fs::read_to_string(path).map_err(CliError::io(path))?;
    let mut parents = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        let parsed: Option<Vec<Real>> =
            fields.iter().map(|f| f.parse::<Real>().ok()).collect();
        match parsed {
            None => continue, // header line
            Some(values) => {
                if values.len() != 2 {
                    return Err(CliError::NotPlanar(values.len()));
                }
                parents.push([values[0], values[1]]);
            }
        }
    }
    if parents.is_empty() {
        return Err(CliError::Config(format!("{}: no parent rows", path.display())));
    }
    for p in &parents {
        if p.iter().any(|v| v.abs() > SCATTER_HALF_WIDTH) {
            return Err(CliError::Config(format!(
                "parent {p:?} outside the [-5, 5]^2 scatter box"
            )));
        }
    }
    Ok(parents)
}

#[derive(Debug)]
pub struct PanelData {
    pub operator: CrossoverMethod,
    pub parents: Vec<[Real; 2]>,
    pub children: Vec<[Real; 2]>,
    /// ε-expanded simplex outline, drawn for SPX.
    pub outline: Option<Vec<[Real; 2]>>,
}

/// Children of one operator on the given parents (first k rows are used).
pub fn panel_data(
    operator: CrossoverMethod,
    parents: &[[Real; 2]],
    seed: u64,
    count: usize,
) -> Result<PanelData, CliError> {
    let n = 2;
    let cfg: CrossoverConfig<Real> = CrossoverConfig::for_problem(operator, n);
    if parents.len() < cfg.k {
        return Err(CliError::Config(format!(
            "{} needs {} parents for n = 2, got {}",
            operator.name(),
            cfg.k,
            parents.len()
        )));
    }
    let used: Vec<Vec<Real>> = parents[..cfg.k].iter().map(|p| p.to_vec()).collect();
    let refs: Vec<&[Real]> = used.iter().map(|p| p.as_slice()).collect();
    let bounds = Bounds::symmetric(n, SCATTER_HALF_WIDTH);
    let mut rng = RandomSource::new(seed);
    let mut children = Vec::with_capacity(count);
    match operator {
        CrossoverMethod::Sbx => {
            while children.len() < count {
                let (c1, c2) = sbx_pair(refs[0], refs[1], &cfg, &bounds, &mut rng);
                children.push(polynomial_mutation(&c1, &bounds, &cfg, &mut rng));
                children.push(polynomial_mutation(&c2, &bounds, &cfg, &mut rng));
            }
            children.truncate(count);
        }
        CrossoverMethod::Blx => {
            for _ in 0..count {
                children.push(blx_alpha(refs[0], refs[1], &cfg, &bounds, &mut rng));
            }
        }
        CrossoverMethod::Pcx => {
            for i in 0..count {
                children.push(pcx(&refs, i % cfg.k, &cfg, &bounds, &mut rng));
            }
        }
        CrossoverMethod::Spx => {
            for _ in 0..count {
                children.push(spx(&refs, &cfg, &bounds, &mut rng));
            }
        }
        CrossoverMethod::Rex => {
            for _ in 0..count {
                children.push(rex(&refs, &cfg, &bounds, &mut rng));
            }
        }
    }
    let outline = (operator == CrossoverMethod::Spx).then(|| {
        let g = [
            used.iter().map(|p| p[0]).sum::<Real>() / cfg.k as Real,
            used.iter().map(|p| p[1]).sum::<Real>() / cfg.k as Real,
        ];
        used.iter()
            .map(|p| {
                [g[0] + cfg.epsilon * (p[0] - g[0]), g[1] + cfg.epsilon * (p[1] - g[1])]
            })
            .collect()
    });
    Ok(PanelData {
        operator,
        parents: used.iter().map(|p| [p[0], p[1]]).collect(),
        children: children.into_iter().map(|c| [c[0], c[1]]).collect(),
        outline,
    })
}

/// Render the requested operator panel(s) into one self-contained SVG.
pub fn cmd_scatter(
    operator: &str,
    parents_path: &Path,
    out: &Path,
    seed: u64,
    count: usize,
) -> Result<PathBuf, CliError> {
    let parents = parse_parents(parents_path)?;
    let operators: Vec<CrossoverMethod> = if operator.eq_ignore_ascii_case("all") {
        CrossoverMethod::ALL.to_vec()
    } else {
        vec![CrossoverMethod::from_str(operator)?]
    };
    let mut panels = Vec::new();
    for op in operators {
        let data = panel_data(op, &parents, seed, count)?;
        let mut plot = Plot::new(op.name(), "x1", "x2");
        if let Some(outline) = &data.outline {
            plot.polygons
                .push((outline.iter().map(|p| (p[0], p[1])).collect(), "#888".to_string()));
        }
        plot.series.push(Series::scatter(
            "",
            data.children.iter().map(|p| (p[0], p[1])).collect(),
            PALETTE[0],
            1.5,
        ));
        plot.series.push(Series::scatter(
            "",
            data.parents.iter().map(|p| (p[0], p[1])).collect(),
            "#d62728",
            5.0,
        ));
        panels.push(plot);
    }
    let svg = render_row(&panels, &format!("scatter seed={seed} children={count}"));
    if let Some(dir) = out.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir).map_err(CliError::io(dir))?;
        }
    }
    std::fs::write(out, &svg).map_err(CliError::io(out))?;
    Ok(out.to_path_buf())
}
