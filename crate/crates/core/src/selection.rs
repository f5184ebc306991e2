//! The three environmental selections.
//!
//! * BA ranks P ∪ Q and keeps the best μ (elitist (μ+λ) truncation).
//! * BF ranks P ∪ Q, then replaces only the k parents by the best k of the
//!   family Q ∪ R; non-parents survive with no comparison.
//! * BC removes the k parents first, ranks (P \ R) ∪ Q, and takes the best k
//!   children regardless of how good the parents were (non-elitist).
//!
//! Individuals are identified by index/eval_id, never by objective value:
//! duplicated objective vectors are distinct individuals.

use serde::{Deserialize, Serialize};

use crate::error::ConfigError;
use crate::ranking::{rank, RankContext, RankingMethod};
use crate::scalar::Scalar;
use crate::types::{Individual, Population};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum SelectionKind {
    Ba,
    Bf,
    Bc,
}

impl SelectionKind {
    pub const ALL: [SelectionKind; 3] = [SelectionKind::Ba, SelectionKind::Bf, SelectionKind::Bc];

    pub fn name(&self) -> &'static str {
        match self {
            SelectionKind::Ba => "BA",
            SelectionKind::Bf => "BF",
            SelectionKind::Bc => "BC",
        }
    }
}

impl std::str::FromStr for SelectionKind {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "BA" => Ok(SelectionKind::Ba),
            "BF" => Ok(SelectionKind::Bf),
            "BC" => Ok(SelectionKind::Bc),
            _ => Err(ConfigError::Unknown { what: "selection", got: s.to_string() }),
        }
    }
}

/// Result of one environmental selection.
#[derive(Debug, Clone, PartialEq)]
pub struct SelectionOutcome<T> {
    pub next_population: Population<T>,
    /// Parents in R that did not survive this iteration.
    pub replaced_parent_count: usize,
    /// Children that entered the next population.
    pub survivors_from_children: usize,
}

fn take<T>(pool: &mut [Option<Individual<T>>], i: usize) -> Individual<T> {
    pool[i].take().expect("individual already moved out of the pool")
}

/// BA: rank P ∪ Q, keep the top μ.
pub fn ba_select<T: Scalar>(
    population: &Population<T>,
    children: Vec<Individual<T>>,
    parents: &[usize],
    method: RankingMethod,
    ctx: &RankContext<T>,
) -> SelectionOutcome<T> {
    let mu = population.mu();
    let mut pool: Vec<Individual<T>> = population.members.clone();
    pool.extend(children);
    let ranked = rank(method, &pool, ctx);

    let mut selected = vec![false; pool.len()];
    for &i in ranked.order.iter().take(mu) {
        selected[i] = true;
    }
    let replaced_parent_count = parents.iter().filter(|&&p| !selected[p]).count();
    let survivors_from_children = ranked.order.iter().take(mu).filter(|&&i| i >= mu).count();

    let mut pool: Vec<Option<Individual<T>>> = pool.into_iter().map(Some).collect();
    let next: Vec<Individual<T>> = ranked
        .order
        .iter()
        .take(mu)
        .map(|&i| take(&mut pool, i))
        .collect();
    SelectionOutcome {
        next_population: Population::new(next),
        replaced_parent_count,
        survivors_from_children,
    }
}

/// BF: rank P ∪ Q (non-parents contribute to the ranks), then keep the best k
/// of the family Q ∪ R next to the untouched non-parents.
pub fn bf_select<T: Scalar>(
    population: &Population<T>,
    children: Vec<Individual<T>>,
    parents: &[usize],
    method: RankingMethod,
    ctx: &RankContext<T>,
) -> SelectionOutcome<T> {
    let mu = population.mu();
    let k = parents.len();
    let mut pool: Vec<Individual<T>> = population.members.clone();
    pool.extend(children);
    let ranked = rank(method, &pool, ctx);
    let pos = ranked.positions();

    let is_parent = {
        let mut mask = vec![false; mu];
        for &p in parents {
            mask[p] = true;
        }
        mask
    };
    // family = the k parents plus all children (pool indices >= mu)
    let mut family: Vec<usize> = parents.to_vec();
    family.extend(mu..pool.len());
    family.sort_by_key(|&i| pos[i]);
    let winners = &family[..k];

    let survivors_from_children = winners.iter().filter(|&&i| i >= mu).count();
    // every child that enters pushes exactly one parent out
    let replaced_parent_count = survivors_from_children;

    let mut pool: Vec<Option<Individual<T>>> = pool.into_iter().map(Some).collect();
    let mut next: Vec<Individual<T>> = (0..mu)
        .filter(|&i| !is_parent[i])
        .map(|i| take(&mut pool, i))
        .collect();
    next.extend(winners.iter().map(|&i| take(&mut pool, i)));
    SelectionOutcome {
        next_population: Population::new(next),
        replaced_parent_count,
        survivors_from_children,
    }
}

/// BC: remove the k parents, rank (P \ R) ∪ Q, keep the best k children.
/// Requires λ ≥ k.
pub fn bc_select<T: Scalar>(
    population: &Population<T>,
    children: Vec<Individual<T>>,
    parents: &[usize],
    method: RankingMethod,
    ctx: &RankContext<T>,
) -> Result<SelectionOutcome<T>, ConfigError> {
    let mu = population.mu();
    let k = parents.len();
    let lambda = children.len();
    if lambda < k {
        return Err(ConfigError::LambdaBelowFamily { lambda, k });
    }
    let is_parent = {
        let mut mask = vec![false; mu];
        for &p in parents {
            mask[p] = true;
        }
        mask
    };
    let keep: Vec<usize> = (0..mu).filter(|&i| !is_parent[i]).collect();
    let mut pool: Vec<Individual<T>> = keep
        .iter()
        .map(|&i| population.members[i].clone())
        .collect();
    let child_base = pool.len();
    pool.extend(children);
    let ranked = rank(method, &pool, ctx);

    // already in rank order because they are drawn from ranked.order
    let winners: Vec<usize> = ranked
        .order
        .iter()
        .copied()
        .filter(|&i| i >= child_base)
        .take(k)
        .collect();

    let mut pool: Vec<Option<Individual<T>>> = pool.into_iter().map(Some).collect();
    let mut next: Vec<Individual<T>> = (0..child_base).map(|i| take(&mut pool, i)).collect();
    next.extend(winners.iter().map(|&i| take(&mut pool, i)));
    Ok(SelectionOutcome {
        next_population: Population::new(next),
        replaced_parent_count: k,
        survivors_from_children: k,
    })
}

/// Dispatch on the configured selection.
pub fn environmental_selection<T: Scalar>(
    kind: SelectionKind,
    population: &Population<T>,
    children: Vec<Individual<T>>,
    parents: &[usize],
    method: RankingMethod,
    ctx: &RankContext<T>,
) -> Result<SelectionOutcome<T>, ConfigError> {
    match kind {
        SelectionKind::Ba => Ok(ba_select(population, children, parents, method, ctx)),
        SelectionKind::Bf => Ok(bf_select(population, children, parents, method, ctx)),
        SelectionKind::Bc => bc_select(population, children, parents, method, ctx),
    }
}
