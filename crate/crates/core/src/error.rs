//! Configuration errors reachable from user-supplied settings.
//!
//! Contract violations in the numeric core (length mismatches, non-finite
//! inputs) panic with a descriptive message instead; they indicate a bug in
//! the caller, not a bad configuration.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConfigError {
    #[error("sbx produces children in pairs; lambda must be even, got {0}")]
    OddSbxBrood(usize),

    #[error("bc selection requires lambda >= k (lambda = {lambda}, k = {k})")]
    LambdaBelowFamily { lambda: usize, k: usize },

    #[error("population must hold at least one full parent set (mu = {mu}, k = {k})")]
    MuBelowFamily { mu: usize, k: usize },

    #[error("evaluation budget {max_evals} cannot cover initialization (mu = {mu})")]
    BudgetBelowInit { max_evals: u64, mu: usize },

    #[error("record_interval must be positive")]
    ZeroRecordInterval,

    #[error("binary-tournament mating is only defined for the sbx crossover")]
    MatingNeedsSbx,

    #[error("unknown {what}: {got}")]
    Unknown { what: &'static str, got: String },
}
