//! A simple evolutionary multi-objective optimizer (EMOA) built around three
//! interchangeable environmental selections:
//!
//! * **BA** ("best all") — the classic elitist (μ+λ) truncation over the whole
//!   population and brood,
//! * **BF** ("best family") — elitist truncation restricted to the k parents
//!   and their λ children,
//! * **BC** ("best children") — non-elitist: the k parents are discarded
//!   unconditionally and replaced by the best k children.
//!
//! Selections are combined with one of five real-coded crossovers (SBX+PM,
//! BLX-α, PCX, SPX, REX) and one of four ranking methods (non-dominated
//! sorting with crowding distance, hypervolume contribution, SPEA2 fitness,
//! IBEA additive-ε fitness). Every evaluated point is offered to an unbounded
//! external archive, and run quality is tracked by a normalized
//! hypervolume-or-distance indicator in the COCO style, aggregated into ECDF
//! runtime profiles.
//!
//! All numeric code is generic over [`Scalar`]; the benchmark harness uses the
//! [`Real`] (`f64`) aliases exported below.

pub mod dominance;
pub mod engine;
pub mod error;
pub mod indicators;
pub mod problems;
pub mod ranking;
pub mod rng;
pub mod scalar;
pub mod selection;
pub mod types;
pub mod variation;

pub use dominance::{dominates, weakly_dominates};
pub use error::ConfigError;
pub use rng::RandomSource;
pub use scalar::Scalar;

/// Scalar type used by the shipped benchmark harness.
pub type Real = f64;

pub type Bounds = types::Bounds<Real>;
pub type Individual = types::Individual<Real>;
pub type Population = types::Population<Real>;
pub type BiObjectiveProblem = problems::BiObjectiveProblem<Real>;
pub type ProblemSuite = problems::ProblemSuite<Real>;
pub type CrossoverConfig = variation::CrossoverConfig<Real>;
pub type RankContext = ranking::RankContext<Real>;
pub type RankedSet = ranking::RankedSet<Real>;
pub type SelectionOutcome = selection::SelectionOutcome<Real>;
pub type Archive = indicators::Archive<Real>;
pub type IndicatorContext = indicators::IndicatorContext<Real>;
pub type RunConfig = engine::RunConfig<Real>;
pub type RunRecord = engine::RunRecord<Real>;
