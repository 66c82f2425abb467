//! Simulation toolkit for choosing the burn-in length of response-adaptive
//! randomized (RAR) two-arm trials with binary outcomes.
//!
//! A RAR design starts with a balanced burn-in of `b` patients per arm and then
//! skews allocation toward the better-performing arm as outcomes accrue. Too
//! little burn-in lets early noise capture the allocation rule; too much gives
//! up the adaptive benefit. This crate simulates ten allocation designs,
//! estimates two design diagnostics (reactiveness, the speed at which a design
//! leaves equal allocation, and the expected final allocation error relative to
//! the design's target), and turns them into a burn-in recommendation
//! `b = max{2, floor(0.5 * budget * (r + eps)^delta)}` together with full
//! Monte Carlo operating characteristics (type I error, power, patient
//! benefit, MSE).
//!
//! The crate is organized bottom-up:
//!
//! - [`rng`]: reproducible per-replication random streams,
//! - [`scenario`]: trial configuration and validation,
//! - [`design`]: the ten allocation rules behind one dispatch point,
//! - [`thompson`]: exact Beta posterior superiority probabilities,
//! - [`trial`]: the sequential trial engine,
//! - [`metrics`]: effect size, budget, reactiveness, allocation error, and
//!   the burn-in recommendation itself,
//! - [`inference`]: Wald and score tests plus per-trial summaries,
//! - [`harness`]: Monte Carlo drivers, scenario profiles, and table artifacts.
//!
//! Every Monte Carlo entry point takes a master seed and produces results that
//! are byte-identical across runs and across thread counts.

pub mod design;
pub mod error;
pub mod harness;
pub mod inference;
pub mod metrics;
pub mod rng;
pub mod scenario;
pub mod thompson;
pub mod trial;

pub use design::{AllocationTarget, DesignKind, DesignSpec, Shrinkage, TargetId, UrnState};
pub use error::Error;
pub use harness::{BurninOption, ScenarioProfile, TableArtifact, TableId};
pub use inference::{score_z, wald_z, OperatingCharacteristics, TestResult};
pub use metrics::{
    allocation_error, burnin_budget, plugin_burnin, recommend_burnin, standardized_effect,
    DeltaVariant, MetricReport, RecommendMode,
};
pub use rng::RngStream;
pub use scenario::TrialScenario;
pub use thompson::thompson_prob;
pub use trial::{simulate_trial, BurnInPlan, TrialPath};

/// Crate version string used in provenance output.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Convenience alias for `Result` with this crate's [`Error`].
pub type Result<T> = std::result::Result<T, Error>;
