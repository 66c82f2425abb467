//! Simulation campaigns: burn-in policies, operating characteristics, and
//! reproduction of the published summary tables.

mod profile;
mod reference;
mod tables;

pub use profile::ScenarioProfile;
pub use reference::{compare, pinned_failures, ReferenceCheck};
pub use tables::{
    oc_csv, profile_oc_rows, reproduce_table, BudgetRow, GridRow, OcRow, ReactRow, TableArtifact,
    TableData, TableId, TableOptions,
};

use crate::design::DesignSpec;
use crate::error::Error;
use crate::inference::{trial_contributions, OperatingCharacteristics, TrialContribution};
use crate::metrics::{reactiveness_scenario, MetricReport, RecommendMode};
use crate::rng::RngStream;
use crate::scenario::TrialScenario;
use crate::trial::simulate_trial;
use crate::Result;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Master seed used when a profile or table run does not specify one.
pub const DEFAULT_SEED: u64 = 20240612;

/// Burn-in policy for an operating-characteristics run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BurninOption {
    /// Smallest feasible burn-in, two patients per arm.
    Min,
    /// The recommendation computed from the reactiveness diagnostics.
    Formula,
    /// The common fixed heuristic `round(n / 3)` patients per arm.
    Third,
    /// Half the trial per arm, i.e. the whole trial is burn-in.
    Half,
    /// An explicit per-arm burn-in.
    Fixed(u32),
}

impl BurninOption {
    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "min" => Ok(BurninOption::Min),
            "formula" => Ok(BurninOption::Formula),
            "third" => Ok(BurninOption::Third),
            "half" => Ok(BurninOption::Half),
            other => match other.strip_prefix("fixed:").unwrap_or(other).parse::<u32>() {
                Ok(b) => Ok(BurninOption::Fixed(b)),
                Err(_) => Err(Error::Configuration(format!("unknown burn-in option: {s}"))),
            },
        }
    }

    pub fn label(&self) -> String {
        match self {
            BurninOption::Min => "min".into(),
            BurninOption::Formula => "formula".into(),
            BurninOption::Third => "third".into(),
            BurninOption::Half => "half".into(),
            BurninOption::Fixed(b) => b.to_string(),
        }
    }
}

/// Reactiveness diagnostics and recommendation for one design under a
/// profile's scenario.
pub fn run_metrics(profile: &ScenarioProfile, design: &DesignSpec) -> Result<MetricReport> {
    reactiveness_scenario(
        design,
        &profile.scenario,
        RecommendMode::PerReplication,
        profile.n_sim_metrics,
        profile.seed,
        profile.delta_variant,
    )
}

/// Resolve a burn-in policy to a concrete per-arm count. `Formula` runs the
/// metrics pipeline and hands its report back alongside the count.
pub fn resolve_burnin(
    profile: &ScenarioProfile,
    design: &DesignSpec,
    option: BurninOption,
) -> Result<(u32, Option<MetricReport>)> {
    let n = profile.scenario.n;
    let b = match option {
        BurninOption::Min => 2,
        BurninOption::Third => (f64::from(n) / 3.0).round() as u32,
        BurninOption::Half => n / 2,
        BurninOption::Fixed(b) => b,
        BurninOption::Formula => {
            let report = run_metrics(profile, design)?;
            let b = report.b;
            return Ok((b, Some(report)));
        }
    };
    if b < 2 || 2 * b > n {
        return Err(Error::InfeasibleBurnIn { twice_b: 2 * b, n });
    }
    Ok((b, None))
}

/// One design evaluated at one resolved burn-in.
#[derive(Debug, Clone)]
pub struct OcRun {
    pub design: String,
    pub option: BurninOption,
    pub b: u32,
    pub oc: OperatingCharacteristics,
    /// Present when the burn-in came from the formula.
    pub metrics: Option<MetricReport>,
}

fn simulate_phase(
    scenario: &TrialScenario,
    design: &DesignSpec,
    b: u32,
    phase: &str,
    n_sim: usize,
    master_seed: u64,
) -> Result<Vec<TrialContribution>> {
    let label = design.label();
    let b_str = b.to_string();
    (0..n_sim as u64)
        .into_par_iter()
        .map(|m| {
            let mut rng = RngStream::namespaced(master_seed, &["oc", phase, label, &b_str], m);
            let path = simulate_trial(scenario, design, b, &mut rng)?;
            trial_contributions(&path, scenario)
        })
        .collect()
}

/// Operating characteristics at an explicit burn-in: rejection rates under
/// the profile's null scenario, everything else under its alternative.
pub fn run_oc_at(
    profile: &ScenarioProfile,
    design: &DesignSpec,
    b: u32,
) -> Result<OperatingCharacteristics> {
    design.validate()?;
    let null_scenario = profile.null_scenario()?;
    let n_sim = profile.n_sim_oc;
    let null = simulate_phase(&null_scenario, design, b, "null", n_sim, profile.seed)?;
    let alt = simulate_phase(&profile.scenario, design, b, "alt", n_sim, profile.seed)?;
    Ok(OperatingCharacteristics::from_contributions(&null, &alt))
}

/// Operating characteristics for one design under a burn-in policy.
pub fn run_oc(
    profile: &ScenarioProfile,
    design: &DesignSpec,
    option: BurninOption,
) -> Result<OcRun> {
    let (b, metrics) = resolve_burnin(profile, design, option)?;
    let oc = run_oc_at(profile, design, b)?;
    Ok(OcRun {
        design: design.label().to_string(),
        option,
        b,
        oc,
        metrics,
    })
}
