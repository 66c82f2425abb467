//! End-of-trial hypothesis tests and operating characteristics.
//!
//! Two z statistics for the difference of success probabilities are tracked
//! side by side, because adaptive allocation can split them apart: `z1`
//! estimates the variance arm by arm (Wald, alternative-hypothesis form) and
//! `z0` pools the arms (score, null-hypothesis form). Either statistic can be
//! undefined on degenerate tables; an undefined statistic never rejects.

use crate::error::Error;
use crate::scenario::TrialScenario;
use crate::trial::TrialPath;
use crate::Result;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

/// Two-sided critical value: the standard normal quantile at `1 - alpha/2`.
pub fn critical_value(alpha: f64) -> f64 {
    Normal::standard().inverse_cdf(1.0 - alpha / 2.0)
}

fn check_table(s0: u32, n0: u32, s1: u32, n1: u32) -> Result<()> {
    if n0 == 0 {
        return Err(Error::DegenerateArm { arm: 0 });
    }
    if n1 == 0 {
        return Err(Error::DegenerateArm { arm: 1 });
    }
    if s0 > n0 || s1 > n1 {
        return Err(Error::Configuration(format!(
            "successes exceed allocations: {s0}/{n0}, {s1}/{n1}"
        )));
    }
    Ok(())
}

/// Wald statistic with unpooled variance.
///
/// `None` when both sample proportions are equal and both variance terms
/// vanish (for example two all-success arms); an infinite value is returned
/// when the variance vanishes but the proportions differ.
pub fn wald_z(s0: u32, n0: u32, s1: u32, n1: u32) -> Result<Option<f64>> {
    check_table(s0, n0, s1, n1)?;
    let p0 = f64::from(s0) / f64::from(n0);
    let p1 = f64::from(s1) / f64::from(n1);
    let variance = p0 * (1.0 - p0) / f64::from(n0) + p1 * (1.0 - p1) / f64::from(n1);
    let numerator = p1 - p0;
    if variance == 0.0 {
        if numerator == 0.0 {
            Ok(None)
        } else {
            Ok(Some(numerator.signum() * f64::INFINITY))
        }
    } else {
        Ok(Some(numerator / variance.sqrt()))
    }
}

/// Score statistic with pooled variance.
///
/// `None` when the pooled proportion is 0 or 1, where the pooled variance
/// estimate degenerates.
pub fn score_z(s0: u32, n0: u32, s1: u32, n1: u32) -> Result<Option<f64>> {
    check_table(s0, n0, s1, n1)?;
    let pooled = f64::from(s0 + s1) / f64::from(n0 + n1);
    if pooled == 0.0 || pooled == 1.0 {
        return Ok(None);
    }
    let variance = pooled * (1.0 - pooled) * (1.0 / f64::from(n0) + 1.0 / f64::from(n1));
    let p0 = f64::from(s0) / f64::from(n0);
    let p1 = f64::from(s1) / f64::from(n1);
    Ok(Some((p1 - p0) / variance.sqrt()))
}

/// Both test statistics evaluated against the two-sided critical value.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct TestResult {
    pub z1: Option<f64>,
    pub z0: Option<f64>,
    pub reject_z1: bool,
    pub reject_z0: bool,
    pub critical: f64,
}

impl TestResult {
    pub fn evaluate(s0: u32, n0: u32, s1: u32, n1: u32, alpha: f64) -> Result<Self> {
        let critical = critical_value(alpha);
        let z1 = wald_z(s0, n0, s1, n1)?;
        let z0 = score_z(s0, n0, s1, n1)?;
        let reject = |z: Option<f64>| z.is_some_and(|z| z.abs() > critical);
        Ok(TestResult {
            z1,
            z0,
            reject_z1: reject(z1),
            reject_z0: reject(z0),
            critical,
        })
    }
}

/// Per-trial summaries that operating characteristics average over.
#[derive(Debug, Clone, Copy)]
pub struct TrialContribution {
    pub reject_z1: bool,
    pub reject_z0: bool,
    /// Final share of patients on arm 1.
    pub prop_arm1: f64,
    /// Final share of patients on the truly better arm (arm 0 on ties).
    pub best_arm_prop: f64,
    /// Squared error of the raw treatment effect estimate.
    pub sq_error: f64,
}

/// Evaluate one simulated trial against the scenario that generated it.
pub fn trial_contributions(
    path: &TrialPath,
    scenario: &TrialScenario,
) -> Result<TrialContribution> {
    let (s0, s1) = path.successes;
    let (n0, n1) = path.alloc_counts;
    let tests = TestResult::evaluate(s0, n0, s1, n1, scenario.alpha)?;
    let n = f64::from(path.n());
    let prop_arm1 = path.prop_arm1();
    let best_arm_prop = if scenario.p1 > scenario.p0 {
        prop_arm1
    } else {
        f64::from(n0) / n
    };
    let delta_hat = f64::from(s1) / f64::from(n1) - f64::from(s0) / f64::from(n0);
    let delta = scenario.p1 - scenario.p0;
    Ok(TrialContribution {
        reject_z1: tests.reject_z1,
        reject_z0: tests.reject_z0,
        prop_arm1,
        best_arm_prop,
        sq_error: (delta_hat - delta).powi(2),
    })
}

/// Monte Carlo operating characteristics of one design and burn-in choice.
///
/// Rejection rates under the null scenario are type I error estimates; the
/// remaining columns, including rejection rates as power, come from the
/// alternative scenario. Each estimate carries its standard error.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct OperatingCharacteristics {
    pub n_sim: usize,
    pub type1_z1: f64,
    pub type1_z0: f64,
    pub power_z1: f64,
    pub power_z0: f64,
    pub mean_prop_arm1: f64,
    pub patient_benefit: f64,
    pub mse: f64,
    pub se_type1_z1: f64,
    pub se_type1_z0: f64,
    pub se_power_z1: f64,
    pub se_power_z0: f64,
    pub se_mean_prop_arm1: f64,
    pub se_patient_benefit: f64,
    pub se_mse: f64,
}

fn rate_and_se(hits: usize, m: usize) -> (f64, f64) {
    let p = hits as f64 / m as f64;
    (p, (p * (1.0 - p) / m as f64).sqrt())
}

fn mean_and_se(values: impl Iterator<Item = f64> + Clone, m: usize) -> (f64, f64) {
    let mean = values.clone().sum::<f64>() / m as f64;
    if m < 2 {
        return (mean, 0.0);
    }
    let var = values.map(|v| (v - mean).powi(2)).sum::<f64>() / (m as f64 - 1.0);
    (mean, (var / m as f64).sqrt())
}

impl OperatingCharacteristics {
    /// Combine null-scenario and alternative-scenario trial summaries.
    /// Both slices must have the same length.
    pub fn from_contributions(null: &[TrialContribution], alt: &[TrialContribution]) -> Self {
        assert_eq!(
            null.len(),
            alt.len(),
            "null and alternative runs must match"
        );
        let m = alt.len();
        assert!(m > 0, "no replications");
        let (type1_z1, se_type1_z1) = rate_and_se(null.iter().filter(|c| c.reject_z1).count(), m);
        let (type1_z0, se_type1_z0) = rate_and_se(null.iter().filter(|c| c.reject_z0).count(), m);
        let (power_z1, se_power_z1) = rate_and_se(alt.iter().filter(|c| c.reject_z1).count(), m);
        let (power_z0, se_power_z0) = rate_and_se(alt.iter().filter(|c| c.reject_z0).count(), m);
        let (mean_prop_arm1, se_mean_prop_arm1) = mean_and_se(alt.iter().map(|c| c.prop_arm1), m);
        let (patient_benefit, se_patient_benefit) =
            mean_and_se(alt.iter().map(|c| c.best_arm_prop), m);
        let (mse, se_mse) = mean_and_se(alt.iter().map(|c| c.sq_error), m);
        OperatingCharacteristics {
            n_sim: m,
            type1_z1,
            type1_z0,
            power_z1,
            power_z0,
            mean_prop_arm1,
            patient_benefit,
            mse,
            se_type1_z1,
            se_type1_z0,
            se_power_z1,
            se_power_z0,
            se_mean_prop_arm1,
            se_patient_benefit,
            se_mse,
        }
    }
}
