//! Design diagnostics and the burn-in recommendation.
//!
//! Three ingredients feed the recommendation:
//!
//! - the standardized treatment effect `delta`, measuring how hard the
//!   estimation problem is,
//! - the burn-in budget `n * n_half / (n + n_half)`, the saturating share of
//!   the trial available for burn-in,
//! - the reactiveness `r` and expected final allocation error `eps_rho`,
//!   estimated by Monte Carlo from trials run at the minimal burn-in b = 2.
//!
//! They combine into `b = max{2, floor(0.5 * budget * (r + eps)^delta)}`.
//! Two aggregation modes exist: `PlugIn` applies the formula once to the
//! Monte Carlo means, `PerReplication` applies the real-valued formula inside
//! every replication and averages, which is systematically larger whenever the
//! per-replication inputs spread (the map is concave for delta < 1), and is
//! the mode that matches published sweeps.

use crate::design::{DesignKind, DesignSpec};
use crate::error::Error;
use crate::inference::critical_value;
use crate::rng::RngStream;
use crate::scenario::TrialScenario;
use crate::trial::{simulate_trial, TrialPath};
use crate::Result;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Denominator convention for the standardized effect.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DeltaVariant {
    /// Root of summed variances: |p1-p0| / sqrt(p0 q0 + p1 q1).
    Rss,
    /// Sum of standard deviations: |p1-p0| / (sqrt(p0 q0) + sqrt(p1 q1)).
    Ssd,
}

impl DeltaVariant {
    pub fn label(self) -> &'static str {
        match self {
            DeltaVariant::Rss => "rss",
            DeltaVariant::Ssd => "ssd",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "rss" => Ok(DeltaVariant::Rss),
            "ssd" => Ok(DeltaVariant::Ssd),
            other => Err(Error::Configuration(format!(
                "unknown delta variant: {other}"
            ))),
        }
    }
}

/// Standardized treatment effect.
///
/// Degenerate cases: `p0 = p1` inside (0,1) gives 0; a deterministic pair with
/// `p0 != p1` gives +infinity; `p0 = p1` in {0,1} is an indeterminate 0/0 form
/// and errors.
pub fn standardized_effect(p0: f64, p1: f64, variant: DeltaVariant) -> Result<f64> {
    if p0 == p1 && (p0 == 0.0 || p0 == 1.0) {
        return Err(Error::UndefinedEffect(p0));
    }
    let v0 = p0 * (1.0 - p0);
    let v1 = p1 * (1.0 - p1);
    let numerator = (p1 - p0).abs();
    let denominator = match variant {
        DeltaVariant::Rss => (v0 + v1).sqrt(),
        DeltaVariant::Ssd => v0.sqrt() + v1.sqrt(),
    };
    if denominator == 0.0 {
        // Both arms deterministic but unequal.
        Ok(f64::INFINITY)
    } else {
        Ok(numerator / denominator)
    }
}

/// Saturating burn-in budget `n * n_half / (n + n_half)`.
pub fn burnin_budget(n: u32, n_half: f64) -> f64 {
    let n = f64::from(n);
    n * n_half / (n + n_half)
}

/// Geometric slope of the allocation trajectory toward `rho`.
///
/// Averages `-log(|n1(i)/i - rho| / |1/2 - rho|) / log(i)` over patients
/// `i = 2..n`, dividing by `n`. The deviation is floored at the half-patient
/// resolution `1/(2n)` before the logarithm so exact hits of the target do not
/// blow up a term. Identically 0 at `rho = 1/2`, where departure from equal
/// allocation is not defined.
pub fn geometric_slope(path: &TrialPath, rho: f64) -> f64 {
    if rho == 0.5 {
        return 0.0;
    }
    let n = f64::from(path.n());
    let floor = 1.0 / (2.0 * n);
    let reference = (0.5 - rho).abs();
    let mut sum = 0.0;
    for i in 2..=path.running_n1.len() {
        let prop = f64::from(path.running_n1[i - 1]) / i as f64;
        let deviation = (prop - rho).abs().max(floor);
        sum -= (deviation / reference).ln() / (i as f64).ln();
    }
    sum / n
}

/// Final allocation error of an arm-1 proportion against target `rho`.
///
/// For `rho >= 1/2` the no-penalty band is `[1/2, rho]`; overshoot is charged
/// from `rho`, wrong-direction drift below 1/2 is charged from 1/2 (and is
/// therefore the larger penalty for the same distance). For `rho < 1/2` the
/// same logic runs on the arm-0 proportion. At `rho = 1/2` the band collapses
/// and the error is the absolute deviation from 1/2.
pub fn allocation_error(prop_arm1: f64, rho: f64) -> f64 {
    if rho == 0.5 {
        (prop_arm1 - 0.5).abs()
    } else if rho > 0.5 {
        if prop_arm1 > rho {
            prop_arm1 - rho
        } else if prop_arm1 >= 0.5 {
            0.0
        } else {
            0.5 - prop_arm1
        }
    } else {
        let prop_arm0 = 1.0 - prop_arm1;
        if prop_arm0 < rho {
            rho - prop_arm0
        } else if prop_arm0 <= 0.5 {
            0.0
        } else {
            prop_arm0 - 0.5
        }
    }
}

/// [`allocation_error`] evaluated on a realized path.
pub fn final_allocation_error(path: &TrialPath, rho: f64) -> f64 {
    allocation_error(path.prop_arm1(), rho)
}

/// How the formula is aggregated over replications.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RecommendMode {
    /// Apply the formula once to the Monte Carlo mean `r` and `eps`.
    PlugIn,
    /// Apply the real-valued formula per replication and average; the
    /// published integer is the ceiling of that mean.
    PerReplication,
}

impl RecommendMode {
    pub fn label(self) -> &'static str {
        match self {
            RecommendMode::PlugIn => "plugin",
            RecommendMode::PerReplication => "perrep",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "plugin" | "plug-in" => Ok(RecommendMode::PlugIn),
            "perrep" | "per-replication" | "per-rep" => Ok(RecommendMode::PerReplication),
            other => Err(Error::Configuration(format!("unknown mode: {other}"))),
        }
    }
}

/// 95% normal-approximation confidence radii for the report columns.
#[derive(Debug, Clone, Copy, Default, Serialize, Deserialize)]
pub struct CiRadii {
    pub r: f64,
    pub eps: f64,
    pub b: f64,
    pub bp: f64,
}

impl CiRadii {
    /// Radius for the `r + eps` display column (independent-component
    /// quadrature).
    pub fn sum(&self) -> f64 {
        (self.r * self.r + self.eps * self.eps).sqrt()
    }
}

/// Everything the burn-in recommendation pipeline produces for one design.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MetricReport {
    pub design: String,
    pub mode: RecommendMode,
    pub n_sim: usize,
    /// Target proportion the diagnostics were measured against (scenario mode)
    /// or 0.5 as a neutral placeholder in global mode, where it varies per
    /// replication.
    pub rho: f64,
    /// Monte Carlo mean slopes toward the target, toward 0, and toward 1;
    /// absent for pure plug-in arithmetic with externally supplied inputs.
    pub r_tilde_rho: Option<f64>,
    pub r_tilde_0: Option<f64>,
    pub r_tilde_1: Option<f64>,
    /// Reactiveness: the largest of the mean slopes, floored at 0.
    pub r: f64,
    /// Mean final allocation error.
    pub eps_rho: f64,
    /// Standardized effect used by the formula (mean effect in global mode).
    pub delta: f64,
    pub budget: f64,
    pub b: u32,
    /// Burn-in proportion 2b/n (mean of per-replication 2 b_m / n in
    /// per-replication mode).
    pub bp: f64,
    pub ci: CiRadii,
    pub warnings: Vec<String>,
}

impl MetricReport {
    /// Display column `r + eps`.
    pub fn sum(&self) -> f64 {
        self.r + self.eps_rho
    }
}

/// Growth factor `(r + eps)^delta` with the pinned edge conventions:
/// a zero sum gives 0 for every `delta` (including `0^0`), `delta = 0`
/// otherwise gives 1, and `delta = +inf` gives 0 below 1 and 1 at 1.
pub fn growth_factor(sum: f64, delta: f64) -> f64 {
    if sum <= 0.0 {
        // A design with no reactiveness and no allocation error needs no
        // burn-in beyond the floor, whatever the effect size, so the empty
        // diagnostic wins the 0^0 corner.
        0.0
    } else if delta == 0.0 {
        1.0
    } else if delta.is_infinite() {
        if sum < 1.0 {
            0.0
        } else {
            1.0
        }
    } else {
        sum.powf(delta)
    }
}

/// Real-valued formula value `0.5 * budget * (r + eps)^delta` before flooring,
/// clamping the sum into [0, 1].
fn formula_raw(half_budget: f64, sum: f64, delta: f64) -> f64 {
    half_budget * growth_factor(sum.clamp(0.0, 1.0), delta)
}

/// Integer plug-in recommendation `max{2, floor(0.5 budget (r+eps)^delta)}`,
/// capped at `floor(n/2)`.
pub fn plugin_burnin(n: u32, n_half: f64, r: f64, eps: f64, delta: f64) -> (u32, Vec<String>) {
    let mut warnings = Vec::new();
    let sum = r + eps;
    if sum > 1.0 {
        warnings.push(format!("r + eps = {sum:.4} exceeds 1; clamped to 1"));
    }
    let half = 0.5 * burnin_budget(n, n_half);
    let raw = formula_raw(half, sum, delta);
    let mut b = raw.floor().max(2.0) as u32;
    let cap = n / 2;
    if b > cap {
        warnings.push(format!("recommended b = {b} infeasible; capped at {cap}"));
        b = cap;
    }
    (b, warnings)
}

/// Per-replication diagnostics retained for aggregation.
struct Replicate {
    c_rho: f64,
    c_zero: f64,
    c_one: f64,
    eps: f64,
    b_real: f64,
    delta: f64,
    clamped: bool,
}

fn replicate_metrics(
    design: &DesignSpec,
    scenario: &TrialScenario,
    rho: f64,
    delta: f64,
    half_budget: f64,
    rng: &mut RngStream,
) -> Result<Replicate> {
    let path = simulate_trial(scenario, design, 2, rng)?;
    let c_rho = geometric_slope(&path, rho);
    // The boundary candidates catch procedures whose allocation sticks near
    // zero or one; a design that enforces exact 1:1 balance cannot stick, and
    // evaluating them there would only pick up a convexity bias from the
    // floored log ratio.
    let (c_zero, c_one) = if design.kind == DesignKind::Er {
        (0.0, 0.0)
    } else {
        (geometric_slope(&path, 0.0), geometric_slope(&path, 1.0))
    };
    let eps = final_allocation_error(&path, rho);
    let sum = c_rho.max(0.0) + eps;
    Ok(Replicate {
        c_rho,
        c_zero,
        c_one,
        eps,
        b_real: formula_raw(half_budget, sum, delta),
        delta,
        clamped: sum > 1.0,
    })
}

/// Reactiveness and burn-in recommendation at fixed scenario rates, measured
/// against the design's limiting proportion for those rates.
pub fn reactiveness_scenario(
    design: &DesignSpec,
    scenario: &TrialScenario,
    mode: RecommendMode,
    n_sim: usize,
    master_seed: u64,
    variant: DeltaVariant,
) -> Result<MetricReport> {
    design.validate()?;
    if n_sim == 0 {
        return Err(Error::Configuration("n_sim must be positive".into()));
    }
    let rho = design.limit_proportion(scenario.p0, scenario.p1)?;
    let delta = standardized_effect(scenario.p0, scenario.p1, variant)?;
    let half_budget = 0.5 * burnin_budget(scenario.n, scenario.n_half);
    let label = design.label();
    let replicates: Vec<Replicate> = (0..n_sim as u64)
        .into_par_iter()
        .map(|m| {
            let mut rng = RngStream::namespaced(master_seed, &["metrics", "scenario", label], m);
            replicate_metrics(design, scenario, rho, delta, half_budget, &mut rng)
        })
        .collect::<Result<_>>()?;
    Ok(assemble(design, scenario, mode, rho, replicates))
}

/// Reactiveness over uniformly drawn scenarios: each replication samples
/// `(p0, p1)` from the unit square, measures the slopes against the design's
/// limit for that draw, and uses that draw's standardized effect.
pub fn reactiveness_global(
    design: &DesignSpec,
    n: u32,
    n_half: f64,
    mode: RecommendMode,
    n_sim: usize,
    master_seed: u64,
    variant: DeltaVariant,
) -> Result<MetricReport> {
    design.validate()?;
    if n_sim == 0 {
        return Err(Error::Configuration("n_sim must be positive".into()));
    }
    let base = TrialScenario::new(0.5, 0.5, n)?.with_n_half(n_half)?;
    let half_budget = 0.5 * burnin_budget(n, n_half);
    let label = design.label();
    let n_str = n.to_string();
    let replicates: Vec<Replicate> = (0..n_sim as u64)
        .into_par_iter()
        .map(|m| {
            let mut rng =
                RngStream::namespaced(master_seed, &["metrics", "global", label, &n_str], m);
            let mut scenario = base;
            scenario.p0 = rng.uniform();
            scenario.p1 = rng.uniform();
            let rho = design.limit_proportion(scenario.p0, scenario.p1)?;
            let delta = standardized_effect(scenario.p0, scenario.p1, variant)?;
            replicate_metrics(design, &scenario, rho, delta, half_budget, &mut rng)
        })
        .collect::<Result<_>>()?;
    // Each replication has its own limit proportion, so the report carries
    // none.
    Ok(assemble(design, &base, mode, f64::NAN, replicates))
}

/// Full recommendation pipeline for a scenario: estimate the diagnostics by
/// simulation and turn them into `b` under the requested aggregation mode.
pub fn recommend_burnin(
    design: &DesignSpec,
    scenario: &TrialScenario,
    mode: RecommendMode,
    n_sim: usize,
    master_seed: u64,
    variant: DeltaVariant,
) -> Result<MetricReport> {
    reactiveness_scenario(design, scenario, mode, n_sim, master_seed, variant)
}

/// Plug-in arithmetic on externally supplied diagnostics (no simulation).
pub fn recommend_burnin_from_inputs(
    scenario: &TrialScenario,
    design_label: &str,
    r: f64,
    eps: f64,
    delta: f64,
) -> MetricReport {
    let (b, warnings) = plugin_burnin(scenario.n, scenario.n_half, r, eps, delta);
    MetricReport {
        design: design_label.to_string(),
        mode: RecommendMode::PlugIn,
        n_sim: 0,
        rho: f64::NAN,
        r_tilde_rho: None,
        r_tilde_0: None,
        r_tilde_1: None,
        r,
        eps_rho: eps,
        delta,
        budget: burnin_budget(scenario.n, scenario.n_half),
        b,
        bp: 2.0 * f64::from(b) / f64::from(scenario.n),
        ci: CiRadii::default(),
        warnings,
    }
}

fn assemble(
    design: &DesignSpec,
    scenario: &TrialScenario,
    mode: RecommendMode,
    rho: f64,
    replicates: Vec<Replicate>,
) -> MetricReport {
    let n = scenario.n;
    let z = critical_value(0.05);
    let (m_rho, rad_rho) = mean_and_radius(replicates.iter().map(|r| r.c_rho), z);
    let (m_zero, rad_zero) = mean_and_radius(replicates.iter().map(|r| r.c_zero), z);
    let (m_one, rad_one) = mean_and_radius(replicates.iter().map(|r| r.c_one), z);
    let (m_eps, rad_eps) = mean_and_radius(replicates.iter().map(|r| r.eps), z);
    let (m_delta, _) = mean_and_radius(replicates.iter().map(|r| r.delta), z);
    let (m_b, rad_b) = mean_and_radius(replicates.iter().map(|r| r.b_real), z);

    // Reactiveness takes the winning mean; its radius follows the winner.
    let (r, rad_r) = [(m_rho, rad_rho), (m_zero, rad_zero), (m_one, rad_one)]
        .into_iter()
        .max_by(|a, b| a.0.total_cmp(&b.0))
        .unwrap();
    let (r, rad_r) = if r > 0.0 { (r, rad_r) } else { (0.0, 0.0) };

    let mut warnings = Vec::new();
    if let Some(w) = design.placeholder_warning() {
        warnings.push(w);
    }
    let clamped = replicates.iter().filter(|r| r.clamped).count();
    if clamped > 0 {
        warnings.push(format!(
            "r + eps exceeded 1 in {clamped} replications; clamped"
        ));
    }

    let cap = n / 2;
    let (b, bp, rad_b, rad_bp) = match mode {
        RecommendMode::PerReplication => {
            let b = (m_b.ceil().max(2.0) as u32).min(cap);
            let bp = 2.0 * m_b / f64::from(n);
            (b, bp, rad_b, 2.0 * rad_b / f64::from(n))
        }
        RecommendMode::PlugIn => {
            let (b, mut plug_warnings) = plugin_burnin(n, scenario.n_half, r, m_eps, m_delta);
            warnings.append(&mut plug_warnings);
            (b, 2.0 * f64::from(b) / f64::from(n), 0.0, 0.0)
        }
    };

    MetricReport {
        design: design.label().to_string(),
        mode,
        n_sim: replicates.len(),
        rho,
        r_tilde_rho: Some(m_rho),
        r_tilde_0: Some(m_zero),
        r_tilde_1: Some(m_one),
        r,
        eps_rho: m_eps,
        delta: m_delta,
        budget: burnin_budget(n, scenario.n_half),
        b,
        bp,
        ci: CiRadii {
            r: rad_r,
            eps: rad_eps,
            b: rad_b,
            bp: rad_bp,
        },
        warnings,
    }
}

/// Mean and 95% confidence radius of a sample.
pub fn mean_and_radius(values: impl Iterator<Item = f64>, z: f64) -> (f64, f64) {
    let values: Vec<f64> = values.collect();
    let m = values.len();
    if m == 0 {
        return (0.0, 0.0);
    }
    let mean = values.iter().sum::<f64>() / m as f64;
    if m == 1 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (m as f64 - 1.0);
    (mean, z * (var / m as f64).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::design::DesignSpec;
    use proptest::prelude::*;

    fn assert_close(actual: f64, expected: f64, tol: f64) {
        assert!(
            (actual - expected).abs() < tol,
            "expected {expected}, got {actual}"
        );
    }

    fn path_from_running_n1(running_n1: Vec<u32>) -> TrialPath {
        let mut assignments = Vec::new();
        let mut prev = 0;
        for &c in &running_n1 {
            assignments.push((c - prev) as u8);
            prev = c;
        }
        let n = running_n1.len() as u32;
        let n1 = *running_n1.last().unwrap();
        TrialPath {
            outcomes: vec![0; running_n1.len()],
            successes: (0, 0),
            alloc_counts: (n - n1, n1),
            running_n1,
            assignments,
        }
    }

    #[test]
    fn effect_size_matches_published_rounding() {
        assert_close(
            standardized_effect(0.7, 0.9, DeltaVariant::Rss).unwrap(),
            0.3651,
            5e-4,
        );
        assert_close(
            standardized_effect(0.4, 0.6, DeltaVariant::Rss).unwrap(),
            0.2887,
            5e-4,
        );
        assert_close(
            standardized_effect(0.12, 0.37, DeltaVariant::Ssd).unwrap(),
            0.3095,
            5e-4,
        );
        assert_close(
            standardized_effect(0.941, 0.991, DeltaVariant::Ssd).unwrap(),
            0.1515,
            5e-4,
        );
    }

    #[test]
    fn effect_size_edge_cases() {
        assert_eq!(
            standardized_effect(0.0, 1.0, DeltaVariant::Rss).unwrap(),
            f64::INFINITY
        );
        assert_eq!(
            standardized_effect(1.0, 0.0, DeltaVariant::Ssd).unwrap(),
            f64::INFINITY
        );
        assert_eq!(
            standardized_effect(0.3, 0.3, DeltaVariant::Rss).unwrap(),
            0.0
        );
        assert!(matches!(
            standardized_effect(0.0, 0.0, DeltaVariant::Rss),
            Err(Error::UndefinedEffect(_))
        ));
        assert!(matches!(
            standardized_effect(1.0, 1.0, DeltaVariant::Ssd),
            Err(Error::UndefinedEffect(_))
        ));
    }

    #[test]
    fn budget_matches_published_values() {
        assert_close(burnin_budget(86, 10000.0), 85.27, 0.01);
        assert_close(burnin_budget(360, 10000.0), 347.49, 0.05);
        assert_eq!(burnin_budget(1000, 1000.0), 500.0);
        assert_close(burnin_budget(86, 1000.0), 79.18968692449355, 1e-10);
        assert_close(burnin_budget(360, 1000.0), 264.70588235294116, 1e-10);
    }

    #[test]
    fn slope_vanishes_at_half_and_on_reference_paths() {
        let path = path_from_running_n1(vec![1, 1, 2, 2, 3, 3]);
        assert_eq!(geometric_slope(&path, 0.5), 0.0);
        // A trajectory pinned to 1/2 at every evaluated index scores 0.
        let tiny = path_from_running_n1(vec![1, 1]);
        assert_close(geometric_slope(&tiny, 0.8), 0.0, 1e-15);
    }

    #[test]
    fn slope_matches_term_by_term_oracle() {
        // Running proportions (1, 1/2, 2/3, 1/2) against rho = 0.75: only the
        // i = 3 term survives, floored at 1/(2n) = 1/8, giving
        // -ln(0.125/0.25)/ln(3)/4.
        let path = path_from_running_n1(vec![1, 1, 2, 2]);
        assert_close(geometric_slope(&path, 0.75), 0.15773243839286435, 1e-12);
    }

    #[test]
    fn allocation_error_fixtures() {
        assert_close(allocation_error(0.7, 0.6), 0.1, 1e-12);
        assert_close(allocation_error(0.3, 0.6), 0.2, 1e-12);
        assert_close(allocation_error(0.55, 0.6), 0.0, 1e-12);
        assert_close(allocation_error(0.5, 0.5), 0.0, 1e-12);
        assert_close(allocation_error(0.62, 0.5), 0.12, 1e-12);
        // Mirrored branch: the target band for rho < 1/2 sits on the arm-0
        // proportion.
        assert_close(allocation_error(0.55, 0.4), 0.0, 1e-12);
        assert_close(allocation_error(0.7, 0.4), 0.1, 1e-12);
        assert_close(allocation_error(0.45, 0.4), 0.05, 1e-12);
    }

    #[test]
    fn wrong_direction_errors_dominate() {
        assert!(allocation_error(0.3, 0.6) > allocation_error(0.7, 0.6));
    }

    #[test]
    fn growth_factor_conventions() {
        assert_eq!(growth_factor(0.0, 2.0), 0.0);
        assert_eq!(growth_factor(0.3, 0.0), 1.0);
        assert_eq!(growth_factor(0.0, 0.0), 0.0);
        assert_eq!(growth_factor(0.5, f64::INFINITY), 0.0);
        assert_eq!(growth_factor(1.0, f64::INFINITY), 1.0);
        assert_close(growth_factor(0.25, 0.5), 0.5, 1e-12);
    }

    #[test]
    fn plugin_matches_hand_arithmetic() {
        let (b, warnings) = plugin_burnin(86, 10000.0, 0.0668, 0.0, 0.3095);
        assert_eq!(b, 18);
        assert!(warnings.is_empty());

        // Zero diagnostics floor at the minimal burn-in for any positive delta.
        assert_eq!(plugin_burnin(86, 10000.0, 0.0, 0.0, 0.3095).0, 2);
        assert_eq!(plugin_burnin(1000, 1000.0, 0.0, 0.0, 5.0).0, 2);

        // Zero delta gives the full half-budget.
        assert_eq!(plugin_burnin(1000, 1000.0, 0.1, 0.2, 0.0).0, 250);

        // Inputs above 1 are clamped with a warning.
        let (b, warnings) = plugin_burnin(1000, 1000.0, 0.9, 0.4, 1.0);
        assert_eq!(b, 250);
        assert_eq!(warnings.len(), 1);
    }

    #[test]
    fn scenario_reactiveness_for_er_is_null() {
        let scenario = TrialScenario::new(0.12, 0.37, 86).unwrap();
        let report = reactiveness_scenario(
            &DesignSpec::er(),
            &scenario,
            RecommendMode::PerReplication,
            200,
            7,
            DeltaVariant::Rss,
        )
        .unwrap();
        assert_eq!(report.r, 0.0);
        assert_eq!(report.eps_rho, 0.0);
        assert_eq!(report.b, 2);
        assert!(report.warnings.is_empty());
    }

    #[test]
    fn global_reactiveness_of_the_oracle_design_is_large() {
        let report = reactiveness_global(
            &DesignSpec::pbb(),
            200,
            1000.0,
            RecommendMode::PerReplication,
            150,
            11,
            DeltaVariant::Rss,
        )
        .unwrap();
        assert!(
            report.r > 0.60 && report.r < 0.72,
            "oracle reactiveness at n=200 should sit near 0.66, got {}",
            report.r
        );
        assert!(report.b >= 2);
    }

    #[test]
    fn placeholder_targets_carry_a_warning_through_reports() {
        let scenario = TrialScenario::new(0.12, 0.37, 86).unwrap();
        let report = reactiveness_scenario(
            &DesignSpec::neyman_score(),
            &scenario,
            RecommendMode::PerReplication,
            50,
            3,
            DeltaVariant::Rss,
        )
        .unwrap();
        assert!(report.warnings.iter().any(|w| w.contains("placeholder")));
    }

    #[test]
    fn plug_in_report_from_inputs_has_no_monte_carlo_radii() {
        let scenario = TrialScenario::new(0.12, 0.37, 86)
            .unwrap()
            .with_n_half(10000.0)
            .unwrap();
        let report = recommend_burnin_from_inputs(&scenario, "brar-t", 0.0662, 0.0006, 0.3095);
        assert_eq!(report.b, 18);
        assert_eq!(report.ci.b, 0.0);
        assert!(report.r_tilde_rho.is_none());
    }

    #[test]
    fn mean_and_radius_basics() {
        let (m, r) = mean_and_radius([1.0, 2.0, 3.0].into_iter(), 1.96);
        assert_close(m, 2.0, 1e-12);
        assert_close(r, 1.96 * (1.0f64 / 3.0).sqrt(), 1e-12);
        let (m, r) = mean_and_radius([5.0].into_iter(), 1.96);
        assert_eq!((m, r), (5.0, 0.0));
    }

    proptest! {
        #[test]
        fn effect_size_is_symmetric(p0 in 0.0f64..=1.0, p1 in 0.0f64..=1.0) {
            prop_assume!(!(p0 == p1 && (p0 == 0.0 || p0 == 1.0)));
            for variant in [DeltaVariant::Rss, DeltaVariant::Ssd] {
                let a = standardized_effect(p0, p1, variant).unwrap();
                let b = standardized_effect(p1, p0, variant).unwrap();
                prop_assert!(a == b || (a - b).abs() < 1e-12);
            }
        }

        #[test]
        fn ssd_never_exceeds_rss(p0 in 0.01f64..0.99, p1 in 0.01f64..0.99) {
            let rss = standardized_effect(p0, p1, DeltaVariant::Rss).unwrap();
            let ssd = standardized_effect(p0, p1, DeltaVariant::Ssd).unwrap();
            prop_assert!(ssd <= rss + 1e-12);
        }

        #[test]
        fn formula_is_monotone_in_the_diagnostics(
            s1 in 0.0f64..=1.0,
            s2 in 0.0f64..=1.0,
            delta in 0.01f64..3.0,
        ) {
            let (lo, hi) = if s1 <= s2 { (s1, s2) } else { (s2, s1) };
            prop_assert!(formula_raw(100.0, lo, delta) <= formula_raw(100.0, hi, delta) + 1e-12);
        }

        #[test]
        fn formula_is_antitone_in_delta_below_saturation(
            sum in 0.0f64..0.999,
            d1 in 0.0f64..4.0,
            d2 in 0.0f64..4.0,
        ) {
            let (lo, hi) = if d1 <= d2 { (d1, d2) } else { (d2, d1) };
            prop_assert!(formula_raw(100.0, sum, lo) >= formula_raw(100.0, sum, hi) - 1e-12);
        }

        #[test]
        fn allocation_error_is_continuous_at_breakpoints(rho in 0.01f64..0.99) {
            let h = 1e-9;
            for x in [0.5, rho, 1.0 - rho] {
                if (0.0..=1.0).contains(&x) {
                    let lo = allocation_error((x - h).max(0.0), rho);
                    let mid = allocation_error(x, rho);
                    let hi = allocation_error((x + h).min(1.0), rho);
                    prop_assert!((mid - lo).abs() < 2e-9);
                    prop_assert!((hi - mid).abs() < 2e-9);
                }
            }
        }

        #[test]
        fn allocation_error_is_zero_exactly_on_the_target_band(
            prop in 0.0f64..=1.0,
            rho in 0.0f64..=1.0,
        ) {
            let err = allocation_error(prop, rho);
            prop_assert!(err >= 0.0);
            let upper = if rho == 0.5 { 0.5 } else { rho.max(1.0 - rho) };
            let in_band = (0.5..=upper).contains(&prop);
            prop_assert_eq!(err == 0.0, in_band, "prop {} rho {} err {}", prop, rho, err);
        }

        #[test]
        fn recommended_b_respects_bounds(
            r in 0.0f64..=1.0,
            eps_frac in 0.0f64..=1.0,
            delta in 0.0f64..3.0,
            n in 2u32..500,
        ) {
            let n = n * 2;
            let eps = eps_frac * (1.0 - r);
            let (b, _) = plugin_burnin(n, 1000.0, r, eps, delta);
            prop_assert!(b >= 2 && b <= n / 2);
        }
    }
}
