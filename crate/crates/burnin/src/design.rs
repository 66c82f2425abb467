//! The ten allocation designs behind a single dispatch point.
//!
//! Each design maps the accrued trial history to the probability that the next
//! patient is assigned to arm 1:
//!
//! - `ER`: enforced equal allocation, a random permutation of a 1:1 schedule.
//! - `PBB`: an oracle benchmark that knows the truth and sends every
//!   post-burn-in patient to the superior arm.
//! - `BRAR(U)`: Thompson-style allocation with probability equal to the
//!   posterior probability that arm 1 is superior, flat Beta(1,1) prior.
//! - `BRAR(T)`: the same posterior probability, tuned toward 0.5 early in the
//!   trial via the exponent schedule c(i) = i/(2n).
//! - `N1`, `R1`: ERADE biased-coin designs steering the realized allocation
//!   toward a plug-in estimate of an optimal target (Neyman allocation for the
//!   Wald test, respectively the failure-minimizing square-root-ratio target).
//! - `N0`, `R0`: the corresponding score-test-optimal targets. Their closed
//!   forms are not published here, so they run through the pluggable CUSTOM
//!   slot; without a configured target function they fall back to the Wald
//!   formulas and flag every report with a placeholder warning.
//! - `PTW`: deterministic play-the-winner (stay on success, switch on failure).
//! - `RPW`: the randomized play-the-winner urn, starting from one ball per arm.

use crate::error::Error;
use crate::scenario::TrialScenario;
use crate::thompson::thompson_prob;
use crate::Result;
use std::fmt;
use std::sync::Arc;

/// Which allocation rule a [`DesignSpec`] runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DesignKind {
    Er,
    Pbb,
    BrarU,
    BrarT,
    EradeTarget,
    Ptw,
    Rptw,
}

/// Built-in target families for ERADE designs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TargetId {
    /// `N1`: Neyman allocation, optimal power for the unpooled Wald test.
    NeymanWald,
    /// `R1`: failure-minimizing allocation proportional to sqrt(p_k).
    RshirWald,
    /// `N0`: score-test analogue of Neyman allocation (formula pluggable).
    NeymanScore,
    /// `R0`: score-test analogue of the failure-minimizing target (pluggable).
    RshirScore,
    /// Fully user-supplied target function.
    Custom,
}

/// How arm response rates are estimated before being plugged into a target.
///
/// The raw MLE is the default: it reproduces the small-burn-in pathologies
/// these designs are known for (an arm estimated at zero variance pins the
/// plug-in target at 0 or 1 and the allocation can freeze there). The
/// shrinkage rule keeps estimates strictly inside (0,1) and is available for
/// sensitivity analyses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Shrinkage {
    #[default]
    RawMle,
    AddHalf,
}

impl Shrinkage {
    /// Point estimate of a response rate from `s` successes in `n` patients.
    pub fn estimate(self, s: u32, n: u32) -> f64 {
        match self {
            Shrinkage::RawMle => f64::from(s) / f64::from(n),
            Shrinkage::AddHalf => (f64::from(s) + 0.5) / (f64::from(n) + 1.0),
        }
    }
}

/// Target proportion specification for ERADE designs.
#[derive(Clone)]
pub struct AllocationTarget {
    pub id: TargetId,
    pub shrinkage: Shrinkage,
    custom_rho: Option<Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>>,
}

impl fmt::Debug for AllocationTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AllocationTarget")
            .field("id", &self.id)
            .field("shrinkage", &self.shrinkage)
            .field("custom_rho", &self.custom_rho.as_ref().map(|_| "<fn>"))
            .finish()
    }
}

impl AllocationTarget {
    pub fn new(id: TargetId) -> Self {
        AllocationTarget {
            id,
            shrinkage: Shrinkage::default(),
            custom_rho: None,
        }
    }

    /// Attach a custom target function (required for [`TargetId::Custom`],
    /// optional override for the score-test targets).
    pub fn with_rho_fn(mut self, rho: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        self.custom_rho = Some(Arc::new(rho));
        self
    }

    pub fn with_shrinkage(mut self, shrinkage: Shrinkage) -> Self {
        self.shrinkage = shrinkage;
        self
    }

    /// Target proportion at the given response rates.
    pub fn rho(&self, p0: f64, p1: f64) -> f64 {
        if let Some(f) = &self.custom_rho {
            return f(p0, p1);
        }
        match self.id {
            TargetId::NeymanWald | TargetId::NeymanScore => neyman_rho(p0, p1),
            TargetId::RshirWald | TargetId::RshirScore => rshir_rho(p0, p1),
            TargetId::Custom => unreachable!("validated: custom target has a function"),
        }
    }

    /// Plug-in target estimate from accrued counts.
    pub fn estimate(&self, s0: u32, n0: u32, s1: u32, n1: u32) -> f64 {
        let p0 = self.shrinkage.estimate(s0, n0);
        let p1 = self.shrinkage.estimate(s1, n1);
        self.rho(p0, p1)
    }

    /// True when running a score-test target on its Wald fallback formula.
    pub fn is_placeholder(&self) -> bool {
        matches!(self.id, TargetId::NeymanScore | TargetId::RshirScore) && self.custom_rho.is_none()
    }
}

/// Neyman allocation: arm-1 share proportional to the arm standard deviations.
/// Returns 0.5 when both variances vanish.
pub fn neyman_rho(p0: f64, p1: f64) -> f64 {
    let s0 = (p0 * (1.0 - p0)).sqrt();
    let s1 = (p1 * (1.0 - p1)).sqrt();
    if s0 + s1 == 0.0 {
        0.5
    } else {
        s1 / (s0 + s1)
    }
}

/// Failure-minimizing allocation: arm-1 share proportional to sqrt(p_k).
/// Returns 0.5 when both rates are zero.
pub fn rshir_rho(p0: f64, p1: f64) -> f64 {
    let r0 = p0.sqrt();
    let r1 = p1.sqrt();
    if r0 + r1 == 0.0 {
        0.5
    } else {
        r1 / (r0 + r1)
    }
}

/// ERADE biased-coin probability: under-allocated arms are pushed back toward
/// the estimated target, over-allocated arms are damped by `alpha`.
pub fn erade_prob(target_rho: f64, current_prop: f64, alpha: f64) -> f64 {
    if current_prop > target_rho {
        alpha * target_rho
    } else if current_prop < target_rho {
        1.0 - alpha * (1.0 - target_rho)
    } else {
        target_rho
    }
}

/// Tuning exponent schedule for `BRAR(T)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TuningSchedule {
    /// c(i) = i / (2n): near-equal allocation early, exponent 1/2 at the end.
    ThallWathen,
    /// Fixed exponent.
    Constant(f64),
}

impl TuningSchedule {
    pub fn exponent(self, patient_index: u32, n: u32) -> f64 {
        match self {
            TuningSchedule::ThallWathen => f64::from(patient_index) / (2.0 * f64::from(n)),
            TuningSchedule::Constant(c) => c,
        }
    }
}

/// Transform a posterior superiority probability with a tuning exponent:
/// pi^c / (pi^c + (1-pi)^c).
pub fn brar_tuned_prob(
    posterior_superiority: f64,
    patient_index: u32,
    n: u32,
    schedule: TuningSchedule,
) -> f64 {
    let c = schedule.exponent(patient_index, n);
    let a = posterior_superiority.powf(c);
    let b = (1.0 - posterior_superiority).powf(c);
    a / (a + b)
}

/// Deterministic play-the-winner step: stay after a success, switch after a
/// failure.
pub fn ptw_next(last_arm: u8, last_outcome: u8) -> u8 {
    if last_outcome == 1 {
        last_arm
    } else {
        1 - last_arm
    }
}

/// Ball counts of the randomized play-the-winner urn.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UrnState {
    pub balls: (u32, u32),
}

impl Default for UrnState {
    fn default() -> Self {
        UrnState { balls: (1, 1) }
    }
}

impl UrnState {
    /// Probability of drawing an arm-1 ball.
    pub fn prob_arm1(self) -> f64 {
        f64::from(self.balls.1) / f64::from(self.balls.0 + self.balls.1)
    }

    /// Add a ball of the treated arm's type on success, of the opposite type
    /// on failure.
    pub fn update(&mut self, arm: u8, outcome: u8) {
        let reinforced = if outcome == 1 { arm } else { 1 - arm };
        if reinforced == 1 {
            self.balls.1 += 1;
        } else {
            self.balls.0 += 1;
        }
    }
}

/// Full design specification: the rule plus its tunable parameters.
#[derive(Debug, Clone)]
pub struct DesignSpec {
    pub kind: DesignKind,
    pub target: Option<AllocationTarget>,
    pub erade_alpha: f64,
    pub tuning: TuningSchedule,
    /// Beta prior (a0, b0, a1, b1) for the posterior-based designs.
    pub prior: (f64, f64, f64, f64),
    /// Whether burn-in outcomes update the play-the-winner urn.
    pub urn_burnin_update: bool,
    label: &'static str,
}

impl DesignSpec {
    pub fn er() -> Self {
        Self::base(DesignKind::Er, "er")
    }

    pub fn pbb() -> Self {
        Self::base(DesignKind::Pbb, "pbb")
    }

    pub fn brar_u() -> Self {
        Self::base(DesignKind::BrarU, "brar-u")
    }

    pub fn brar_t() -> Self {
        Self::base(DesignKind::BrarT, "brar-t")
    }

    /// `N1`: ERADE toward Neyman allocation.
    pub fn neyman_wald() -> Self {
        Self::with_target(TargetId::NeymanWald, "n1")
    }

    /// `R1`: ERADE toward the failure-minimizing target.
    pub fn rshir_wald() -> Self {
        Self::with_target(TargetId::RshirWald, "r1")
    }

    /// `N0`: score-test Neyman analogue (placeholder formula until configured).
    pub fn neyman_score() -> Self {
        Self::with_target(TargetId::NeymanScore, "n0")
    }

    /// `R0`: score-test failure-minimizing analogue (placeholder formula until
    /// configured).
    pub fn rshir_score() -> Self {
        Self::with_target(TargetId::RshirScore, "r0")
    }

    pub fn ptw() -> Self {
        Self::base(DesignKind::Ptw, "ptw")
    }

    pub fn rptw() -> Self {
        Self::base(DesignKind::Rptw, "rpw")
    }

    /// ERADE toward a fully custom target function.
    pub fn custom_target(rho: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        let mut spec = Self::base(DesignKind::EradeTarget, "custom");
        spec.target = Some(AllocationTarget::new(TargetId::Custom).with_rho_fn(rho));
        spec
    }

    fn base(kind: DesignKind, label: &'static str) -> Self {
        DesignSpec {
            kind,
            target: None,
            erade_alpha: 0.5,
            tuning: TuningSchedule::ThallWathen,
            prior: (1.0, 1.0, 1.0, 1.0),
            urn_burnin_update: true,
            label,
        }
    }

    fn with_target(id: TargetId, label: &'static str) -> Self {
        let mut spec = Self::base(DesignKind::EradeTarget, label);
        spec.target = Some(AllocationTarget::new(id));
        spec
    }

    /// The ten designs in canonical table order.
    pub fn all_ten() -> Vec<DesignSpec> {
        vec![
            Self::er(),
            Self::pbb(),
            Self::brar_u(),
            Self::brar_t(),
            Self::neyman_score(),
            Self::neyman_wald(),
            Self::rshir_score(),
            Self::rshir_wald(),
            Self::ptw(),
            Self::rptw(),
        ]
    }

    /// Canonical lower-case label used in CSV artifacts and CLI flags.
    pub fn label(&self) -> &'static str {
        self.label
    }

    /// Parse a label as used on the command line.
    pub fn from_label(label: &str) -> Result<DesignSpec> {
        match label.to_ascii_lowercase().as_str() {
            "er" => Ok(Self::er()),
            "pbb" => Ok(Self::pbb()),
            "brar-u" | "braru" => Ok(Self::brar_u()),
            "brar-t" | "brart" => Ok(Self::brar_t()),
            "n0" => Ok(Self::neyman_score()),
            "n1" => Ok(Self::neyman_wald()),
            "r0" => Ok(Self::rshir_score()),
            "r1" => Ok(Self::rshir_wald()),
            "ptw" => Ok(Self::ptw()),
            "rpw" | "rptw" => Ok(Self::rptw()),
            other => Err(Error::Configuration(format!("unknown design: {other}"))),
        }
    }

    pub fn with_shrinkage(mut self, shrinkage: Shrinkage) -> Self {
        if let Some(target) = self.target.take() {
            self.target = Some(target.with_shrinkage(shrinkage));
        }
        self
    }

    /// Check internal consistency; called by the engine before simulating.
    pub fn validate(&self) -> Result<()> {
        if !(0.0..1.0).contains(&self.erade_alpha) {
            return Err(Error::Configuration(format!(
                "erade_alpha = {} not in [0,1)",
                self.erade_alpha
            )));
        }
        let (a0, b0, a1, b1) = self.prior;
        if a0 <= 0.0 || b0 <= 0.0 || a1 <= 0.0 || b1 <= 0.0 {
            return Err(Error::Configuration(format!(
                "prior parameters must be positive: {:?}",
                self.prior
            )));
        }
        match self.kind {
            DesignKind::EradeTarget => match &self.target {
                None => Err(Error::Configuration(
                    "ERADE design needs an allocation target".into(),
                )),
                Some(t) if t.id == TargetId::Custom && t.custom_rho.is_none() => Err(
                    Error::Configuration("custom target needs a target function".into()),
                ),
                Some(_) => Ok(()),
            },
            _ => Ok(()),
        }
    }

    /// Whether this design requires an even trial size (exact 1:1 balance).
    pub fn requires_even_n(&self) -> bool {
        self.kind == DesignKind::Er
    }

    /// Placeholder provenance warning for score-test targets running on the
    /// Wald fallback formulas.
    pub fn placeholder_warning(&self) -> Option<String> {
        match &self.target {
            Some(t) if t.is_placeholder() => Some(format!(
                "design {}: score-test target formula not configured; using the Wald-target placeholder",
                self.label
            )),
            _ => None,
        }
    }

    /// Limiting allocation proportion under true rates `(p0, p1)`; this is the
    /// `rho` that reactiveness and allocation error are measured against.
    pub fn limit_proportion(&self, p0: f64, p1: f64) -> Result<f64> {
        match self.kind {
            DesignKind::Er => Ok(0.5),
            // Winner-takes-all designs concentrate on the superior arm.
            DesignKind::Pbb | DesignKind::BrarU | DesignKind::BrarT => Ok(if p1 > p0 {
                1.0
            } else if p1 < p0 {
                0.0
            } else {
                0.5
            }),
            DesignKind::EradeTarget => {
                let target = self
                    .target
                    .as_ref()
                    .ok_or_else(|| Error::UnsupportedLimit("ERADE design without target".into()))?;
                Ok(target.rho(p0, p1))
            }
            // Classical urn limit: arm shares proportional to the other arm's
            // failure rate.
            DesignKind::Ptw | DesignKind::Rptw => {
                let q0 = 1.0 - p0;
                let q1 = 1.0 - p1;
                if q0 + q1 == 0.0 {
                    Ok(0.5)
                } else {
                    Ok(q0 / (q0 + q1))
                }
            }
        }
    }

    /// Probability that the next patient is allocated to arm 1, computed from
    /// the full history prefix (patients `1..=i-1` as parallel assignment and
    /// outcome slices). Burn-in positions are schedule-driven, so this is only
    /// defined for the adaptive phase (`i > 2b`).
    ///
    /// This is the reference dispatcher; the trial engine tracks the same
    /// state incrementally and is cross-checked against it in tests.
    pub fn alloc_prob(
        &self,
        assignments: &[u8],
        outcomes: &[u8],
        scenario: &TrialScenario,
        b: u32,
    ) -> Result<f64> {
        self.validate()?;
        let i = assignments.len() as u32 + 1;
        if assignments.len() != outcomes.len() {
            return Err(Error::Configuration(
                "assignment and outcome histories differ in length".into(),
            ));
        }
        if i <= 2 * b {
            return Err(Error::Configuration(format!(
                "patient {i} is in the burn-in phase (2b = {})",
                2 * b
            )));
        }
        let n1_alloc: u32 = assignments.iter().map(|&a| u32::from(a)).sum();
        let n0_alloc = assignments.len() as u32 - n1_alloc;
        let s1: u32 = assignments
            .iter()
            .zip(outcomes)
            .filter(|(&a, &y)| a == 1 && y == 1)
            .count() as u32;
        let s0: u32 = assignments
            .iter()
            .zip(outcomes)
            .filter(|(&a, &y)| a == 0 && y == 1)
            .count() as u32;

        let prob = match self.kind {
            DesignKind::Er => {
                let half = scenario.n / 2;
                let remaining_ones = f64::from(half.saturating_sub(n1_alloc));
                let remaining = f64::from(scenario.n - (i - 1));
                remaining_ones / remaining
            }
            DesignKind::Pbb => {
                if scenario.p1 >= scenario.p0 {
                    1.0
                } else {
                    0.0
                }
            }
            DesignKind::BrarU => thompson_prob(s0, n0_alloc, s1, n1_alloc, self.prior)?,
            DesignKind::BrarT => {
                let pi = thompson_prob(s0, n0_alloc, s1, n1_alloc, self.prior)?;
                brar_tuned_prob(pi, i, scenario.n, self.tuning)
            }
            DesignKind::EradeTarget => {
                let target = self.target.as_ref().expect("validated");
                let rho_hat = target.estimate(s0, n0_alloc, s1, n1_alloc);
                let prop = f64::from(n1_alloc) / f64::from(i - 1);
                erade_prob(rho_hat, prop, self.erade_alpha)
            }
            DesignKind::Ptw => {
                let last = assignments.len() - 1;
                f64::from(ptw_next(assignments[last], outcomes[last]))
            }
            DesignKind::Rptw => {
                let mut urn = UrnState::default();
                for (j, (&a, &y)) in assignments.iter().zip(outcomes).enumerate() {
                    if self.urn_burnin_update || (j as u32) >= 2 * b {
                        urn.update(a, y);
                    }
                }
                urn.prob_arm1()
            }
        };
        debug_assert!((0.0..=1.0).contains(&prob), "allocation probability {prob}");
        Ok(prob)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn assert_close(actual: f64, expected: f64, tol: f64) {
        assert!(
            (actual - expected).abs() < tol,
            "expected {expected}, got {actual}"
        );
    }

    #[test]
    fn neyman_target_matches_hand_values() {
        assert_close(neyman_rho(0.12, 0.37), 0.5977032967523643, 1e-12);
        assert_close(neyman_rho(0.941, 0.991), 0.286126708167515, 1e-12);
        assert_close(neyman_rho(0.3, 0.3), 0.5, 1e-15);
        // Treatment-arm variance vanishing sends the share to zero.
        assert!(neyman_rho(0.5, 0.9999999) < 1e-3);
        assert_close(neyman_rho(0.0, 0.0), 0.5, 1e-15);
    }

    #[test]
    fn rshir_target_matches_hand_values() {
        assert_close(rshir_rho(0.12, 0.37), 0.6371476997717809, 1e-12);
        assert_close(rshir_rho(0.941, 0.991), 0.5064710630087076, 1e-12);
        assert_close(rshir_rho(0.0, 0.4), 1.0, 1e-15);
        assert_close(rshir_rho(0.0, 0.0), 0.5, 1e-15);
    }

    #[test]
    fn erade_three_point_rule() {
        assert_close(erade_prob(0.6, 0.7, 0.5), 0.30, 1e-12);
        assert_close(erade_prob(0.6, 0.5, 0.5), 0.80, 1e-12);
        assert_close(erade_prob(0.6, 0.6, 0.5), 0.60, 1e-12);
    }

    #[test]
    fn tuned_probability_matches_hand_values() {
        assert_close(
            brar_tuned_prob(0.5, 37, 100, TuningSchedule::ThallWathen),
            0.5,
            1e-12,
        );
        // Exponent 1/2 at the final patient.
        assert_close(
            brar_tuned_prob(0.9, 100, 100, TuningSchedule::ThallWathen),
            0.75,
            1e-9,
        );
        // Zero exponent forces equal allocation regardless of the posterior.
        assert_close(
            brar_tuned_prob(0.9, 1, 100, TuningSchedule::Constant(0.0)),
            0.5,
            1e-12,
        );
        assert_close(
            brar_tuned_prob(0.99, 1, 1000, TuningSchedule::ThallWathen),
            0.5,
            0.01,
        );
    }

    #[test]
    fn play_the_winner_rule() {
        assert_eq!(ptw_next(1, 1), 1);
        assert_eq!(ptw_next(1, 0), 0);
        assert_eq!(ptw_next(0, 0), 1);
        assert_eq!(ptw_next(0, 1), 0);
    }

    #[test]
    fn urn_draws_and_updates() {
        let mut urn = UrnState::default();
        assert_close(urn.prob_arm1(), 0.5, 1e-15);
        urn.update(1, 1);
        assert_eq!(urn.balls, (1, 2));
        urn.update(1, 0);
        assert_eq!(urn.balls, (2, 2));
        urn.update(0, 0);
        assert_eq!(urn.balls, (2, 3));
    }

    #[test]
    fn shrinkage_rules() {
        assert_close(Shrinkage::RawMle.estimate(0, 2), 0.0, 1e-15);
        assert_close(Shrinkage::AddHalf.estimate(0, 2), 0.5 / 3.0, 1e-15);
        assert_close(Shrinkage::AddHalf.estimate(2, 2), 2.5 / 3.0, 1e-15);
    }

    #[test]
    fn raw_mle_pins_target_at_extremes() {
        // One arm all failures under the raw MLE: the Neyman estimate sends
        // everything to the arm that still shows variability.
        let target = AllocationTarget::new(TargetId::NeymanWald);
        assert_close(target.estimate(0, 2, 1, 2), 1.0, 1e-15);
        // Both arms degenerate: fall back to equal allocation.
        assert_close(target.estimate(0, 2, 0, 2), 0.5, 1e-15);
        assert_close(target.estimate(2, 2, 2, 2), 0.5, 1e-15);
    }

    #[test]
    fn score_targets_flag_their_placeholder() {
        let n0 = DesignSpec::neyman_score();
        assert!(n0.placeholder_warning().is_some());
        assert_close(
            n0.target.as_ref().unwrap().rho(0.12, 0.37),
            neyman_rho(0.12, 0.37),
            1e-15,
        );

        let r0 = DesignSpec::rshir_score();
        assert_close(
            r0.target.as_ref().unwrap().rho(0.12, 0.37),
            rshir_rho(0.12, 0.37),
            1e-15,
        );

        let configured = {
            let mut spec = DesignSpec::rshir_score();
            spec.target =
                Some(AllocationTarget::new(TargetId::RshirScore).with_rho_fn(|_, _| 0.64));
            spec
        };
        assert!(configured.placeholder_warning().is_none());
        assert_close(
            configured.target.as_ref().unwrap().rho(0.6, 0.8),
            0.64,
            1e-15,
        );
    }

    #[test]
    fn limit_proportions() {
        assert_close(
            DesignSpec::er().limit_proportion(0.2, 0.6).unwrap(),
            0.5,
            1e-15,
        );
        assert_close(
            DesignSpec::pbb().limit_proportion(0.2, 0.6).unwrap(),
            1.0,
            1e-15,
        );
        assert_close(
            DesignSpec::brar_u().limit_proportion(0.6, 0.2).unwrap(),
            0.0,
            1e-15,
        );
        assert_close(
            DesignSpec::brar_t().limit_proportion(0.3, 0.3).unwrap(),
            0.5,
            1e-15,
        );
        assert_close(
            DesignSpec::neyman_wald()
                .limit_proportion(0.12, 0.37)
                .unwrap(),
            0.5977032967523643,
            1e-12,
        );
        // Urn limit q0/(q0+q1).
        assert_close(
            DesignSpec::ptw().limit_proportion(0.12, 0.37).unwrap(),
            0.88 / (0.88 + 0.63),
            1e-12,
        );
        assert_close(
            DesignSpec::rptw().limit_proportion(1.0, 1.0).unwrap(),
            0.5,
            1e-15,
        );
    }

    #[test]
    fn labels_round_trip() {
        for design in DesignSpec::all_ten() {
            let parsed = DesignSpec::from_label(design.label()).unwrap();
            assert_eq!(parsed.kind, design.kind);
            assert_eq!(parsed.label(), design.label());
        }
        assert!(DesignSpec::from_label("nope").is_err());
    }

    #[test]
    fn validation_catches_inconsistent_specs() {
        let mut missing = DesignSpec::neyman_wald();
        missing.target = None;
        assert!(missing.validate().is_err());

        let mut bad_alpha = DesignSpec::pbb();
        bad_alpha.erade_alpha = 1.0;
        assert!(bad_alpha.validate().is_err());

        let mut bad_prior = DesignSpec::brar_u();
        bad_prior.prior = (1.0, 0.0, 1.0, 1.0);
        assert!(bad_prior.validate().is_err());
    }

    proptest! {
        #[test]
        fn wald_targets_are_symmetric(p0 in 0.001f64..0.999, p1 in 0.001f64..0.999) {
            prop_assert!((neyman_rho(p0, p1) + neyman_rho(p1, p0) - 1.0).abs() < 1e-12);
            prop_assert!((rshir_rho(p0, p1) + rshir_rho(p1, p0) - 1.0).abs() < 1e-12);
        }

        #[test]
        fn erade_output_lies_in_its_three_point_set(
            rho in 0.01f64..0.99,
            prop in 0.0f64..1.0,
            alpha in 0.0f64..0.999,
        ) {
            let p = erade_prob(rho, prop, alpha);
            let expected = [alpha * rho, rho, 1.0 - alpha * (1.0 - rho)];
            prop_assert!(
                expected.iter().any(|e| (p - e).abs() < 1e-15),
                "got {p}, expected one of {expected:?}"
            );
        }

        #[test]
        fn tuned_probability_stays_in_unit_interval(
            pi in 0.0f64..=1.0,
            i in 1u32..=400,
        ) {
            let p = brar_tuned_prob(pi, i, 400, TuningSchedule::ThallWathen);
            prop_assert!((0.0..=1.0).contains(&p));
        }
    }
}
