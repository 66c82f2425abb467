//! Sequential trial engine: balanced burn-in followed by adaptive allocation.
//!
//! Patients arrive one at a time and outcomes are observed immediately. The
//! first `2b` patients follow a randomly permuted balanced schedule; every
//! later patient is assigned arm 1 with the probability the design computes
//! from all accrued data, burn-in outcomes included.

use crate::design::{brar_tuned_prob, erade_prob, ptw_next, DesignKind, DesignSpec, UrnState};
use crate::error::Error;
use crate::rng::RngStream;
use crate::scenario::TrialScenario;
use crate::thompson::thompson_prob;
use crate::Result;

/// Balanced burn-in assignment plan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BurnInPlan {
    pub b: u32,
    /// Arm indicators for positions `1..=2b`: exactly `b` of each arm.
    pub schedule: Vec<u8>,
}

/// A uniformly random permutation of `b` zeros and `b` ones.
pub fn make_burnin_schedule(b: u32, rng: &mut RngStream) -> Result<BurnInPlan> {
    if b < 2 {
        return Err(Error::InvalidBurnIn(b));
    }
    let mut schedule = vec![0u8; 2 * b as usize];
    for slot in schedule.iter_mut().skip(b as usize) {
        *slot = 1;
    }
    rng.shuffle(&mut schedule);
    Ok(BurnInPlan { b, schedule })
}

/// One realized trial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrialPath {
    /// Arm indicator per patient.
    pub assignments: Vec<u8>,
    /// Observed outcome per patient.
    pub outcomes: Vec<u8>,
    /// Patients allocated to arm 1 after each enrollment.
    pub running_n1: Vec<u32>,
    /// Success counts `(S0, S1)`.
    pub successes: (u32, u32),
    /// Final allocation counts `(n0, n1)`.
    pub alloc_counts: (u32, u32),
}

impl TrialPath {
    pub fn n(&self) -> u32 {
        self.assignments.len() as u32
    }

    /// Final arm-1 allocation proportion.
    pub fn prop_arm1(&self) -> f64 {
        f64::from(self.alloc_counts.1) / f64::from(self.n())
    }
}

/// Simulate one trial of `scenario.n` patients under `design` with burn-in `b`
/// per arm.
pub fn simulate_trial(
    scenario: &TrialScenario,
    design: &DesignSpec,
    b: u32,
    rng: &mut RngStream,
) -> Result<TrialPath> {
    let plan = plan_burnin(scenario, design, b, rng)?;
    run(scenario, design, &plan, rng, None)
}

/// Simulate against a fixed per-patient outcome tape instead of Bernoulli
/// draws. Allocation randomness still comes from `rng`; fully deterministic
/// designs ignore it, which makes this the natural harness for hand-traced
/// oracles and purity checks.
pub fn simulate_trial_on_tape(
    scenario: &TrialScenario,
    design: &DesignSpec,
    plan: &BurnInPlan,
    tape: &[u8],
    rng: &mut RngStream,
) -> Result<TrialPath> {
    if tape.len() != scenario.n as usize {
        return Err(Error::Configuration(format!(
            "outcome tape length {} does not match n = {}",
            tape.len(),
            scenario.n
        )));
    }
    check_feasible(scenario, design, plan.b)?;
    run(scenario, design, plan, rng, Some(tape))
}

fn plan_burnin(
    scenario: &TrialScenario,
    design: &DesignSpec,
    b: u32,
    rng: &mut RngStream,
) -> Result<BurnInPlan> {
    check_feasible(scenario, design, b)?;
    make_burnin_schedule(b, rng)
}

fn check_feasible(scenario: &TrialScenario, design: &DesignSpec, b: u32) -> Result<()> {
    design.validate()?;
    if b < 2 {
        return Err(Error::InvalidBurnIn(b));
    }
    if 2 * b > scenario.n {
        return Err(Error::InfeasibleBurnIn {
            twice_b: 2 * b,
            n: scenario.n,
        });
    }
    if design.requires_even_n() && !scenario.n.is_multiple_of(2) {
        return Err(Error::InvalidScenario(format!(
            "design {} enforces exact 1:1 balance and needs an even n, got {}",
            design.label(),
            scenario.n
        )));
    }
    Ok(())
}

fn run(
    scenario: &TrialScenario,
    design: &DesignSpec,
    plan: &BurnInPlan,
    rng: &mut RngStream,
    tape: Option<&[u8]>,
) -> Result<TrialPath> {
    let n = scenario.n as usize;
    let twice_b = plan.schedule.len();
    let mut assignments = Vec::with_capacity(n);
    let mut outcomes = Vec::with_capacity(n);
    let mut running_n1 = Vec::with_capacity(n);

    // Incremental design state; kept in lockstep with the history vectors.
    let mut n1_alloc: u32 = 0;
    let mut n0_alloc: u32 = 0;
    let mut s1: u32 = 0;
    let mut s0: u32 = 0;
    let mut urn = UrnState::default();

    for i in 1..=n as u32 {
        let arm = if (i as usize) <= twice_b {
            plan.schedule[i as usize - 1]
        } else {
            let p = adaptive_prob(
                scenario,
                design,
                i,
                n1_alloc,
                n0_alloc,
                s1,
                s0,
                &urn,
                &assignments,
                &outcomes,
            )?;
            u8::from(rng.bernoulli(p))
        };

        let p_response = if arm == 1 { scenario.p1 } else { scenario.p0 };
        let outcome = match tape {
            Some(t) => t[i as usize - 1],
            None => u8::from(rng.bernoulli(p_response)),
        };

        if arm == 1 {
            n1_alloc += 1;
            s1 += u32::from(outcome);
        } else {
            n0_alloc += 1;
            s0 += u32::from(outcome);
        }
        if design.urn_burnin_update || (i as usize) > twice_b {
            urn.update(arm, outcome);
        }

        assignments.push(arm);
        outcomes.push(outcome);
        running_n1.push(n1_alloc);
    }

    Ok(TrialPath {
        assignments,
        outcomes,
        running_n1,
        successes: (s0, s1),
        alloc_counts: (n0_alloc, n1_alloc),
    })
}

#[allow(clippy::too_many_arguments)]
fn adaptive_prob(
    scenario: &TrialScenario,
    design: &DesignSpec,
    i: u32,
    n1_alloc: u32,
    n0_alloc: u32,
    s1: u32,
    s0: u32,
    urn: &UrnState,
    assignments: &[u8],
    outcomes: &[u8],
) -> Result<f64> {
    let prob = match design.kind {
        DesignKind::Er => {
            let remaining_ones = f64::from((scenario.n / 2).saturating_sub(n1_alloc));
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
        DesignKind::BrarU => thompson_prob(s0, n0_alloc, s1, n1_alloc, design.prior)?,
        DesignKind::BrarT => {
            let pi = thompson_prob(s0, n0_alloc, s1, n1_alloc, design.prior)?;
            brar_tuned_prob(pi, i, scenario.n, design.tuning)
        }
        DesignKind::EradeTarget => {
            let target = design.target.as_ref().expect("validated");
            let rho_hat = target.estimate(s0, n0_alloc, s1, n1_alloc);
            let prop = f64::from(n1_alloc) / f64::from(i - 1);
            erade_prob(rho_hat, prop, design.erade_alpha)
        }
        DesignKind::Ptw => {
            let last = assignments.len() - 1;
            f64::from(ptw_next(assignments[last], outcomes[last]))
        }
        DesignKind::Rptw => urn.prob_arm1(),
    };
    Ok(prob)
}
