//! Trial configuration.

use crate::error::Error;
use crate::Result;
use serde::{Deserialize, Serialize};

/// True state of the world plus trial-level constants.
///
/// `p0` and `p1` are the control and treatment response probabilities, `n` the
/// total number of patients, `n_half` the saturation parameter of the burn-in
/// budget (the sample size at which half the patients would be available for
/// burn-in), and `alpha` the two-sided significance level.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrialScenario {
    pub p0: f64,
    pub p1: f64,
    pub n: u32,
    pub n_half: f64,
    pub alpha: f64,
}

impl TrialScenario {
    /// Scenario with default `n_half` = 1000 and `alpha` = 0.05.
    pub fn new(p0: f64, p1: f64, n: u32) -> Result<Self> {
        TrialScenario {
            p0,
            p1,
            n,
            n_half: 1000.0,
            alpha: 0.05,
        }
        .validated()
    }

    /// Replace the saturation parameter.
    pub fn with_n_half(mut self, n_half: f64) -> Result<Self> {
        self.n_half = n_half;
        self.validated()
    }

    /// Replace the significance level.
    pub fn with_alpha(mut self, alpha: f64) -> Result<Self> {
        self.alpha = alpha;
        self.validated()
    }

    /// Same trial constants with both arms at `p`; used for null (type I
    /// error) simulation runs.
    pub fn at_null(mut self, p: f64) -> Result<Self> {
        self.p0 = p;
        self.p1 = p;
        self.validated()
    }

    fn validated(self) -> Result<Self> {
        if !(0.0..=1.0).contains(&self.p0) || !self.p0.is_finite() {
            return Err(Error::InvalidScenario(format!(
                "p0 = {} not in [0,1]",
                self.p0
            )));
        }
        if !(0.0..=1.0).contains(&self.p1) || !self.p1.is_finite() {
            return Err(Error::InvalidScenario(format!(
                "p1 = {} not in [0,1]",
                self.p1
            )));
        }
        if self.n < 4 {
            return Err(Error::InvalidScenario(format!(
                "n = {} too small; the minimal burn-in of 2 per arm needs n >= 4",
                self.n
            )));
        }
        if self.n_half < 1.0 || !self.n_half.is_finite() {
            return Err(Error::InvalidScenario(format!(
                "n_half = {} must be a finite value >= 1",
                self.n_half
            )));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::InvalidScenario(format!(
                "alpha = {} not in (0,1)",
                self.alpha
            )));
        }
        Ok(self)
    }
}
