//! Error type shared across the crate.

use thiserror::Error;

/// Unified error for scenario validation, design configuration, estimation,
/// and artifact I/O.
#[derive(Debug, Error)]
pub enum Error {
    /// A scenario field is out of its domain (probabilities, sizes, alpha).
    #[error("invalid scenario: {0}")]
    InvalidScenario(String),

    /// A burn-in of fewer than two patients per arm was requested.
    #[error("invalid burn-in: b = {0}, need b >= 2")]
    InvalidBurnIn(u32),

    /// The requested burn-in does not fit in the trial.
    #[error("infeasible burn-in: 2b = {twice_b} exceeds n = {n}")]
    InfeasibleBurnIn { twice_b: u32, n: u32 },

    /// A design specification is inconsistent (missing target, bad prior, ...).
    #[error("design configuration: {0}")]
    Configuration(String),

    /// A metrics run needs a limiting proportion the design cannot supply.
    #[error("unsupported limit: {0}")]
    UnsupportedLimit(String),

    /// The standardized effect is an indeterminate 0/0 form (p0 = p1 in {0,1}).
    #[error("standardized effect undefined: p0 = p1 = {0} gives a 0/0 form")]
    UndefinedEffect(f64),

    /// A test statistic was requested for an arm with no patients.
    #[error("degenerate arm: n{arm} = 0")]
    DegenerateArm { arm: u8 },

    /// Unknown table identifier passed to the reproduction harness.
    #[error("unknown table id: {0}")]
    UnknownTable(String),

    /// A scenario profile file failed to parse.
    #[error("profile: {0}")]
    Profile(String),

    /// Artifact or profile I/O failure.
    #[error(transparent)]
    Io(#[from] std::io::Error),

    /// Artifact serialization failure.
    #[error("serialize: {0}")]
    Serialize(String),
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Serialize(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Serialize(e.to_string())
    }
}

impl Error {
    /// True for errors that indicate bad user input rather than a runtime
    /// failure; the CLI maps these to exit code 2.
    pub fn is_validation(&self) -> bool {
        !matches!(self, Error::Io(_) | Error::Serialize(_))
    }
}
