//! Machine-readable experiment reports: per-check records plus a reproducible
//! configuration echo.

use serde::{Deserialize, Serialize};

/// One named numerical check.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub measured: f64,
    pub expected: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl CheckResult {
    /// |measured - expected| <= tolerance.
    pub fn within(name: &str, measured: f64, expected: f64, tolerance: f64) -> Self {
        Self {
            name: name.to_string(),
            measured,
            expected,
            tolerance,
            pass: (measured - expected).abs() <= tolerance,
        }
    }

    /// measured <= bound + tolerance.
    pub fn at_most(name: &str, measured: f64, bound: f64, tolerance: f64) -> Self {
        Self {
            name: name.to_string(),
            measured,
            expected: bound,
            tolerance,
            pass: measured <= bound + tolerance,
        }
    }

    /// measured >= bound - tolerance.
    pub fn at_least(name: &str, measured: f64, bound: f64, tolerance: f64) -> Self {
        Self {
            name: name.to_string(),
            measured,
            expected: bound,
            tolerance,
            pass: measured >= bound - tolerance,
        }
    }

    /// A boolean assertion rendered as 1.0 / 0.0.
    pub fn flag(name: &str, condition: bool) -> Self {
        Self {
            name: name.to_string(),
            measured: if condition { 1.0 } else { 0.0 },
            expected: 1.0,
            tolerance: 0.0,
            pass: condition,
        }
    }
}

/// Structured record of one experiment run. `config` echoes every resolved
/// parameter so the run can be reproduced bit-for-bit; `wall_time_s` is the
/// only field allowed to differ between identical runs.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub subcommand: String,
    /// The identity or bound this experiment checks, as a formula.
    pub anchor: String,
    pub config: serde_json::Value,
    pub results: Vec<CheckResult>,
    pub seed: u64,
    pub wall_time_s: f64,
    pub pass: bool,
}

impl ExperimentReport {
    pub fn new(
        subcommand: &str,
        anchor: &str,
        config: serde_json::Value,
        results: Vec<CheckResult>,
        seed: u64,
        wall_time_s: f64,
    ) -> Self {
        let pass = results.iter().all(|r| r.pass);
        Self {
            subcommand: subcommand.to_string(),
            anchor: anchor.to_string(),
            config,
            results,
            seed,
            wall_time_s,
            pass,
        }
    }

    /// The report with wall time zeroed, for byte-identical comparisons.
    pub fn without_wall_time(&self) -> Self {
        let mut clone = self.clone();
        clone.wall_time_s = 0.0;
        clone
    }
}
