use std::time::Instant;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::config::RunConfig;

/// How a check's value is judged against its tolerance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    /// `|value| ≤ tolerance`.
    AbsAtMost,
    /// `value ≥ −tolerance` (minimum eigenvalues, positivity integrals).
    AtLeastNegTol,
}

impl Rule {
    pub fn judge(self, value: f64, tolerance: f64) -> bool {
        match self {
            Rule::AbsAtMost => value.abs() <= tolerance,
            Rule::AtLeastNegTol => value >= -tolerance,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReportRecord {
    pub check_name: String,
    /// SHA-256 of the command, check name, `d`, seed and check inputs.
    pub inputs_digest: String,
    pub value: f64,
    pub tolerance: f64,
    pub rule: Rule,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    pub d: usize,
    pub seed: u64,
    pub records: Vec<ReportRecord>,
}

impl Report {
    pub fn new(command: &str, cfg: &RunConfig) -> Self {
        Report {
            command: command.to_string(),
            d: cfg.d,
            seed: cfg.seed,
            records: Vec::new(),
        }
    }

    pub fn all_pass(&self) -> bool {
        self.records.iter().all(|r| r.pass)
    }

    pub fn failures(&self) -> Vec<&str> {
        self.records.iter().filter(|r| !r.pass).map(|r| r.check_name.as_str()).collect()
    }

    pub fn record(&self, name: &str) -> Option<&ReportRecord> {
        self.records.iter().find(|r| r.check_name == name)
    }

    /// Runs one check. `inputs` describes what was fed in (sizes, trial
    /// counts) and enters the digest; the tolerance is `default_tol` unless
    /// overridden under `name` in the config.
    pub fn check(
        &mut self,
        cfg: &RunConfig,
        name: &str,
        inputs: &str,
        default_tol: f64,
        rule: Rule,
        run: impl FnOnce() -> anyhow::Result<f64>,
    ) -> anyhow::Result<f64> {
        let started = Instant::now();
        let value = run()?;
        let elapsed = started.elapsed().as_secs_f64();
        let tolerance = cfg.tolerance(name, default_tol);
        let digest = Sha256::digest(format!("{}|{}|d={}|seed={}|{}", self.command, name, cfg.d, cfg.seed, inputs));
        self.records.push(ReportRecord {
            check_name: name.to_string(),
            inputs_digest: hex::encode(digest),
            value,
            tolerance,
            rule,
            pass: !value.is_nan() && rule.judge(value, tolerance),
            wall_time: cfg.timing.then_some(elapsed),
        });
        Ok(value)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}
