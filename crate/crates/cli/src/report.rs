//! JSON report envelope shared by every subcommand.

use std::time::Duration;

use gl_decode_core::oracle::{GuesserRate, RateEstimate};
use serde::Serialize;
use serde_json::Value;

pub const SCHEMA_VERSION: u32 = 1;

/// Top-level report. `duration_ms` is the only field that varies between
/// runs with the same arguments.
#[derive(Debug, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub command: &'static str,
    pub seed: u64,
    pub parameters: Value,
    pub instance: Option<Value>,
    pub result: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<Vec<TrialRecord>>,
    pub duration_ms: u64,
}

impl Report {
    pub fn new(command: &'static str, seed: u64, parameters: Value) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            command,
            seed,
            parameters,
            instance: None,
            result: Value::Null,
            trials: None,
            duration_ms: 0,
        }
    }

    pub fn finish(mut self, elapsed: Duration) -> Self {
        self.duration_ms = elapsed.as_millis() as u64;
        self
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct Estimate {
    pub estimate: f64,
    pub std_error: f64,
    pub ci95: [f64; 2],
}

impl From<RateEstimate> for Estimate {
    fn from(r: RateEstimate) -> Self {
        Self {
            estimate: r.estimate,
            std_error: r.std_error,
            ci95: [r.ci_low, r.ci_high],
        }
    }
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct GuesserRateSummary {
    pub samples: u64,
    pub rate: Estimate,
    pub correlation: f64,
    pub correlation_se: f64,
    pub second_moment: f64,
    pub second_moment_se: f64,
}

impl From<GuesserRate> for GuesserRateSummary {
    fn from(g: GuesserRate) -> Self {
        Self {
            samples: g.rate.trials,
            rate: g.rate.into(),
            correlation: g.correlation,
            correlation_se: g.correlation_se,
            second_moment: g.second_moment,
            second_moment_se: g.second_moment_se,
        }
    }
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct Reference {
    /// Square of the guesser family's calibrated correlation.
    pub nominal_c_squared: f64,
    pub guesser_rate: Option<GuesserRateSummary>,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct Bound {
    pub value: f64,
    pub met: bool,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct InvertAggregates {
    pub trials: u64,
    pub successes: u64,
    pub success_rate: f64,
    pub ci95: [f64; 2],
    pub mean_queries: f64,
    pub total_queries: u64,
    /// Randomized-k trials whose dimension draw failed.
    pub draw_failures: u64,
    pub reference: Reference,
    pub bound: Option<Bound>,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct TrialRecord {
    pub trial: u64,
    pub secret: String,
    pub k: Option<usize>,
    pub l: Option<usize>,
    pub draw_failure: Option<String>,
    pub queries: u64,
    pub success: bool,
    pub hit_index: Option<u64>,
    pub verified: Option<usize>,
}

/// Drops the `duration_ms` line so reports can be compared byte for byte.
pub fn strip_duration(json: &str) -> String {
    json.lines()
        .filter(|l| !l.trim_start().starts_with("\"duration_ms\""))
        .collect::<Vec<_>>()
        .join("\n")
}
