//! Machine-readable reports.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::config::Command;
use crate::constructors::{ApproxCertificate, CriterionInstance};
use crate::dirichlet::ReturnSequence;
use crate::oracle::{CertificateCheck, ProbeOutcome};
use crate::shift_analysis::{Decision, SweepCell};

pub const REPORT_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Everything but `timings` is a function of the echoed config.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub version: String,
    pub command: Command,
    /// The config as read, with any `--seed` override applied. A list when
    /// the file was a batch.
    pub config: Value,
    /// One result per config entry, a list when the file was a batch.
    pub results: Value,
    pub timings: Timings,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub total_ms: f64,
    pub entries_ms: Vec<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    BudgetExhausted,
    ReturnsExhausted,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecideResult {
    pub status: Status,
    pub rs: Vec<usize>,
    /// Scalars after folding constant weights in; absent for varying weights.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambdas: Option<Vec<EncodedComplex>>,
    /// Position of each sorted member in the input list.
    pub order: Vec<usize>,
    pub s: Option<Decision>,
    pub d: Option<Decision>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub condition_sweep: Option<Vec<SweepCell>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EncodedComplex(#[serde(with = "crate::json::complex")] pub Complex64);

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstructResult {
    pub status: Status,
    pub eps: f64,
    pub budget: u64,
    pub certificate: Option<ApproxCertificate>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub instance: Option<CriterionInstance>,
    pub check: Option<CertificateCheck>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DirichletResult {
    pub status: Status,
    pub angles: Vec<f64>,
    pub eps_schedule: Vec<f64>,
    pub n_max: u64,
    pub sequence: ReturnSequence,
    /// Stage that found nothing, when exhausted.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failed_stage: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrbitResult {
    pub status: Status,
    #[serde(rename = "N")]
    pub big_n: u64,
    pub best_n: u64,
    pub score: f64,
    pub errors_at_best: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace_rows: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbeResult {
    pub status: Status,
    pub seed: u64,
    pub outcome: ProbeOutcome,
}

/// One row of the CSV orbit trace.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub n: u64,
    pub operator_index: usize,
    pub distance_to_target: f64,
}
