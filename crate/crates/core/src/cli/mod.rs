//! The `sunidyn` command line.
//!
//! `sunidyn <command> --config <path> [--out <path>] [--seed <u64>]`
//!
//! Exit codes: 0 on success, 2 on usage errors (malformed config, violated
//! preconditions; nothing is written), 3 when a budget or return-time search
//! ran out (the report carries the partial results). Diagnostics go to
//! standard error; the report goes to `--out`, the config's `output`, or
//! standard output.

pub mod config;
pub mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use serde_json::Value;

pub use config::{parse_config, Command, ElementInput, ExperimentConfig};
pub use report::{Report, Status, TraceRow};

use crate::constructors::{build_certificate_traced, ApproxRequest};
use crate::dirichlet::{default_schedule, find_return_sequence, UnimodularSet};
use crate::error::{usage, Error, Result};
use crate::operators::apply;
use crate::oracle::{best_simultaneous_index, brute_force_certificate_check, joint_errors, transitivity_probe};
use crate::shift_analysis::{condition_iii_sweep, decide_d_unweighted, decide_s_unweighted, ShiftFamily};
use config::{DEFAULT_BIG_N, DEFAULT_BUDGET, DEFAULT_EPS, DEFAULT_N_MAX, DEFAULT_STAGES, DEFAULT_TRIALS};
use report::*;

pub const EXIT_OK: u8 = 0;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_EXHAUSTED: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "sunidyn", version, about = "Simultaneous universality experiments for operator families")]
pub struct Cli {
    /// What to run.
    #[arg(value_enum)]
    pub command: Command,
    /// JSON config: one object, or a list of objects run as a batch.
    #[arg(long)]
    pub config: PathBuf,
    /// Where to write the report (default: the config's `output`, else stdout).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Overrides `seed` in every config entry.
    #[arg(long)]
    pub seed: Option<u64>,
}

/// Result of one config entry.
#[derive(Clone, Debug, PartialEq)]
pub struct RunOutput {
    pub status: Status,
    pub results: Value,
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report values serialize")
}

/// Runs one experiment.
pub fn run(cfg: &ExperimentConfig) -> Result<RunOutput> {
    match cfg.command {
        Some(Command::Decide) => run_decide(cfg),
        Some(Command::Construct) => run_construct(cfg),
        Some(Command::Dirichlet) => run_dirichlet(cfg),
        Some(Command::Orbit) => run_orbit(cfg),
        Some(Command::Probe) => run_probe(cfg),
        None => usage("config names no command"),
    }
}

fn run_decide(cfg: &ExperimentConfig) -> Result<RunOutput> {
    let family = match (&cfg.operators, &cfg.rs, &cfg.lambdas) {
        (Some(_), None, None) => ShiftFamily::from_operators(cfg.operators()?)?,
        (None, Some(rs), Some(l)) => ShiftFamily::unweighted(rs, l)?,
        _ => return usage("decide needs either `operators` or both `rs` and `lambdas`"),
    };
    let mut order: Vec<usize> = (0..family.members.len()).collect();
    order.sort_by_key(|&i| family.members[i].r);
    let sorted = ShiftFamily::new(order.iter().map(|&i| family.members[i].clone()).collect())?;
    let rs = sorted.rs();
    let out = match sorted.effective_lambdas() {
        Some(lambdas) => DecideResult {
            status: Status::Ok,
            s: Some(decide_s_unweighted(&rs, &lambdas)?),
            d: Some(decide_d_unweighted(&rs, &lambdas)?),
            lambdas: Some(lambdas.into_iter().map(EncodedComplex).collect()),
            rs,
            order,
            condition_sweep: None,
        },
        None => {
            if rs.windows(2).any(|w| w[0] == w[1]) {
                return usage("families with varying weights need strictly increasing powers");
            }
            let sweep = condition_iii_sweep(&sorted, cfg.k_max.unwrap_or(3), cfg.m_max.unwrap_or(1000))?;
            DecideResult {
                status: Status::Ok,
                rs,
                lambdas: None,
                order,
                s: None,
                d: None,
                condition_sweep: Some(sweep),
            }
        }
    };
    Ok(RunOutput {
        status: out.status,
        results: to_value(&out),
    })
}

fn run_construct(cfg: &ExperimentConfig) -> Result<RunOutput> {
    let ops = cfg.operators()?.to_vec();
    let target = cfg.required_element("target", &cfg.target)?;
    let eps = cfg.eps.unwrap_or(DEFAULT_EPS);
    let budget = cfg.budget.unwrap_or(DEFAULT_BUDGET);
    let metric = cfg.metric()?;
    let mut req = ApproxRequest::new(ops.clone(), target.clone(), eps, budget).with_metric(metric);
    req.options = cfg.build_options();
    if let Some(a) = cfg.element("anchor", &cfg.anchor)? {
        req = req.with_anchor(a);
    }
    let out = match build_certificate_traced(&req) {
        Ok((cert, instance)) => {
            let check = brute_force_certificate_check(&cert, &ops, &target, eps, &metric);
            ConstructResult {
                status: Status::Ok,
                eps,
                budget,
                certificate: Some(cert),
                instance: Some(instance),
                check: Some(check),
                detail: None,
            }
        }
        Err(Error::BudgetExhausted { best, detail, .. }) => {
            let best = best.map(|b| *b);
            let check = best
                .as_ref()
                .map(|c| brute_force_certificate_check(c, &ops, &target, eps, &metric));
            ConstructResult {
                status: Status::BudgetExhausted,
                eps,
                budget,
                certificate: best,
                instance: None,
                check,
                detail: Some(detail),
            }
        }
        Err(e) => return Err(e),
    };
    Ok(RunOutput {
        status: out.status,
        results: to_value(&out),
    })
}

fn run_dirichlet(cfg: &ExperimentConfig) -> Result<RunOutput> {
    let set = match (&cfg.angles, &cfg.scalars) {
        (Some(a), None) => UnimodularSet::new(a.clone())?,
        (None, Some(s)) => UnimodularSet::from_scalars(s)?,
        _ => return usage("dirichlet needs exactly one of `angles` and `scalars`"),
    };
    let schedule = match (&cfg.eps_schedule, cfg.stages) {
        (Some(_), Some(_)) => return usage("give `eps_schedule` or `stages`, not both"),
        (Some(s), None) => s.clone(),
        (None, stages) => default_schedule(stages.unwrap_or(DEFAULT_STAGES)),
    };
    let n_max = cfg.n_max.unwrap_or(DEFAULT_N_MAX);
    let (status, sequence, failed_stage) = match find_return_sequence(&set, &schedule, n_max) {
        Ok(seq) => (Status::Ok, seq, None),
        Err(Error::ReturnsExhausted { partial, stage, .. }) => (Status::ReturnsExhausted, partial, Some(stage)),
        Err(e) => return Err(e),
    };
    let out = DirichletResult {
        status,
        angles: set.angles().to_vec(),
        eps_schedule: schedule,
        n_max,
        sequence,
        failed_stage,
    };
    Ok(RunOutput {
        status,
        results: to_value(&out),
    })
}

fn run_orbit(cfg: &ExperimentConfig) -> Result<RunOutput> {
    let ops = cfg.operators()?;
    let x = cfg.required_element("x", &cfg.x)?;
    let target = cfg.required_element("target", &cfg.target)?;
    let metric = cfg.metric()?;
    let big_n = cfg.big_n.unwrap_or(DEFAULT_BIG_N);
    let (best_n, score) = best_simultaneous_index(ops, &x, &target, big_n, &metric)?;
    let errors_at_best = joint_errors(ops, &x, best_n, &target, &metric)?;
    let trace_rows = match &cfg.trace {
        Some(path) => {
            let rows = orbit_trace(ops, &x, &target, big_n, &metric)?;
            write_trace(Path::new(path), &rows)?;
            Some(rows.len())
        }
        None => None,
    };
    let out = OrbitResult {
        status: Status::Ok,
        big_n,
        best_n,
        score,
        errors_at_best,
        trace_rows,
    };
    Ok(RunOutput {
        status: Status::Ok,
        results: to_value(&out),
    })
}

/// `d(T_j^n x, target)` for `n = 1..=big_n` and every member.
pub fn orbit_trace(
    ops: &[crate::operators::OperatorSpec],
    x: &crate::space::Element,
    target: &crate::space::Element,
    big_n: u64,
    metric: &crate::space::Metric,
) -> Result<Vec<TraceRow>> {
    let mut rows = Vec::with_capacity(big_n as usize * ops.len());
    let mut current = vec![x.clone(); ops.len()];
    for n in 1..=big_n {
        for (j, (op, cur)) in ops.iter().zip(current.iter_mut()).enumerate() {
            *cur = apply(op, cur)?;
            rows.push(TraceRow {
                n,
                operator_index: j,
                distance_to_target: metric.distance(cur, target)?,
            });
        }
    }
    Ok(rows)
}

fn write_trace(path: &Path, rows: &[TraceRow]) -> Result<()> {
    let fail = |e: &dyn std::fmt::Display| Error::Usage(format!("cannot write trace {}: {e}", path.display()));
    let mut w = csv::Writer::from_path(path).map_err(|e| fail(&e))?;
    for r in rows {
        w.serialize(r).map_err(|e| fail(&e))?;
    }
    w.flush().map_err(|e| fail(&e))
}

fn run_probe(cfg: &ExperimentConfig) -> Result<RunOutput> {
    let ops = cfg.operators()?;
    let (Some(u), Some(v)) = (&cfg.u, &cfg.v) else {
        return usage("probe needs balls `u` and `v`");
    };
    let seed = cfg.seed.unwrap_or(0);
    let big_n = cfg.big_n.unwrap_or(DEFAULT_BIG_N);
    let outcome = transitivity_probe(ops, u, v, big_n, cfg.trials.unwrap_or(DEFAULT_TRIALS), seed)?;
    let out = ProbeResult {
        status: Status::Ok,
        seed,
        outcome,
    };
    Ok(RunOutput {
        status: Status::Ok,
        results: to_value(&out),
    })
}

/// Parses and runs a whole config document. Usage errors in any entry abort
/// before a report exists.
pub fn run_document(text: &str, command: Command, seed: Option<u64>) -> Result<(Report, u8)> {
    let file = parse_config(text, command, seed)?;
    let start = Instant::now();
    let mut results = Vec::with_capacity(file.entries.len());
    let mut entries_ms = Vec::with_capacity(file.entries.len());
    let mut exit = EXIT_OK;
    for (i, (_, cfg)) in file.entries.iter().enumerate() {
        let t = Instant::now();
        let out = run(cfg).map_err(|e| match e {
            Error::Usage(m) if file.batch => Error::Usage(format!("entry {i}: {m}")),
            other => other,
        })?;
        entries_ms.push(t.elapsed().as_secs_f64() * 1e3);
        if out.status != Status::Ok {
            exit = EXIT_EXHAUSTED;
        }
        results.push(out.results);
    }
    let (config, results) = if file.batch {
        (
            Value::Array(file.entries.into_iter().map(|(raw, _)| raw).collect()),
            Value::Array(results),
        )
    } else {
        let (raw, _) = file.entries.into_iter().next().expect("one entry");
        (raw, results.pop().expect("one result"))
    };
    let report = Report {
        version: REPORT_VERSION.to_string(),
        command,
        config,
        results,
        timings: Timings {
            total_ms: start.elapsed().as_secs_f64() * 1e3,
            entries_ms,
        },
    };
    Ok((report, exit))
}

fn output_path(cli_out: Option<&Path>, report: &Report) -> Option<PathBuf> {
    if let Some(p) = cli_out {
        return Some(p.to_path_buf());
    }
    let first = match &report.config {
        Value::Array(v) => v.first(),
        v => Some(v),
    };
    first
        .and_then(|c| c.get("output"))
        .and_then(Value::as_str)
        .map(PathBuf::from)
}

/// Entry point behind the binary.
pub fn main_with_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { EXIT_OK });
        }
    };
    let text = match std::fs::read_to_string(&cli.config) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", cli.config.display());
            return ExitCode::from(EXIT_USAGE);
        }
    };
    let (report, code) = match run_document(&text, cli.command, cli.seed) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    if code == EXIT_EXHAUSTED {
        eprintln!("warning: search exhausted, the report holds partial results");
    }
    let json = serde_json::to_string_pretty(&report).expect("report serializes");
    match output_path(cli.out.as_deref(), &report) {
        Some(p) => {
            if let Err(e) = std::fs::write(&p, json + "\n") {
                eprintln!("error: cannot write {}: {e}", p.display());
                return ExitCode::from(EXIT_USAGE);
            }
        }
        None => {
            use std::io::Write;
            // a closed pipe downstream is not our failure
            let _ = writeln!(std::io::stdout().lock(), "{json}");
        }
    }
    ExitCode::from(code)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decide_reports_both_answers() {
        let (r, code) = run_document(r#"{"rs": [1, 2, 2], "lambdas": [2, 3, -3]}"#, Command::Decide, None).unwrap();
        assert_eq!(code, EXIT_OK);
        assert_eq!(r.results["s"]["holds"], true);
        assert_eq!(r.results["d"]["holds"], false);
    }

    #[test]
    fn dirichlet_half_turn_returns_on_even_indices() {
        let (r, _) = run_document(r#"{"angles": [0.5], "n_max": 100}"#, Command::Dirichlet, None).unwrap();
        let idx: Vec<u64> = serde_json::from_value(r.results["sequence"]["indices"].clone()).unwrap();
        assert_eq!(idx, vec![2, 4, 6, 8, 10, 12, 14, 16]);
    }

    #[test]
    fn exhausted_dirichlet_exits_three() {
        let (r, code) = run_document(
            r#"{"angles": [0.3183098861837907], "eps_schedule": [1e-3, 1e-9], "n_max": 1000}"#,
            Command::Dirichlet,
            None,
        )
        .unwrap();
        assert_eq!(code, EXIT_EXHAUSTED);
        assert_eq!(r.results["status"], "returns_exhausted");
        assert_eq!(r.results["failed_stage"], 1);
    }

    #[test]
    fn malformed_json_is_usage() {
        assert!(matches!(run_document("{", Command::Decide, None), Err(Error::Usage(_))));
    }
}
