//! Experiment configuration files.
//!
//! A file holds one JSON object or a list of them. Every object is parsed
//! and checked before anything runs; unknown keys are rejected.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::constructors::BuildOptions;
use crate::error::{usage, Error, Result};
use crate::operators::OperatorSpec;
use crate::oracle::BallSpec;
use crate::space::{DiskRegion, Element, ElementKind, Metric, SpaceSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    Decide,
    Construct,
    Dirichlet,
    Orbit,
    Probe,
}

impl Command {
    pub fn as_str(self) -> &'static str {
        match self {
            Command::Decide => "decide",
            Command::Construct => "construct",
            Command::Dirichlet => "dirichlet",
            Command::Orbit => "orbit",
            Command::Probe => "probe",
        }
    }
}

/// An element given either in tagged form (`{"seq": [...]}`, `{"poly": [...]}`,
/// `{"exp": [...]}`) or as a bare coefficient list whose kind follows from
/// the operators.
#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum ElementInput {
    Tagged(Element),
    Coeffs(#[serde(with = "crate::json::complex_vec")] Vec<Complex64>),
}

impl ElementInput {
    pub fn resolve(&self, kind: Option<ElementKind>) -> Result<Element> {
        match self {
            ElementInput::Tagged(e) => Ok(e.clone()),
            ElementInput::Coeffs(c) => match kind {
                Some(ElementKind::Seq) => Ok(Element::Seq(crate::space::CoeffVector::from_complex(c))),
                Some(ElementKind::Poly) => Ok(Element::Poly(crate::space::Polynomial::from_complex(c)?)),
                Some(ElementKind::Exp) => {
                    usage("exponential sums need the tagged form {\"exp\": [{\"coeff\": .., \"exponent\": ..}]}")
                }
                None => usage("cannot tell the element kind of a bare coefficient list without operators"),
            },
        }
    }
}

/// One experiment. Which fields matter depends on `command`.
#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub command: Option<Command>,
    pub operators: Option<Vec<OperatorSpec>>,
    /// Powers of an unweighted shift family, for `decide` without operators.
    pub rs: Option<Vec<usize>>,
    #[serde(default, with = "opt_complex_vec")]
    pub lambdas: Option<Vec<Complex64>>,

    pub target: Option<ElementInput>,
    pub anchor: Option<ElementInput>,
    /// Starting vector for `orbit`.
    pub x: Option<ElementInput>,
    pub u: Option<BallSpec>,
    pub v: Option<BallSpec>,

    /// Angles in turns for `dirichlet`.
    pub angles: Option<Vec<f64>>,
    /// Unimodular scalars for `dirichlet`, as an alternative to `angles`.
    #[serde(default, with = "opt_complex_vec")]
    pub scalars: Option<Vec<Complex64>>,
    pub eps_schedule: Option<Vec<f64>>,
    pub stages: Option<usize>,

    pub eps: Option<f64>,
    pub budget: Option<u64>,
    #[serde(rename = "N")]
    pub big_n: Option<u64>,
    pub n_max: Option<u64>,
    pub seed: Option<u64>,
    pub trials: Option<usize>,
    pub degree_cap: Option<usize>,
    pub fit_degree: Option<usize>,
    pub fit_samples: Option<usize>,
    pub space: Option<SpaceSpec>,
    pub disk: Option<DiskRegion>,
    pub samples: Option<usize>,
    pub k_max: Option<usize>,
    pub m_max: Option<usize>,

    /// Report path; the command line `--out` wins.
    pub output: Option<String>,
    /// CSV orbit trace path for `orbit`.
    pub trace: Option<String>,
}

mod opt_complex_vec {
    use super::*;
    use serde::Deserializer;

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<Vec<Complex64>>, D::Error> {
        #[derive(Deserialize)]
        struct W(#[serde(with = "crate::json::complex_vec")] Vec<Complex64>);
        Ok(Option::<W>::deserialize(d)?.map(|w| w.0))
    }
}

pub const DEFAULT_EPS: f64 = 1e-6;
pub const DEFAULT_BUDGET: u64 = 100_000;
pub const DEFAULT_N_MAX: u64 = 1_000_000;
pub const DEFAULT_STAGES: usize = 8;
pub const DEFAULT_BIG_N: u64 = 500;
pub const DEFAULT_TRIALS: usize = 64;

impl ExperimentConfig {
    pub fn metric(&self) -> Result<Metric> {
        let mut m = Metric::default();
        if let Some(s) = self.space {
            m.space = s;
        }
        if let Some(d) = self.disk {
            m.disk = d;
        }
        if let Some(s) = self.samples {
            m.samples = s;
        }
        m.validate()?;
        Ok(m)
    }

    pub fn build_options(&self) -> BuildOptions {
        let mut o = BuildOptions::default();
        if self.degree_cap.is_some() {
            o.degree_cap = self.degree_cap;
        }
        if let Some(d) = self.fit_degree {
            o.fit_degree = d;
        }
        if let Some(s) = self.fit_samples {
            o.fit_samples = s;
        }
        o
    }

    pub fn operators(&self) -> Result<&[OperatorSpec]> {
        match &self.operators {
            Some(ops) if !ops.is_empty() => {
                for op in ops {
                    op.validate()?;
                }
                Ok(ops)
            }
            _ => usage("`operators` must list at least one operator"),
        }
    }

    /// Element kind the operators act on, if they agree on one.
    pub fn element_kind(&self) -> Option<ElementKind> {
        let ops = self.operators.as_ref()?;
        let kinds: Vec<ElementKind> = ops.iter().map(operand_kind).collect();
        let first = *kinds.first()?;
        kinds.iter().all(|&k| k == first).then_some(first)
    }

    pub fn element(&self, field: &str, input: &Option<ElementInput>) -> Result<Option<Element>> {
        input
            .as_ref()
            .map(|i| {
                i.resolve(self.element_kind())
                    .map_err(|e| Error::Usage(format!("`{field}`: {}", strip(e))))
            })
            .transpose()
    }

    pub fn required_element(&self, field: &str, input: &Option<ElementInput>) -> Result<Element> {
        self.element(field, input)?
            .ok_or_else(|| Error::Usage(format!("`{field}` is required for {}", self.command_name())))
    }

    fn command_name(&self) -> &'static str {
        self.command.map_or("this command", Command::as_str)
    }
}

fn operand_kind(op: &OperatorSpec) -> ElementKind {
    match op {
        OperatorSpec::ShiftPower { .. } => ElementKind::Seq,
        OperatorSpec::DiffPower { .. } | OperatorSpec::Translation { .. } => ElementKind::Poly,
        OperatorSpec::Convolution { .. } => ElementKind::Exp,
    }
}

fn strip(e: Error) -> String {
    match e {
        Error::Usage(m) => m,
        other => other.to_string(),
    }
}

/// Parsed file: each entry keeps its raw JSON for the report echo.
#[derive(Clone, Debug)]
pub struct ConfigFile {
    pub batch: bool,
    pub entries: Vec<(Value, ExperimentConfig)>,
}

/// Parses a config document, checking every entry against `command` and
/// applying the seed override to both the parsed and the echoed form.
pub fn parse_config(text: &str, command: Command, seed: Option<u64>) -> Result<ConfigFile> {
    let raw: Value = serde_json::from_str(text).map_err(|e| Error::Usage(format!("malformed JSON: {e}")))?;
    let (batch, values) = match raw {
        Value::Array(v) => {
            if v.is_empty() {
                return usage("config list is empty");
            }
            (true, v)
        }
        v @ Value::Object(_) => (false, vec![v]),
        _ => return usage("config must be a JSON object or a list of objects"),
    };
    let mut entries = Vec::with_capacity(values.len());
    for (i, mut v) in values.into_iter().enumerate() {
        let at = |msg: String| {
            if batch {
                Error::Usage(format!("entry {i}: {msg}"))
            } else {
                Error::Usage(msg)
            }
        };
        if let (Some(s), Value::Object(map)) = (seed, &mut v) {
            map.insert("seed".into(), Value::from(s));
        }
        let mut cfg: ExperimentConfig =
            serde_json::from_value(v.clone()).map_err(|e| at(format!("invalid config: {e}")))?;
        match cfg.command {
            Some(c) if c != command => {
                return Err(at(format!(
                    "config is for `{}` but the command line asked for `{}`",
                    c.as_str(),
                    command.as_str()
                )))
            }
            _ => cfg.command = Some(command),
        }
        entries.push((v, cfg));
    }
    Ok(ConfigFile { batch, entries })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_keys_are_rejected() {
        let e = parse_config(r#"{"rs": [1], "lambdas": [2], "colour": 1}"#, Command::Decide, None).unwrap_err();
        assert!(e.to_string().contains("colour"), "{e}");
    }

    #[test]
    fn seed_override_reaches_the_echo() {
        let f = parse_config(r#"[{"seed": 1}, {}]"#, Command::Probe, Some(9)).unwrap();
        assert!(f.batch);
        for (raw, cfg) in &f.entries {
            assert_eq!(cfg.seed, Some(9));
            assert_eq!(raw["seed"], 9);
        }
    }

    #[test]
    fn command_mismatch_is_usage() {
        assert!(parse_config(r#"{"command": "orbit"}"#, Command::Decide, None).is_err());
    }

    #[test]
    fn bare_lists_follow_the_operators() {
        let f = parse_config(
            r#"{"operators": [{"kind": "diff_power", "r": 1, "lambda": 1}], "target": [0, 1]}"#,
            Command::Construct,
            None,
        )
        .unwrap();
        let cfg = &f.entries[0].1;
        let t = cfg.required_element("target", &cfg.target).unwrap();
        assert_eq!(t.kind(), ElementKind::Poly);
    }
}
