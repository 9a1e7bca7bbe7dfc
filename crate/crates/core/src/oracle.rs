//! Brute-force checks that do not trust any construction.
//!
//! Everything here recomputes iterates from the operator definitions and
//! measures distances directly. A failed search is evidence, never proof,
//! that no good index or vector exists.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::constructors::ApproxCertificate;
use crate::error::{usage, Result};
use crate::operators::{apply, iterate, OperatorSpec};
use crate::space::{factorial, CoeffVector, Element, ExpTerm, ExponentialSum, Metric, Polynomial};
use crate::xcomplex::XComplex;

/// Open ball `{u : d(u, center) < radius}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BallSpec {
    pub center: Element,
    pub radius: f64,
    #[serde(default)]
    pub metric: Metric,
}

impl BallSpec {
    pub fn new(center: Element, radius: f64, metric: Metric) -> Result<Self> {
        let b = Self {
            center,
            radius,
            metric,
        };
        b.validate()?;
        Ok(b)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.radius > 0.0 && self.radius.is_finite()) {
            return usage(format!("ball radius must be positive, got {}", self.radius));
        }
        self.metric.validate()
    }

    pub fn contains(&self, u: &Element) -> Result<bool> {
        Ok(self.metric.distance(u, &self.center)? < self.radius)
    }
}

/// `[d(T_1^n x, target), ..., d(T_p^n x, target)]`.
pub fn joint_errors(
    family: &[OperatorSpec],
    x: &Element,
    n: u64,
    target: &Element,
    metric: &Metric,
) -> Result<Vec<f64>> {
    family
        .iter()
        .map(|op| metric.distance(&iterate(op, x, n)?, target))
        .collect()
}

fn worst(errors: &[f64]) -> f64 {
    errors
        .iter()
        .map(|&e| if e.is_nan() { f64::INFINITY } else { e })
        .fold(0.0, f64::max)
}

/// The index `n ≤ big_n` minimizing `max_j d(T_j^n x, target)`, smallest on
/// ties, with that score.
pub fn best_simultaneous_index(
    family: &[OperatorSpec],
    x: &Element,
    target: &Element,
    big_n: u64,
    metric: &Metric,
) -> Result<(u64, f64)> {
    if family.is_empty() {
        return usage("operator family is empty");
    }
    if big_n == 0 {
        return usage("N must be at least 1");
    }
    let mut current: Vec<Element> = vec![x.clone(); family.len()];
    let mut best = (0, f64::INFINITY);
    for n in 1..=big_n {
        let mut errors = Vec::with_capacity(family.len());
        for (op, cur) in family.iter().zip(current.iter_mut()) {
            *cur = apply(op, cur)?;
            errors.push(metric.distance(cur, target)?);
        }
        let score = worst(&errors);
        if score < best.1 {
            best = (n, score);
        }
    }
    if best.0 == 0 {
        // every score was infinite
        best.0 = 1;
    }
    Ok(best)
}

/// Result of [`brute_force_certificate_check`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateCheck {
    pub passed: bool,
    pub recomputed: Vec<f64>,
    /// First operator whose error is not below `eps`.
    pub offender: Option<usize>,
    /// Set when the errors could not be computed at all.
    pub detail: Option<String>,
}

/// Recomputes `d(T_j^n x, target)` for every member from scratch and
/// compares with `eps`.
pub fn brute_force_certificate_check(
    cert: &ApproxCertificate,
    family: &[OperatorSpec],
    target: &Element,
    eps: f64,
    metric: &Metric,
) -> CertificateCheck {
    match joint_errors(family, &cert.x, cert.n, target, metric) {
        Ok(recomputed) => {
            let offender = recomputed.iter().position(|&e| !(e < eps));
            CertificateCheck {
                passed: offender.is_none() && !family.is_empty(),
                recomputed,
                offender,
                detail: None,
            }
        }
        Err(e) => CertificateCheck {
            passed: false,
            recomputed: Vec::new(),
            offender: None,
            detail: Some(e.to_string()),
        },
    }
}

/// A point of `U` whose `n`-th iterates under every member lie in `V`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbeWitness {
    pub trial: usize,
    pub u: Element,
    pub n: u64,
    pub distances: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbeOutcome {
    pub witness: Option<ProbeWitness>,
    pub trials: usize,
    pub n_max: u64,
}

/// Deterministic random generator for one trial.
pub fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

fn unit_complex(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

/// How far `N` steps of the family can move mass: `N` times the largest power.
fn reach(family: &[OperatorSpec], big_n: u64) -> usize {
    let r = family
        .iter()
        .map(|o| match o {
            OperatorSpec::ShiftPower { r, .. } | OperatorSpec::DiffPower { r, .. } => *r,
            _ => 1,
        })
        .max()
        .unwrap_or(1);
    (r as u64 * big_n).min(1 << 16) as usize
}

/// A random direction around which `U` is explored.
fn random_perturbation(kind: &Element, rng: &mut ChaCha8Rng, len: usize) -> Element {
    match kind {
        Element::Seq(_) => {
            let support = rng.gen_range(1..=8usize);
            let mut v = vec![XComplex::ZERO; len.max(1)];
            for _ in 0..support {
                let i = rng.gen_range(0..v.len());
                v[i] = unit_complex(rng).into();
            }
            Element::Seq(CoeffVector::new(v))
        }
        Element::Poly(p) => {
            let deg = rng.gen_range(0..=8usize).min(p.degree_cap());
            let coeffs = (0..=deg).map(|_| unit_complex(rng).into()).collect();
            Element::Poly(Polynomial::new(coeffs, p.degree_cap()).expect("degree within cap"))
        }
        Element::Exp(_) => {
            let terms = (0..rng.gen_range(1..=3usize))
                .map(|_| ExpTerm {
                    coeff: unit_complex(rng).into(),
                    exponent: unit_complex(rng) * 3.0,
                })
                .collect::<Vec<_>>();
            Element::Exp(ExponentialSum::new(terms))
        }
    }
}

/// A copy of `v` moved to where `n` applications of a typical member would
/// bring it back: shifted right by `k` for sequences, integrated `k` times
/// for polynomials, unchanged for exponential sums.
fn shifted_copy(v: &Element, k: usize) -> Element {
    match v {
        Element::Seq(y) => {
            let mut out = vec![XComplex::ZERO; k];
            out.extend_from_slice(y.coeffs());
            Element::Seq(CoeffVector::new(out))
        }
        Element::Poly(g) => {
            let cap = g.degree_cap();
            let Some(deg) = g.degree() else {
                return v.clone();
            };
            if deg + k > cap {
                return v.clone();
            }
            let mut out = vec![XComplex::ZERO; deg + k + 1];
            for (m, c) in g.coeffs().iter().enumerate() {
                out[m + k] = *c * (factorial(m) / factorial(m + k));
            }
            Element::Poly(Polynomial::new(out, cap).expect("degree checked"))
        }
        Element::Exp(_) => v.clone(),
    }
}

/// `target_i / w_i` at the largest coefficient of `target`.
fn leading_ratio(target: &Element, w: &Element) -> Option<XComplex> {
    let pairs: Vec<(XComplex, XComplex)> = match (target, w) {
        (Element::Seq(t), Element::Seq(w)) => t.coeffs().iter().enumerate().map(|(i, c)| (*c, w.coeff(i))).collect(),
        (Element::Poly(t), Element::Poly(w)) => t.coeffs().iter().enumerate().map(|(i, c)| (*c, w.coeff(i))).collect(),
        (Element::Exp(t), Element::Exp(w)) => t.terms().iter().map(|term| (term.coeff, w.coeff_of(term.exponent))).collect(),
        _ => return None,
    };
    let (t, w) = pairs.into_iter().max_by(|a, b| a.0.cmp_abs(&b.0))?;
    let s = t / w;
    (!t.is_zero() && !w.is_zero() && s.is_finite()).then_some(s)
}

fn propose(
    family: &[OperatorSpec],
    u_ball: &BallSpec,
    v_ball: &BallSpec,
    big_n: u64,
    rng: &mut ChaCha8Rng,
) -> Result<Option<Element>> {
    let metric = &u_ball.metric;
    // generic perturbations stay near the front; far-out mass comes from the
    // shifted copies below
    let len = u_ball
        .center
        .as_seq()
        .map_or(0, |c| c.len())
        .max(v_ball.center.as_seq().map_or(0, |c| c.len()))
        + 8;
    let v_norm = v_ball.metric.norm(&v_ball.center)?;
    let pick = rng.gen_range(0..3u8);
    let pert = if pick == 0 && v_norm > 0.0 {
        // shifted copy of V's center scaled so that the first member brings
        // it back onto that center after k steps
        let k = rng.gen_range(1..=reach(family, big_n).max(1));
        let copy = shifted_copy(&v_ball.center, k);
        let back = iterate(&family[0], &copy, k as u64)?;
        match leading_ratio(&v_ball.center, &back) {
            Some(s) => copy.scale(s),
            None => return Ok(None),
        }
    } else if pick == 1 && v_norm > 0.0 {
        // scaled copy of V's center, scale log-uniform over twelve decades
        let k = rng.gen_range(1..=reach(family, big_n).max(1));
        let copy = shifted_copy(&v_ball.center, k);
        let size = metric.norm(&copy)?;
        if !(size > 0.0 && size.is_finite()) {
            return Ok(None);
        }
        let log_s = rng.gen_range(-12.0..0.0) * std::f64::consts::LN_10;
        let phase = if rng.gen_bool(0.5) {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU))
        };
        let s = XComplex::from_polar_ln(log_s + u_ball.radius.ln() - size.ln(), phase.arg());
        copy.scale(s)
    } else {
        let p = random_perturbation(&u_ball.center, rng, len);
        let size = metric.norm(&p)?;
        if !(size > 0.0 && size.is_finite()) {
            return Ok(None);
        }
        let target = u_ball.radius * rng.gen_range(0.0..1.0);
        p.scale(XComplex::from_f64(target / size))
    };
    let u = u_ball.center.add(&pert)?;
    Ok(if u_ball.contains(&u)? { Some(u) } else { None })
}

fn run_trial(
    family: &[OperatorSpec],
    u_ball: &BallSpec,
    v_ball: &BallSpec,
    big_n: u64,
    seed: u64,
    trial: usize,
) -> Result<Option<ProbeWitness>> {
    let mut rng = trial_rng(seed, trial);
    let Some(u) = propose(family, u_ball, v_ball, big_n, &mut rng)? else {
        return Ok(None);
    };
    let mut current: Vec<Element> = vec![u.clone(); family.len()];
    for n in 1..=big_n {
        let mut distances = Vec::with_capacity(family.len());
        for (op, cur) in family.iter().zip(current.iter_mut()) {
            *cur = apply(op, cur)?;
            distances.push(v_ball.metric.distance(cur, &v_ball.center)?);
        }
        if distances.iter().all(|&d| d < v_ball.radius) {
            return Ok(Some(ProbeWitness {
                trial,
                u,
                n,
                distances,
            }));
        }
    }
    Ok(None)
}

/// Samples `trials` points of `U` and returns the first (by trial index)
/// whose joint iterates enter `V` within `N` steps.
///
/// Trial `t` draws from its own stream of a generator seeded with `seed`, so
/// the outcome does not depend on how trials are scheduled.
pub fn transitivity_probe(
    family: &[OperatorSpec],
    u_ball: &BallSpec,
    v_ball: &BallSpec,
    big_n: u64,
    trials: usize,
    seed: u64,
) -> Result<ProbeOutcome> {
    if family.is_empty() {
        return usage("operator family is empty");
    }
    if trials == 0 || big_n == 0 {
        return usage("trials and N must be at least 1");
    }
    u_ball.validate()?;
    v_ball.validate()?;
    if u_ball.center.kind() != v_ball.center.kind() {
        return usage("U and V centers are of different kinds");
    }
    let results: Vec<Result<Option<ProbeWitness>>> = crate::parallel::pool().install(|| {
        (0..trials)
            .into_par_iter()
            .map(|t| run_trial(family, u_ball, v_ball, big_n, seed, t))
            .collect()
    });
    let mut witness = None;
    for r in results {
        if let Some(w) = r? {
            witness = Some(w);
            break;
        }
    }
    Ok(ProbeOutcome {
        witness,
        trials,
        n_max: big_n,
    })
}
