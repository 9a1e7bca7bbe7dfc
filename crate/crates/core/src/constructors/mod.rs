//! Explicit simultaneous-approximation certificates.
//!
//! Every construction has the shape `x = anchor + R_n(target)`, where `R_n`
//! is a family-specific right inverse: applying any member `n` times to
//! `R_n(target)` gives back roughly the target, while `R_n(target)` itself is
//! small and the members' `n`-th powers shrink the anchor. Candidate indices
//! `n` come from simultaneous return times of the phase ratios between
//! members; each candidate is measured exactly and the first one within
//! tolerance is returned after an independent re-check.

pub mod conv;
pub mod diff;
pub mod runge;
pub mod shift;
pub mod translation;

pub use conv::{conv_region_probe, conv_rk, symbol_classes, RegionGrid, RegionReport};
pub use diff::diff_rk;
pub use runge::{runge_fit, FitPiece, RungeFit};
pub use shift::{shift_rk, ShiftRk};
pub use translation::{separation_bound, translation_construct, TranslationFit, TranslationTarget};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dirichlet::{find_return, UnimodularSet};
use crate::error::{usage, Error, Result};
use crate::operators::{ConvolutionSymbol, OperatorSpec};
use crate::oracle::{brute_force_certificate_check, joint_errors};
use crate::shift_analysis::{decide_s_unweighted, representatives, ShiftFamily};
use crate::space::{seq_norm, Element, ElementKind, Metric};

/// Which right inverse a construction used.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RkKind {
    Shift,
    Diff,
    Conv,
    Translation,
}

/// Knobs for [`build_certificate`]; the defaults suit desk-scale runs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BuildOptions {
    /// Smallest index considered.
    pub n_min: u64,
    /// Candidate indices measured before giving up.
    pub max_attempts: usize,
    /// Degree cap for polynomial constructions; `None` keeps the target's.
    pub degree_cap: Option<usize>,
    /// Polynomial degree for translation fits.
    pub fit_degree: usize,
    /// Boundary samples per disk for translation fits.
    pub fit_samples: usize,
}

impl Default for BuildOptions {
    fn default() -> Self {
        Self {
            n_min: 1,
            max_attempts: 256,
            degree_cap: None,
            fit_degree: 32,
            fit_samples: 64,
        }
    }
}

/// What to approximate and how well.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ApproxRequest {
    pub family: Vec<OperatorSpec>,
    pub target: Element,
    /// The vector `x` has to stay close to; zero when absent.
    pub anchor: Option<Element>,
    pub eps: f64,
    /// Largest index `n` considered.
    pub budget: u64,
    pub metric: Metric,
    pub options: BuildOptions,
}

impl ApproxRequest {
    pub fn new(family: Vec<OperatorSpec>, target: Element, eps: f64, budget: u64) -> Self {
        Self {
            family,
            target,
            anchor: None,
            eps,
            budget,
            metric: Metric::default(),
            options: BuildOptions::default(),
        }
    }

    pub fn with_anchor(mut self, anchor: Element) -> Self {
        self.anchor = Some(anchor);
        self
    }

    pub fn with_metric(mut self, metric: Metric) -> Self {
        self.metric = metric;
        self
    }

    pub fn anchor_or_zero(&self) -> Element {
        self.anchor.clone().unwrap_or_else(|| {
            let cap = match &self.target {
                Element::Poly(p) => p.degree_cap(),
                _ => crate::space::DEFAULT_DEGREE_CAP,
            };
            Element::zero(self.target.kind(), cap)
        })
    }
}

/// A vector `x` and index `n` with measured errors
/// `per_op_error[j] = d(T_j^n x, target)` and `anchor_error = d(x, anchor)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ApproxCertificate {
    pub x: Element,
    pub n: u64,
    pub per_op_error: Vec<f64>,
    pub anchor_error: f64,
    pub construction: RkKind,
}

impl ApproxCertificate {
    /// Largest of all recorded errors.
    pub fn worst_error(&self) -> f64 {
        self.per_op_error
            .iter()
            .copied()
            .fold(self.anchor_error, |a, b| if b.is_nan() || a.is_nan() { f64::NAN } else { a.max(b) })
    }
}

/// The indices a construction went through, with the family and the kind of
/// right inverse used.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriterionInstance {
    pub indices: Vec<u64>,
    pub family: Vec<OperatorSpec>,
    pub rk_kind: RkKind,
}

/// The right inverse that applies to `family` acting on `kind`.
pub fn family_kind(family: &[OperatorSpec], kind: ElementKind) -> Result<RkKind> {
    if family.is_empty() {
        return usage("operator family is empty");
    }
    let all = |f: fn(&OperatorSpec) -> bool| family.iter().all(f);
    let k = match kind {
        ElementKind::Seq if all(|o| matches!(o, OperatorSpec::ShiftPower { .. })) => RkKind::Shift,
        ElementKind::Poly if all(|o| matches!(o, OperatorSpec::DiffPower { .. })) => RkKind::Diff,
        ElementKind::Poly if all(|o| matches!(o, OperatorSpec::Translation { .. })) => {
            RkKind::Translation
        }
        ElementKind::Exp
            if all(|o| matches!(o, OperatorSpec::DiffPower { .. } | OperatorSpec::Convolution { .. })) =>
        {
            RkKind::Conv
        }
        _ => {
            let names: Vec<&str> = family.iter().map(|o| o.name()).collect();
            return usage(format!("no construction for [{}] acting on a {kind}", names.join(", ")));
        }
    };
    Ok(k)
}

/// How to search for a certificate: where to start, which phases have to
/// come back to 1 and how to build `x` for a given index.
struct Plan<'a> {
    kind: RkKind,
    n_lo: u64,
    phases: Option<UnimodularSet>,
    phase_eps: f64,
    construct: Box<dyn Fn(u64) -> Result<Element> + 'a>,
}

/// First certificate along the candidate indices whose errors are all below
/// `eps`, re-checked by the oracle before it is returned.
pub fn build_certificate(req: &ApproxRequest) -> Result<ApproxCertificate> {
    build_certificate_traced(req).map(|(c, _)| c)
}

/// [`build_certificate`] together with the indices it tried.
pub fn build_certificate_traced(req: &ApproxRequest) -> Result<(ApproxCertificate, CriterionInstance)> {
    validate_request(req)?;
    let anchor = req.anchor_or_zero();
    let plan = match family_kind(&req.family, req.target.kind())? {
        RkKind::Shift => shift_plan(req, &anchor)?,
        RkKind::Diff => diff_plan(req, &anchor)?,
        RkKind::Conv => conv_plan(req, &anchor)?,
        RkKind::Translation => translation_plan(req, &anchor)?,
    };
    search(req, &anchor, plan)
}

fn validate_request(req: &ApproxRequest) -> Result<()> {
    if !(req.eps > 0.0) {
        return usage(format!("eps must be positive, got {}", req.eps));
    }
    if req.budget == 0 {
        return usage("budget must be at least 1");
    }
    req.metric.validate()?;
    for op in &req.family {
        op.validate()?;
    }
    if let Some(a) = &req.anchor {
        if a.kind() != req.target.kind() {
            return usage(format!("anchor is a {} but target is a {}", a.kind(), req.target.kind()));
        }
    }
    Ok(())
}

fn search(req: &ApproxRequest, anchor: &Element, plan: Plan<'_>) -> Result<(ApproxCertificate, CriterionInstance)> {
    let mut tried = Vec::new();
    let mut best: Option<ApproxCertificate> = None;
    let mut n_min = plan.n_lo.max(req.options.n_min).max(1);
    let mut stop = String::new();

    let measure = |x: Element, n: u64| -> Result<ApproxCertificate> {
        let per_op_error = joint_errors(&req.family, &x, n, &req.target, &req.metric)?;
        let anchor_error = req.metric.distance(&x, anchor)?;
        Ok(ApproxCertificate {
            x,
            n,
            per_op_error,
            anchor_error,
            construction: plan.kind,
        })
    };

    while tried.len() < req.options.max_attempts {
        if n_min > req.budget {
            stop = format!("next candidate index {n_min} is beyond the budget");
            break;
        }
        let n = match &plan.phases {
            None => n_min,
            Some(set) => match find_return(set, plan.phase_eps, n_min, req.budget)? {
                Some(n) => n,
                None => {
                    stop = format!(
                        "no phase return within {:.3e} in [{n_min}, {}]",
                        plan.phase_eps, req.budget
                    );
                    break;
                }
            },
        };
        let x = match (plan.construct)(n) {
            Ok(x) => x,
            Err(e @ Error::Capacity { .. }) if tried.is_empty() => return Err(e),
            Err(Error::Capacity { needed, cap }) => {
                stop = format!("index {n} needs degree {needed} beyond the cap {cap}");
                break;
            }
            Err(e) => return Err(e),
        };
        tried.push(n);
        let cert = measure(x, n)?;
        let ok = cert.per_op_error.iter().all(|&e| e < req.eps) && cert.anchor_error < req.eps;
        if ok {
            let check = brute_force_certificate_check(&cert, &req.family, &req.target, req.eps, &req.metric);
            if check.passed {
                let instance = CriterionInstance {
                    indices: tried,
                    family: req.family.clone(),
                    rk_kind: plan.kind,
                };
                return Ok((cert, instance));
            }
        }
        let better = best
            .as_ref()
            .is_none_or(|b| !(b.worst_error() <= cert.worst_error()));
        if better {
            best = Some(cert);
        }
        n_min = n + 1;
    }
    if stop.is_empty() {
        stop = format!("{} candidate indices measured without success", tried.len());
    }
    // nothing measured at all: report the construction at the budget itself
    if best.is_none() {
        if let Ok(x) = (plan.construct)(req.budget) {
            best = measure(x, req.budget).ok();
        }
    }
    let detail = match &best {
        Some(b) => format!("{stop}; best attempt n = {} with worst error {:.3e}", b.n, b.worst_error()),
        None => stop,
    };
    Err(Error::BudgetExhausted {
        best: best.map(Box::new),
        budget: req.budget,
        detail,
    })
}

/// Smallest integer `n` with `n * rate >= ln_need`, for a positive rate.
fn index_for(ln_need: f64, rate: f64) -> u64 {
    if ln_need <= 0.0 {
        return 0;
    }
    let n = (ln_need / rate).ceil();
    if n.is_finite() && n < 1e18 {
        n as u64
    } else {
        u64::MAX
    }
}

fn shift_plan<'a>(req: &'a ApproxRequest, anchor: &Element) -> Result<Plan<'a>> {
    let fam = ShiftFamily::from_operators(&req.family)?;
    let lambdas = fam.effective_lambdas().ok_or_else(|| {
        Error::Usage("constructions need constant shift weights".into())
    })?;
    // members sorted by power; stable so that ties keep their given order
    let mut order: Vec<usize> = (0..lambdas.len()).collect();
    order.sort_by_key(|&j| fam.members[j].r);
    let rs: Vec<usize> = order.iter().map(|&j| fam.members[j].r).collect();
    let lams: Vec<Complex64> = order.iter().map(|&j| lambdas[j]).collect();
    let decision = decide_s_unweighted(&rs, &lams)?;
    if !decision.holds {
        return usage(format!("family is not simultaneously universal: {}", decision.reason));
    }

    let y = req.target.as_seq().expect("kind checked").trimmed();
    let a_len = anchor.as_seq().expect("kind checked").trimmed().len() as u64;
    let y_norm = seq_norm(&y, req.metric.space);
    let reps = representatives(&rs);
    let rep_of = |j: usize| *reps.iter().find(|&&t| rs[t] == rs[j]).expect("every power has a representative");

    // n >= max(N, anchor length) kills the anchor and separates the blocks;
    // the remaining terms are bounded by |λ_t|^{-n} |y| (distance from the
    // anchor) and |λ_j / λ_t|^n |y| for higher powers t.
    let mut n_lo = (y.len() as u64).max(a_len).max(1);
    let mut phases = Vec::new();
    if y_norm > 0.0 {
        let ln_need = (4.0 * reps.len() as f64 * y_norm / req.eps).ln();
        for &t in &reps {
            n_lo = n_lo.max(index_for(ln_need, lams[t].norm().ln()));
        }
        for j in 0..rs.len() {
            for &t in reps.iter().filter(|&&t| rs[t] > rs[j]) {
                n_lo = n_lo.max(index_for(ln_need, (lams[t].norm() / lams[j].norm()).ln()));
            }
            let t = rep_of(j);
            if t != j {
                phases.push(lams[j] / lams[t]);
            }
        }
    }
    let phase_set = if phases.is_empty() {
        None
    } else {
        Some(UnimodularSet::from_scalars(&phases)?)
    };
    let anchor_seq = anchor.as_seq().expect("kind checked").clone();
    Ok(Plan {
        kind: RkKind::Shift,
        n_lo,
        phases: phase_set,
        phase_eps: req.eps / (4.0 * y_norm.max(f64::MIN_POSITIVE)),
        construct: Box::new(move |n| {
            let r = shift_rk(&y, n, &rs, &lams)?;
            Ok(Element::Seq(anchor_seq.add(&r.vector)))
        }),
    })
}

fn diff_members(family: &[OperatorSpec]) -> (Vec<usize>, Vec<Complex64>) {
    family
        .iter()
        .map(|o| match o {
            OperatorSpec::DiffPower { r, lambda } => (*r, *lambda),
            _ => unreachable!("family kind checked"),
        })
        .unzip()
}

fn diff_plan<'a>(req: &'a ApproxRequest, anchor: &Element) -> Result<Plan<'a>> {
    let (rs, lams) = diff_members(&req.family);
    diff::check_diff_ties(&rs, &lams)?;
    let target = req.target.as_poly().expect("kind checked");
    let h = anchor.as_poly().expect("kind checked").clone();
    let cap = req
        .options
        .degree_cap
        .unwrap_or(target.degree_cap())
        .max(h.degree().unwrap_or(0));
    let f = target.clone().with_cap(cap)?;
    let h = h.with_cap(cap)?;
    let f_norm = req.metric.norm(&req.target)?;

    // D^{r n} h = 0 once r n exceeds deg h
    let r_min = *rs.iter().min().expect("nonempty") as u64;
    let n_lo = h.degree().map_or(1, |d| d as u64 / r_min + 1);
    let mut phases = Vec::new();
    for i in 0..rs.len() {
        for j in 0..rs.len() {
            if i != j && rs[i] == rs[j] {
                phases.push(lams[i] / lams[j]);
            }
        }
    }
    let phase_set = if phases.is_empty() || f_norm == 0.0 {
        None
    } else {
        Some(UnimodularSet::from_scalars(&phases)?)
    };
    Ok(Plan {
        kind: RkKind::Diff,
        n_lo,
        phases: phase_set,
        phase_eps: req.eps / (4.0 * f_norm.max(f64::MIN_POSITIVE)),
        construct: Box::new(move |n| Ok(Element::Poly(h.add(&diff_rk(&f, n, &rs, &lams)?)?))),
    })
}

/// The symbol of a differentiation power or convolution operator.
pub fn symbol_of(op: &OperatorSpec) -> Result<ConvolutionSymbol> {
    match op {
        OperatorSpec::Convolution { symbol } => Ok(symbol.clone()),
        OperatorSpec::DiffPower { r, lambda } => {
            let mut coeffs = vec![Complex64::new(0.0, 0.0); r + 1];
            coeffs[*r] = *lambda;
            ConvolutionSymbol::new(coeffs)
        }
        other => usage(format!("{} has no convolution symbol", other.name())),
    }
}

/// `sup |e^{λ z}|` over the closed metric disk.
fn ln_sup_exp(lambda: Complex64, metric: &Metric) -> f64 {
    (lambda * metric.disk.center).re + lambda.norm() * metric.disk.radius
}

fn conv_plan<'a>(req: &'a ApproxRequest, anchor: &Element) -> Result<Plan<'a>> {
    let symbols: Vec<ConvolutionSymbol> = req.family.iter().map(symbol_of).collect::<Result<_>>()?;
    let y = req.target.as_exp().expect("kind checked").clone();
    let h = anchor.as_exp().expect("kind checked").clone();
    let p = symbols.len();

    // anchor exponents must decay under every member
    let mut n_lo = 1u64;
    for t in h.terms() {
        let top = symbols.iter().map(|s| s.eval(t.exponent).norm()).fold(0.0, f64::max);
        if !(top < 1.0) {
            return usage(format!(
                "anchor exponent {} is not in the decay region (max |Phi_j| = {top})",
                t.exponent
            ));
        }
        let ln_need = (4.0 * p as f64 * h.terms().len() as f64 / req.eps).ln()
            + t.coeff.ln_abs()
            + ln_sup_exp(t.exponent, &req.metric);
        n_lo = n_lo.max(index_for(ln_need, -top.ln()));
    }
    // the same target is handed to every symbol, so its exponents must be
    // dominant for all of them; conv_rk checks this term by term
    let targets = vec![y.clone(); p];
    conv_rk(&targets, 1, &symbols)?;
    for t in y.terms() {
        let low = symbols.iter().map(|s| s.eval(t.exponent).norm()).fold(f64::INFINITY, f64::min);
        let ln_need = (4.0 * y.terms().len() as f64 / req.eps).ln()
            + t.coeff.ln_abs()
            + ln_sup_exp(t.exponent, &req.metric);
        n_lo = n_lo.max(index_for(ln_need, low.ln()));
    }
    let y_norm = req.metric.norm(&req.target)?;
    let mut phases = Vec::new();
    for class in symbol_classes(&symbols) {
        phases.extend(class.iter().map(|&(_, z)| z).filter(|z| *z != Complex64::new(1.0, 0.0)));
    }
    let phase_set = if phases.is_empty() || y.is_empty() {
        None
    } else {
        Some(UnimodularSet::from_scalars(&phases)?)
    };
    Ok(Plan {
        kind: RkKind::Conv,
        n_lo,
        phases: phase_set,
        phase_eps: req.eps / (4.0 * y_norm.max(f64::MIN_POSITIVE)),
        construct: Box::new(move |n| Ok(Element::Exp(h.add(&conv_rk(&targets, n, &symbols)?)))),
    })
}

fn translation_plan<'a>(req: &'a ApproxRequest, anchor: &Element) -> Result<Plan<'a>> {
    let disk = req.metric.disk;
    if disk.center.norm() != 0.0 {
        return usage("translation certificates need the metric disk centered at 0");
    }
    let r = disk.radius;
    let y = req.target.as_poly().expect("kind checked").clone();
    let h = anchor.as_poly().expect("kind checked").clone();
    let targets: Vec<TranslationTarget> = req
        .family
        .iter()
        .map(|o| match o {
            OperatorSpec::Translation { a, lambda } => TranslationTarget {
                g: y.clone(),
                b: *a,
                mu: *lambda,
            },
            _ => unreachable!("family kind checked"),
        })
        .collect();
    let bs: Vec<Complex64> = targets.iter().map(|t| t.b).collect();
    let bound = separation_bound(&bs, r)?;
    let cap = req.options.degree_cap.unwrap_or(y.degree_cap());
    let (degree, samples, eps) = (req.options.fit_degree, req.options.fit_samples, req.eps);
    Ok(Plan {
        kind: RkKind::Translation,
        n_lo: bound.floor() as u64 + 1,
        phases: None,
        phase_eps: 0.0,
        construct: Box::new(move |n| {
            let fit = translation_construct(&h, &targets, r, eps, degree, samples, n, cap)?;
            Ok(Element::Poly(fit.f))
        }),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::CoeffVector;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn rolewicz_shift_certificate() {
        let req = ApproxRequest::new(vec![OperatorSpec::shift(c(2.0), 1)], CoeffVector::basis(0).into(), 1e-9, 1000);
        let cert = build_certificate(&req).unwrap();
        let x = cert.x.as_seq().unwrap();
        let n = cert.n as usize;
        assert_eq!(x.trimmed().len(), n + 1);
        assert_eq!(x.get(n), c(0.5f64.powi(n as i32)));
        assert_eq!(cert.per_op_error, vec![0.0]);
        assert!(cert.anchor_error < 1e-9);
    }

    #[test]
    fn opposite_shifts_need_even_index() {
        let req = ApproxRequest::new(
            vec![OperatorSpec::shift(c(2.0), 1), OperatorSpec::shift(c(-2.0), 1)],
            CoeffVector::basis(0).into(),
            1e-6,
            1000,
        );
        let cert = build_certificate(&req).unwrap();
        assert_eq!(cert.n % 2, 0);
        assert!(cert.per_op_error.iter().all(|&e| e < 1e-6));
    }

    #[test]
    fn unequal_moduli_on_one_power_fail_the_precondition() {
        let req = ApproxRequest::new(
            vec![OperatorSpec::shift(c(2.0), 1), OperatorSpec::shift(c(4.0), 1)],
            CoeffVector::basis(0).into(),
            1e-3,
            1000,
        );
        assert!(matches!(build_certificate(&req), Err(Error::Usage(_))));
    }

    #[test]
    fn mixed_family_is_rejected() {
        assert!(family_kind(
            &[OperatorSpec::shift(c(2.0), 1), OperatorSpec::diff(c(1.0), 1)],
            ElementKind::Seq
        )
        .is_err());
    }

    #[test]
    fn small_budget_reports_best_attempt() {
        let req = ApproxRequest::new(vec![OperatorSpec::shift(c(1.1), 1)], CoeffVector::basis(0).into(), 1e-9, 20);
        match build_certificate(&req) {
            Err(Error::BudgetExhausted { best: Some(b), budget: 20, .. }) => assert_eq!(b.n, 20),
            other => panic!("expected budget exhaustion, got {other:?}"),
        }
    }
}
