//! Space elements, norms and distances.
//!
//! Sequence-space vectors are finitely supported; functions in `H(G)` are
//! represented either as polynomials or as finite exponential sums. The
//! sup norm on `H(G)` is replaced by the maximum over equispaced samples on
//! the boundary circle of one closed disk, which is exact in the limit by the
//! maximum-modulus principle.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{usage, Error, Result};
use crate::xcomplex::{unit_from_turns, XComplex};

/// Default bound on polynomial degree.
pub const DEFAULT_DEGREE_CAP: usize = 512;

/// `c_0` or `ℓ_q`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", deny_unknown_fields)]
pub enum SpaceSpec {
    #[serde(rename = "c0")]
    C0,
    #[serde(rename = "ellq")]
    EllQ { q: f64 },
}

impl SpaceSpec {
    pub fn ell(q: f64) -> Result<Self> {
        let s = SpaceSpec::EllQ { q };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            SpaceSpec::EllQ { q } if !(q >= 1.0 && q.is_finite()) => {
                usage(format!("ell_q needs finite q >= 1, got {q}"))
            }
            _ => Ok(()),
        }
    }
}

impl Default for SpaceSpec {
    fn default() -> Self {
        SpaceSpec::EllQ { q: 2.0 }
    }
}

/// Finitely supported sequence `(x_0, x_1, ...)`; implicit zeros past the end.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CoeffVector {
    coeffs: Vec<XComplex>,
}

impl CoeffVector {
    pub fn new(coeffs: Vec<XComplex>) -> Self {
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_complex(c: &[Complex64]) -> Self {
        Self::new(c.iter().map(|&z| XComplex::from(z)).collect())
    }

    pub fn from_re(c: &[f64]) -> Self {
        Self::new(c.iter().map(|&z| XComplex::from(z)).collect())
    }

    /// The basis vector `e_n`.
    pub fn basis(n: usize) -> Self {
        let mut coeffs = vec![XComplex::ZERO; n + 1];
        coeffs[n] = XComplex::ONE;
        Self { coeffs }
    }

    /// Stored length, trailing zeros included.
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Index one past the last nonzero entry.
    pub fn support_len(&self) -> usize {
        self.coeffs
            .iter()
            .rposition(|c| !c.is_zero())
            .map_or(0, |i| i + 1)
    }

    pub fn is_zero(&self) -> bool {
        self.support_len() == 0
    }

    pub fn coeffs(&self) -> &[XComplex] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> XComplex {
        self.coeffs.get(i).copied().unwrap_or(XComplex::ZERO)
    }

    pub fn get(&self, i: usize) -> Complex64 {
        self.coeff(i).to_complex()
    }

    pub fn trimmed(&self) -> Self {
        Self::new(self.coeffs[..self.support_len()].to_vec())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.len().max(other.len());
        Self::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.len().max(other.len());
        Self::new((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn scale(&self, s: XComplex) -> Self {
        Self::new(self.coeffs.iter().map(|&c| c * s).collect())
    }
}

/// Polynomial `Σ coeffs[m] z^m` with a configured degree bound.
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<XComplex>,
    degree_cap: usize,
}

impl Polynomial {
    /// Fails with a capacity error when the trimmed degree exceeds `degree_cap`.
    pub fn new(mut coeffs: Vec<XComplex>, degree_cap: usize) -> Result<Self> {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        if coeffs.len() > degree_cap + 1 {
            return Err(Error::Capacity {
                needed: coeffs.len() - 1,
                cap: degree_cap,
            });
        }
        Ok(Self { coeffs, degree_cap })
    }

    pub fn zero(degree_cap: usize) -> Self {
        Self {
            coeffs: Vec::new(),
            degree_cap,
        }
    }

    pub fn from_complex(c: &[Complex64]) -> Result<Self> {
        Self::new(c.iter().map(|&z| z.into()).collect(), DEFAULT_DEGREE_CAP)
    }

    pub fn from_re(c: &[f64]) -> Result<Self> {
        Self::new(c.iter().map(|&z| z.into()).collect(), DEFAULT_DEGREE_CAP)
    }

    /// `c z^m`.
    pub fn monomial(m: usize, c: XComplex, degree_cap: usize) -> Result<Self> {
        let mut coeffs = vec![XComplex::ZERO; m + 1];
        coeffs[m] = c;
        Self::new(coeffs, degree_cap)
    }

    pub fn with_cap(self, degree_cap: usize) -> Result<Self> {
        Self::new(self.coeffs, degree_cap)
    }

    pub fn coeffs(&self) -> &[XComplex] {
        &self.coeffs
    }

    pub fn coeff(&self, m: usize) -> XComplex {
        self.coeffs.get(m).copied().unwrap_or(XComplex::ZERO)
    }

    pub fn degree_cap(&self) -> usize {
        self.degree_cap
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Horner evaluation in extended range.
    pub fn eval_x(&self, z: Complex64) -> XComplex {
        let zx = XComplex::from(z);
        self.coeffs
            .iter()
            .rev()
            .fold(XComplex::ZERO, |acc, &c| acc * zx + c)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.eval_x(z).to_complex()
    }

    fn zip_with(&self, other: &Self, f: impl Fn(XComplex, XComplex) -> XComplex) -> Result<Self> {
        let n = self.coeffs.len().max(other.coeffs.len());
        let cap = self.degree_cap.max(other.degree_cap);
        Self::new((0..n).map(|m| f(self.coeff(m), other.coeff(m))).collect(), cap)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, s: XComplex) -> Self {
        let coeffs = self.coeffs.iter().map(|&c| c * s).collect();
        Self::new(coeffs, self.degree_cap).expect("scaling never raises the degree")
    }

    /// `f^{(k)}`.
    pub fn derivative(&self, k: usize) -> Self {
        if k >= self.coeffs.len() {
            return Self::zero(self.degree_cap);
        }
        let coeffs = (k..self.coeffs.len())
            .map(|m| self.coeffs[m] * falling_factorial(m, k))
            .collect();
        Self::new(coeffs, self.degree_cap).expect("differentiation never raises the degree")
    }

    /// Coefficients of `z ↦ f(z + a)` by repeated synthetic division.
    pub fn taylor_shift(&self, a: Complex64) -> Self {
        let mut c = self.coeffs.clone();
        let ax = XComplex::from(a);
        let n = c.len();
        for i in 0..n {
            for j in (i..n.saturating_sub(1)).rev() {
                let t = c[j + 1] * ax;
                c[j] += t;
            }
        }
        Self::new(c, self.degree_cap).expect("translation never raises the degree")
    }
}

/// `m! / (m - k)!` as an extended real.
pub fn falling_factorial(m: usize, k: usize) -> XComplex {
    debug_assert!(k <= m);
    factorial(m) / factorial(m - k)
}

/// `n!` in extended range. Values up to 4096 are tabulated.
pub fn factorial(n: usize) -> XComplex {
    use std::sync::OnceLock;
    const TABLE: usize = 4096;
    static FACT: OnceLock<Vec<XComplex>> = OnceLock::new();
    let table = FACT.get_or_init(|| {
        let mut t = Vec::with_capacity(TABLE + 1);
        let mut acc = XComplex::ONE;
        t.push(acc);
        for i in 1..=TABLE {
            acc = acc.scale(i as f64);
            t.push(acc);
        }
        t
    });
    if n <= TABLE {
        return table[n];
    }
    (TABLE + 1..=n).fold(table[TABLE], |acc, i| acc.scale(i as f64))
}

/// Finite exponential sum `Σ c_l exp(λ_l z)` with pairwise distinct exponents.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(from = "Vec<ExpTerm>", into = "Vec<ExpTerm>")]
pub struct ExponentialSum {
    terms: Vec<ExpTerm>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpTerm {
    pub coeff: XComplex,
    #[serde(with = "crate::json::complex")]
    pub exponent: Complex64,
}

impl From<Vec<ExpTerm>> for ExponentialSum {
    fn from(terms: Vec<ExpTerm>) -> Self {
        Self::new(terms)
    }
}

impl From<ExponentialSum> for Vec<ExpTerm> {
    fn from(s: ExponentialSum) -> Self {
        s.terms
    }
}

impl ExponentialSum {
    /// Merges equal exponents by summing coefficients and drops zero terms.
    pub fn new(terms: impl IntoIterator<Item = ExpTerm>) -> Self {
        let mut out: Vec<ExpTerm> = Vec::new();
        for t in terms {
            match out.iter_mut().find(|o| o.exponent == t.exponent) {
                Some(o) => o.coeff += t.coeff,
                None => out.push(t),
            }
        }
        out.retain(|t| !t.coeff.is_zero());
        Self { terms: out }
    }

    pub fn from_pairs(pairs: &[(Complex64, Complex64)]) -> Self {
        Self::new(pairs.iter().map(|&(c, l)| ExpTerm {
            coeff: c.into(),
            exponent: l,
        }))
    }

    pub fn single(coeff: XComplex, exponent: Complex64) -> Self {
        Self::new([ExpTerm { coeff, exponent }])
    }

    pub fn terms(&self) -> &[ExpTerm] {
        &self.terms
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient on `e_λ`, zero if absent.
    pub fn coeff_of(&self, exponent: Complex64) -> XComplex {
        self.terms
            .iter()
            .find(|t| t.exponent == exponent)
            .map_or(XComplex::ZERO, |t| t.coeff)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(self.terms.iter().chain(other.terms.iter()).copied())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-XComplex::ONE))
    }

    pub fn scale(&self, s: XComplex) -> Self {
        Self::new(self.terms.iter().map(|t| ExpTerm {
            coeff: t.coeff * s,
            exponent: t.exponent,
        }))
    }

    /// Apply `f` to every coefficient, keeping exponents.
    pub fn map_coeffs(&self, f: impl Fn(&ExpTerm) -> XComplex) -> Self {
        Self::new(self.terms.iter().map(|t| ExpTerm {
            coeff: f(t),
            exponent: t.exponent,
        }))
    }

    pub fn eval_x(&self, z: Complex64) -> XComplex {
        self.terms.iter().fold(XComplex::ZERO, |acc, t| {
            let w = t.exponent * z;
            acc + t.coeff * XComplex::from_polar_ln(w.re, w.im)
        })
    }
}

/// Disk `B(center, radius)`; its closure where a sup norm is taken.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiskRegion {
    #[serde(with = "crate::json::complex")]
    pub center: Complex64,
    pub radius: f64,
}

impl DiskRegion {
    pub fn new(center: Complex64, radius: f64) -> Result<Self> {
        let d = Self { center, radius };
        d.validate()?;
        Ok(d)
    }

    pub fn centered(radius: f64) -> Result<Self> {
        Self::new(Complex64::new(0.0, 0.0), radius)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.radius > 0.0 && self.radius.is_finite()) {
            return usage(format!("disk radius must be positive, got {}", self.radius));
        }
        Ok(())
    }

    /// `samples` equispaced points on the boundary circle.
    pub fn boundary(&self, samples: usize) -> impl Iterator<Item = Complex64> + '_ {
        (0..samples).map(move |k| {
            self.center + unit_from_turns(k as f64 / samples as f64) * self.radius
        })
    }

    /// Closed disks are disjoint.
    pub fn disjoint_from(&self, other: &DiskRegion) -> bool {
        (self.center - other.center).norm() > self.radius + other.radius
    }
}

impl Default for DiskRegion {
    fn default() -> Self {
        Self {
            center: Complex64::new(0.0, 0.0),
            radius: 1.0,
        }
    }
}

/// A vector of one of the three ambient representations.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum Element {
    Seq(CoeffVector),
    Poly(Polynomial),
    Exp(ExponentialSum),
}

/// Serialized as the bare coefficient list. The degree cap is not part of
/// the value; a parsed polynomial gets [`DEFAULT_DEGREE_CAP`] or its own
/// degree, whichever is larger.
impl Serialize for Polynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.coeffs.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Polynomial {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let coeffs = Vec::<XComplex>::deserialize(d)?;
        let cap = DEFAULT_DEGREE_CAP.max(coeffs.len().saturating_sub(1));
        Polynomial::new(coeffs, cap).map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ElementKind {
    Seq,
    Poly,
    Exp,
}

impl std::fmt::Display for ElementKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ElementKind::Seq => "sequence",
            ElementKind::Poly => "polynomial",
            ElementKind::Exp => "exponential sum",
        })
    }
}

impl From<CoeffVector> for Element {
    fn from(x: CoeffVector) -> Self {
        Element::Seq(x)
    }
}

impl From<Polynomial> for Element {
    fn from(x: Polynomial) -> Self {
        Element::Poly(x)
    }
}

impl From<ExponentialSum> for Element {
    fn from(x: ExponentialSum) -> Self {
        Element::Exp(x)
    }
}

impl Element {
    pub fn kind(&self) -> ElementKind {
        match self {
            Element::Seq(_) => ElementKind::Seq,
            Element::Poly(_) => ElementKind::Poly,
            Element::Exp(_) => ElementKind::Exp,
        }
    }

    /// The zero element of the given kind.
    pub fn zero(kind: ElementKind, degree_cap: usize) -> Self {
        match kind {
            ElementKind::Seq => Element::Seq(CoeffVector::zero()),
            ElementKind::Poly => Element::Poly(Polynomial::zero(degree_cap)),
            ElementKind::Exp => Element::Exp(ExponentialSum::default()),
        }
    }

    pub fn as_seq(&self) -> Option<&CoeffVector> {
        match self {
            Element::Seq(x) => Some(x),
            _ => None,
        }
    }

    pub fn as_poly(&self) -> Option<&Polynomial> {
        match self {
            Element::Poly(x) => Some(x),
            _ => None,
        }
    }

    pub fn as_exp(&self) -> Option<&ExponentialSum> {
        match self {
            Element::Exp(x) => Some(x),
            _ => None,
        }
    }

    fn mismatch<T>(&self, other: &Element) -> Result<T> {
        usage(format!(
            "element kinds differ: {} vs {}",
            self.kind(),
            other.kind()
        ))
    }

    pub fn add(&self, other: &Element) -> Result<Element> {
        Ok(match (self, other) {
            (Element::Seq(a), Element::Seq(b)) => Element::Seq(a.add(b)),
            (Element::Poly(a), Element::Poly(b)) => Element::Poly(a.add(b)?),
            (Element::Exp(a), Element::Exp(b)) => Element::Exp(a.add(b)),
            _ => return self.mismatch(other),
        })
    }

    pub fn sub(&self, other: &Element) -> Result<Element> {
        Ok(match (self, other) {
            (Element::Seq(a), Element::Seq(b)) => Element::Seq(a.sub(b)),
            (Element::Poly(a), Element::Poly(b)) => Element::Poly(a.sub(b)?),
            (Element::Exp(a), Element::Exp(b)) => Element::Exp(a.sub(b)),
            _ => return self.mismatch(other),
        })
    }

    pub fn scale(&self, s: XComplex) -> Element {
        match self {
            Element::Seq(a) => Element::Seq(a.scale(s)),
            Element::Poly(a) => Element::Poly(a.scale(s)),
            Element::Exp(a) => Element::Exp(a.scale(s)),
        }
    }
}

/// `sup_n |x_n|` on `c_0`, `(Σ |x_n|^q)^{1/q}` on `ℓ_q`.
pub fn seq_norm(x: &CoeffVector, space: SpaceSpec) -> f64 {
    let logs: Vec<f64> = x
        .coeffs()
        .iter()
        .filter(|c| !c.is_zero())
        .map(|c| c.log2_abs())
        .collect();
    let Some(top) = logs.iter().copied().reduce(f64::max) else {
        return 0.0;
    };
    let log2_norm = match space {
        SpaceSpec::C0 => top,
        SpaceSpec::EllQ { q } => {
            let s: f64 = logs.iter().map(|&l| ((l - top) * q).exp2()).sum();
            top + s.log2() / q
        }
    };
    log2_norm.exp2()
}

/// Max of `|f|` over `samples` equispaced points of the boundary of `disk`.
pub fn poly_sup_norm(f: &Polynomial, disk: &DiskRegion, samples: usize) -> Result<f64> {
    check_samples(samples)?;
    Ok(disk
        .boundary(samples)
        .map(|z| f.eval_x(z).abs())
        .fold(0.0, f64::max))
}

/// Same sampling rule for an exponential sum, evaluated directly.
pub fn exp_sum_sup_norm(s: &ExponentialSum, disk: &DiskRegion, samples: usize) -> Result<f64> {
    check_samples(samples)?;
    Ok(disk
        .boundary(samples)
        .map(|z| s.eval_x(z).abs())
        .fold(0.0, f64::max))
}

fn check_samples(samples: usize) -> Result<()> {
    if samples < 8 {
        return usage(format!("need at least 8 boundary samples, got {samples}"));
    }
    Ok(())
}

/// `Σ c_l exp(λ_l z)`.
pub fn exp_sum_eval(s: &ExponentialSum, z: Complex64) -> Complex64 {
    s.eval_x(z).to_complex()
}

/// Taylor truncation of an exponential sum together with the remainder bound
/// `Σ |c_l| (|λ_l| R)^{d+1} / (d+1)! · exp(|λ_l| R)` on `B(0, R)`.
pub fn exp_sum_truncate(
    s: &ExponentialSum,
    degree: usize,
    degree_cap: usize,
    radius: f64,
) -> Result<(Polynomial, f64)> {
    if degree > degree_cap {
        return Err(Error::Capacity {
            needed: degree,
            cap: degree_cap,
        });
    }
    let mut coeffs = vec![XComplex::ZERO; degree + 1];
    for t in s.terms() {
        let lam = XComplex::from(t.exponent);
        let mut power = t.coeff;
        for (m, c) in coeffs.iter_mut().enumerate() {
            if m > 0 {
                power = (power * lam).scale(1.0 / m as f64);
            }
            *c += power;
        }
    }
    let d1 = degree as f64 + 1.0;
    let bound = s
        .terms()
        .iter()
        .map(|t| {
            let a = t.exponent.norm() * radius;
            if a == 0.0 {
                return 0.0;
            }
            let log2_term = t.coeff.log2_abs()
                + d1 * a.log2()
                - factorial(degree + 1).log2_abs()
                + a / std::f64::consts::LN_2;
            log2_term.exp2()
        })
        .sum();
    Ok((Polynomial::new(coeffs, degree_cap)?, bound))
}

/// Distances between elements: `seq_norm` for sequences, boundary-sampled sup
/// norm on one disk for functions.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Metric {
    #[serde(default)]
    pub space: SpaceSpec,
    #[serde(default)]
    pub disk: DiskRegion,
    #[serde(default = "default_samples")]
    pub samples: usize,
}

fn default_samples() -> usize {
    64
}

impl Default for Metric {
    fn default() -> Self {
        Self {
            space: SpaceSpec::default(),
            disk: DiskRegion::default(),
            samples: default_samples(),
        }
    }
}

impl Metric {
    pub fn validate(&self) -> Result<()> {
        self.space.validate()?;
        self.disk.validate()?;
        check_samples(self.samples)
    }

    pub fn norm(&self, x: &Element) -> Result<f64> {
        match x {
            Element::Seq(v) => Ok(seq_norm(v, self.space)),
            Element::Poly(p) => poly_sup_norm(p, &self.disk, self.samples),
            Element::Exp(s) => exp_sum_sup_norm(s, &self.disk, self.samples),
        }
    }

    pub fn distance(&self, a: &Element, b: &Element) -> Result<f64> {
        self.norm(&a.sub(b)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn seq_norm_examples() {
        assert_eq!(seq_norm(&CoeffVector::zero(), SpaceSpec::C0), 0.0);
        assert_eq!(seq_norm(&CoeffVector::from_re(&[0.0, 0.0]), SpaceSpec::default()), 0.0);
        let v = CoeffVector::from_re(&[3.0, 4.0]);
        assert!((seq_norm(&v, SpaceSpec::ell(2.0).unwrap()) - 5.0).abs() < 1e-14);
        let v = CoeffVector::from_re(&[1.0, -2.0, 0.5]);
        assert_eq!(seq_norm(&v, SpaceSpec::C0), 2.0);
        let v = CoeffVector::from_re(&[1.0, -2.0, 0.5]);
        assert!((seq_norm(&v, SpaceSpec::ell(1.0).unwrap()) - 3.5).abs() < 1e-14);
    }

    #[test]
    fn bad_q_rejected() {
        assert!(SpaceSpec::ell(0.5).is_err());
        assert!(DiskRegion::centered(0.0).is_err());
    }

    #[test]
    fn poly_sup_norm_examples() {
        let disk2 = DiskRegion::centered(2.0).unwrap();
        let zero = Polynomial::zero(DEFAULT_DEGREE_CAP);
        assert_eq!(poly_sup_norm(&zero, &disk2, 64).unwrap(), 0.0);
        let z = Polynomial::from_re(&[0.0, 1.0]).unwrap();
        assert!((poly_sup_norm(&z, &disk2, 64).unwrap() - 2.0).abs() < 1e-12);
        // |z^2 + 1| on the unit circle peaks at z = ±1
        let p = Polynomial::from_re(&[1.0, 0.0, 1.0]).unwrap();
        let unit = DiskRegion::default();
        assert!((poly_sup_norm(&p, &unit, 256).unwrap() - 2.0).abs() < 1e-9);
        assert!(poly_sup_norm(&p, &unit, 4).is_err());
    }

    #[test]
    fn exp_sum_eval_examples() {
        assert_eq!(exp_sum_eval(&ExponentialSum::default(), c(1.0, 0.0)), c(0.0, 0.0));
        let one = ExponentialSum::from_pairs(&[(c(1.0, 0.0), c(0.0, 0.0))]);
        assert!((exp_sum_eval(&one, c(5.0, 0.0)) - c(1.0, 0.0)).norm() < 1e-15);
        let s = ExponentialSum::from_pairs(&[(c(2.0, 0.0), c(2f64.ln(), 0.0))]);
        assert!((exp_sum_eval(&s, c(1.0, 0.0)) - c(4.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn exp_sum_merges_duplicates() {
        let s = ExponentialSum::from_pairs(&[
            (c(1.0, 0.0), c(2.0, 0.0)),
            (c(3.0, 0.0), c(2.0, 0.0)),
            (c(1.0, 0.0), c(-1.0, 0.0)),
            (c(-1.0, 0.0), c(-1.0, 0.0)),
        ]);
        assert_eq!(s.terms().len(), 1);
        assert_eq!(s.coeff_of(c(2.0, 0.0)).to_complex(), c(4.0, 0.0));
    }

    #[test]
    fn exp_sum_truncate_examples() {
        let one = ExponentialSum::from_pairs(&[(c(1.0, 0.0), c(0.0, 0.0))]);
        let (p, bound) = exp_sum_truncate(&one, 5, DEFAULT_DEGREE_CAP, 1.0).unwrap();
        assert_eq!(p.degree(), Some(0));
        assert_eq!(p.coeff(0).to_complex(), c(1.0, 0.0));
        assert_eq!(bound, 0.0);

        let e = ExponentialSum::from_pairs(&[(c(1.0, 0.0), c(1.0, 0.0))]);
        let (p, _) = exp_sum_truncate(&e, 2, DEFAULT_DEGREE_CAP, 1.0).unwrap();
        let want = [1.0, 1.0, 0.5];
        for (m, w) in want.iter().enumerate() {
            assert!((p.coeff(m).to_complex() - c(*w, 0.0)).norm() < 1e-15);
        }

        // e^z - e^{-z} = 2 sinh z
        let sinh2 = ExponentialSum::from_pairs(&[(c(1.0, 0.0), c(1.0, 0.0)), (c(-1.0, 0.0), c(-1.0, 0.0))]);
        let (p, _) = exp_sum_truncate(&sinh2, 3, DEFAULT_DEGREE_CAP, 1.0).unwrap();
        let want = [0.0, 2.0, 0.0, 1.0 / 3.0];
        for (m, w) in want.iter().enumerate() {
            assert!((p.coeff(m).to_complex() - c(*w, 0.0)).norm() < 1e-15);
        }

        assert!(matches!(
            exp_sum_truncate(&e, 600, DEFAULT_DEGREE_CAP, 1.0),
            Err(Error::Capacity { .. })
        ));
    }

    #[test]
    fn taylor_shift_binomial() {
        let f = Polynomial::from_re(&[0.0, 0.0, 1.0]).unwrap();
        let g = f.taylor_shift(c(1.0, 0.0));
        for (m, w) in [1.0, 2.0, 1.0].iter().enumerate() {
            assert_eq!(g.coeff(m).to_complex(), c(*w, 0.0));
        }
    }

    #[test]
    fn polynomial_capacity() {
        assert!(matches!(
            Polynomial::monomial(10, XComplex::ONE, 5),
            Err(Error::Capacity { needed: 10, cap: 5 })
        ));
    }
}
