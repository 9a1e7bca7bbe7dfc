//! Operator descriptions and their exact action on space elements.
//!
//! Four families are supported: scaled powers of weighted backward shifts on
//! sequence spaces, and scaled differentiation powers, scaled translations
//! and convolution operators `Φ(D)` on entire functions.
//!
//! Iterates are computed in closed form wherever one exists. Scalars such as
//! `λ^n`, weight products `a_{j+1} ⋯ a_{j+rn}` and `Φ(μ)^n` go through
//! [`pow_polar`](crate::xcomplex::pow_polar) so that `n` in the thousands
//! neither overflows nor loses the argument.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{usage, Result};
use crate::space::{factorial, CoeffVector, Element, Polynomial};
use crate::xcomplex::{pow_polar, XComplex};

/// How a weight sequence `(a_n)_{n ≥ 1}` is generated.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum WeightGenerator {
    Constant(#[serde(with = "crate::json::complex")] Complex64),
    Periodic(#[serde(with = "crate::json::complex_vec")] Vec<Complex64>),
    Explicit {
        #[serde(with = "crate::json::complex_vec")]
        values: Vec<Complex64>,
        #[serde(with = "crate::json::complex")]
        tail: Complex64,
    },
}

/// Bounded weight sequence with nonzero terms, indexed from 1.
///
/// Prefix products of the listed values are kept so that any window product
/// costs O(1) regardless of where it sits.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "WeightGenerator", into = "WeightGenerator")]
pub struct WeightSequence {
    generator: WeightGenerator,
    prefix: Vec<XComplex>,
    ln_prefix: Vec<f64>,
    bound: f64,
}

impl TryFrom<WeightGenerator> for WeightSequence {
    type Error = crate::Error;

    fn try_from(generator: WeightGenerator) -> Result<Self> {
        let listed: Vec<Complex64> = match &generator {
            WeightGenerator::Constant(c) => vec![*c],
            WeightGenerator::Periodic(p) => {
                if p.is_empty() {
                    return usage("periodic weights need at least one value");
                }
                // two periods so a cyclic window is one prefix ratio
                p.iter().chain(p.iter()).copied().collect()
            }
            WeightGenerator::Explicit { values, tail } => {
                values.iter().chain(std::iter::once(tail)).copied().collect()
            }
        };
        if let Some(z) = listed.iter().find(|c| !(c.norm() > 0.0 && c.norm().is_finite())) {
            return usage(format!("weights must be finite and nonzero, got {z}"));
        }
        let bound = listed.iter().map(|c| c.norm()).fold(0.0, f64::max);
        let mut prefix = vec![XComplex::ONE];
        let mut ln_prefix = vec![0.0];
        if !matches!(generator, WeightGenerator::Constant(_)) {
            let n = match &generator {
                WeightGenerator::Explicit { values, .. } => values.len(),
                _ => listed.len(),
            };
            for c in &listed[..n] {
                prefix.push(*prefix.last().unwrap() * XComplex::from(*c));
                ln_prefix.push(ln_prefix.last().unwrap() + c.norm().ln());
            }
        }
        Ok(Self {
            generator,
            prefix,
            ln_prefix,
            bound,
        })
    }
}

impl From<WeightSequence> for WeightGenerator {
    fn from(w: WeightSequence) -> Self {
        w.generator
    }
}

impl WeightSequence {
    pub fn new(generator: WeightGenerator) -> Result<Self> {
        Self::try_from(generator)
    }

    pub fn constant(c: Complex64) -> Result<Self> {
        Self::new(WeightGenerator::Constant(c))
    }

    /// The unweighted shift's weights `(1, 1, ...)`.
    pub fn unit() -> Self {
        Self::constant(Complex64::new(1.0, 0.0)).expect("1 is a valid weight")
    }

    pub fn generator(&self) -> &WeightGenerator {
        &self.generator
    }

    /// `sup_n |a_n|`.
    pub fn bound(&self) -> f64 {
        self.bound
    }

    /// `Some(c)` when every term equals `c`.
    pub fn as_constant(&self) -> Option<Complex64> {
        match &self.generator {
            WeightGenerator::Constant(c) => Some(*c),
            WeightGenerator::Periodic(p) if p.iter().all(|v| *v == p[0]) => Some(p[0]),
            WeightGenerator::Explicit { values, tail } if values.iter().all(|v| v == tail) => {
                Some(*tail)
            }
            _ => None,
        }
    }

    /// `a_n`, `n ≥ 1`.
    pub fn term(&self, n: usize) -> Complex64 {
        assert!(n >= 1, "weights are indexed from 1");
        match &self.generator {
            WeightGenerator::Constant(c) => *c,
            WeightGenerator::Periodic(p) => p[(n - 1) % p.len()],
            WeightGenerator::Explicit { values, tail } => values.get(n - 1).copied().unwrap_or(*tail),
        }
    }

    /// `a_start ⋯ a_{start+len-1}`.
    pub fn product(&self, start: usize, len: usize) -> XComplex {
        assert!(start >= 1, "weights are indexed from 1");
        if len == 0 {
            return XComplex::ONE;
        }
        match &self.generator {
            WeightGenerator::Constant(c) => pow_polar(*c, len as u64),
            WeightGenerator::Periodic(p) => {
                let period = p.len();
                let full = len / period;
                let rem = len % period;
                let o = (start - 1) % period;
                let whole = self.prefix[period].powu_polar(full as u64);
                whole * (self.prefix[o + rem] / self.prefix[o])
            }
            WeightGenerator::Explicit { values, tail } => {
                let end = start + len - 1;
                let listed_end = end.min(values.len());
                let listed = if start <= listed_end {
                    self.prefix[listed_end] / self.prefix[start - 1]
                } else {
                    XComplex::ONE
                };
                let tail_count = end - listed_end.max(start - 1);
                listed * pow_polar(*tail, tail_count as u64)
            }
        }
    }

    /// `ln |a_start ⋯ a_{start+len-1}|`.
    pub fn ln_abs_product(&self, start: usize, len: usize) -> f64 {
        assert!(start >= 1, "weights are indexed from 1");
        if len == 0 {
            return 0.0;
        }
        match &self.generator {
            WeightGenerator::Constant(c) => len as f64 * c.norm().ln(),
            WeightGenerator::Periodic(p) => {
                let period = p.len();
                let full = len / period;
                let rem = len % period;
                let o = (start - 1) % period;
                full as f64 * self.ln_prefix[period] + (self.ln_prefix[o + rem] - self.ln_prefix[o])
            }
            WeightGenerator::Explicit { values, tail } => {
                let end = start + len - 1;
                let listed_end = end.min(values.len());
                let listed = if start <= listed_end {
                    self.ln_prefix[listed_end] - self.ln_prefix[start - 1]
                } else {
                    0.0
                };
                let tail_count = end - listed_end.max(start - 1);
                listed + tail_count as f64 * tail.norm().ln()
            }
        }
    }
}

/// Entire function `Φ(z) = Σ a_n z^n` of exponential type, given by finitely
/// many power-series coefficients.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConvolutionSymbol {
    #[serde(with = "crate::json::complex_vec")]
    pub coeffs: Vec<Complex64>,
    /// `(A, B)` with `|Φ(z)| ≤ A exp(B|z|)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub type_constants: Option<(f64, f64)>,
}

impl ConvolutionSymbol {
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        let s = Self {
            coeffs,
            type_constants: None,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if self.coeffs.is_empty() {
            return usage("convolution symbol needs at least one coefficient");
        }
        if let Some((a, b)) = self.type_constants {
            if !(a > 0.0 && b >= 0.0) {
                return usage(format!("exponential type constants need A > 0, B >= 0, got ({a}, {b})"));
            }
        }
        Ok(())
    }

    /// Stored constants, or `A = max |a_n| n!`, `B = 1`, which always hold
    /// for a finite coefficient list.
    pub fn exponential_type(&self) -> (f64, f64) {
        self.type_constants.unwrap_or_else(|| {
            let a = self
                .coeffs
                .iter()
                .enumerate()
                .map(|(n, c)| c.norm() * factorial(n).abs())
                .fold(0.0, f64::max);
            (a.max(f64::MIN_POSITIVE), 1.0)
        })
    }

    /// `Φ(λ)`.
    pub fn eval(&self, lambda: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * lambda + c)
    }

    /// `Some(ζ)` with `|ζ| = 1` and `other = ζ · self` coefficientwise.
    pub fn unimodular_ratio(&self, other: &ConvolutionSymbol, tol: f64) -> Option<Complex64> {
        let n = self.coeffs.len().max(other.coeffs.len());
        let get = |v: &[Complex64], k: usize| v.get(k).copied().unwrap_or_default();
        let pivot = (0..n).max_by(|&i, &j| {
            get(&self.coeffs, i)
                .norm()
                .total_cmp(&get(&self.coeffs, j).norm())
        })?;
        let p = get(&self.coeffs, pivot);
        if p.norm() == 0.0 {
            return None;
        }
        let zeta = get(&other.coeffs, pivot) / p;
        if (zeta.norm() - 1.0).abs() > tol {
            return None;
        }
        let scale = p.norm();
        let fits = (0..n).all(|k| (get(&other.coeffs, k) - zeta * get(&self.coeffs, k)).norm() <= tol * scale);
        fits.then_some(zeta)
    }
}

/// One operator `T_j`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum OperatorSpec {
    /// `λ B_a^r` on `c_0` / `ℓ_q`.
    ShiftPower {
        #[serde(default = "WeightSequence::unit")]
        weights: WeightSequence,
        r: usize,
        #[serde(with = "crate::json::complex")]
        lambda: Complex64,
    },
    /// `λ D^r` on entire functions.
    DiffPower {
        r: usize,
        #[serde(with = "crate::json::complex")]
        lambda: Complex64,
    },
    /// `λ τ_a`, `(τ_a f)(z) = f(z + a)`.
    Translation {
        #[serde(with = "crate::json::complex")]
        a: Complex64,
        #[serde(with = "crate::json::complex")]
        lambda: Complex64,
    },
    /// `Φ(D) f = Σ a_n f^{(n)}`.
    Convolution { symbol: ConvolutionSymbol },
}

impl OperatorSpec {
    /// The unweighted backward shift `B`.
    pub fn backward_shift() -> Self {
        Self::shift(Complex64::new(1.0, 0.0), 1)
    }

    /// `λ B^r`.
    pub fn shift(lambda: Complex64, r: usize) -> Self {
        OperatorSpec::ShiftPower {
            weights: WeightSequence::unit(),
            r,
            lambda,
        }
    }

    /// `λ B_a^r`.
    pub fn weighted_shift(weights: WeightSequence, r: usize, lambda: Complex64) -> Self {
        OperatorSpec::ShiftPower { weights, r, lambda }
    }

    /// `λ D^r`.
    pub fn diff(lambda: Complex64, r: usize) -> Self {
        OperatorSpec::DiffPower { r, lambda }
    }

    /// `λ τ_a`.
    pub fn translation(a: Complex64, lambda: Complex64) -> Self {
        OperatorSpec::Translation { a, lambda }
    }

    pub fn convolution(coeffs: Vec<Complex64>) -> Result<Self> {
        Ok(OperatorSpec::Convolution {
            symbol: ConvolutionSymbol::new(coeffs)?,
        })
    }

    pub fn validate(&self) -> Result<()> {
        let nonzero = |name: &str, c: Complex64| {
            if c.norm() > 0.0 && c.norm().is_finite() {
                Ok(())
            } else {
                usage(format!("{name} must be finite and nonzero, got {c}"))
            }
        };
        match self {
            OperatorSpec::ShiftPower { r, lambda, .. } | OperatorSpec::DiffPower { r, lambda } => {
                if *r == 0 {
                    return usage("operator power r must be at least 1");
                }
                nonzero("lambda", *lambda)
            }
            OperatorSpec::Translation { a, lambda } => {
                nonzero("translation step a", *a)?;
                nonzero("lambda", *lambda)
            }
            OperatorSpec::Convolution { symbol } => symbol.validate(),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            OperatorSpec::ShiftPower { .. } => "shift_power",
            OperatorSpec::DiffPower { .. } => "diff_power",
            OperatorSpec::Translation { .. } => "translation",
            OperatorSpec::Convolution { .. } => "convolution",
        }
    }

    fn reject<T>(&self, x: &Element) -> Result<T> {
        usage(format!("{} cannot act on a {}", self.name(), x.kind()))
    }
}

/// `T x`.
pub fn apply(op: &OperatorSpec, x: &Element) -> Result<Element> {
    op.validate()?;
    Ok(match (op, x) {
        (OperatorSpec::ShiftPower { weights, r, lambda }, Element::Seq(v)) => {
            // r successive applications of (B_a x)_n = a_{n+1} x_{n+1}
            let mut cur = v.coeffs().to_vec();
            for _ in 0..*r {
                cur = (0..cur.len().saturating_sub(1))
                    .map(|n| XComplex::from(weights.term(n + 1)) * cur[n + 1])
                    .collect();
            }
            let lam = XComplex::from(*lambda);
            Element::Seq(CoeffVector::new(cur.into_iter().map(|c| c * lam).collect()))
        }
        (OperatorSpec::DiffPower { r, lambda }, Element::Poly(f)) => {
            Element::Poly(f.derivative(*r).scale((*lambda).into()))
        }
        (OperatorSpec::DiffPower { r, lambda }, Element::Exp(s)) => Element::Exp(
            s.map_coeffs(|t| t.coeff * XComplex::from(*lambda * t.exponent.powu(*r as u32))),
        ),
        (OperatorSpec::Translation { a, lambda }, Element::Poly(f)) => {
            Element::Poly(f.taylor_shift(*a).scale((*lambda).into()))
        }
        (OperatorSpec::Convolution { symbol }, Element::Poly(f)) => {
            Element::Poly(convolve_once(&symbol.coeffs, f)?)
        }
        (OperatorSpec::Convolution { symbol }, Element::Exp(s)) => {
            Element::Exp(s.map_coeffs(|t| t.coeff * XComplex::from(symbol.eval(t.exponent))))
        }
        _ => return op.reject(x),
    })
}

/// `Σ_{k ≤ deg f} a_k f^{(k)}`; symbol coefficients past `deg f` are never read.
fn convolve_once(symbol: &[Complex64], f: &Polynomial) -> Result<Polynomial> {
    let Some(deg) = f.degree() else {
        return Ok(f.clone());
    };
    let mut acc = Polynomial::zero(f.degree_cap());
    for (k, a) in symbol.iter().enumerate().take(deg + 1) {
        if a.norm() != 0.0 {
            acc = acc.add(&f.derivative(k).scale((*a).into()))?;
        }
    }
    Ok(acc)
}

/// Power series `s^n mod z^{len}` by repeated squaring.
fn truncated_series_pow(s: &[XComplex], n: u64, len: usize) -> Vec<XComplex> {
    let mul = |a: &[XComplex], b: &[XComplex]| {
        let mut out = vec![XComplex::ZERO; len];
        for (i, &x) in a.iter().enumerate().take(len) {
            if x.is_zero() {
                continue;
            }
            for (j, &y) in b.iter().enumerate().take(len - i) {
                out[i + j] += x * y;
            }
        }
        out
    };
    let mut base: Vec<XComplex> = s.iter().copied().take(len).collect();
    base.resize(len, XComplex::ZERO);
    let mut acc = vec![XComplex::ZERO; len];
    acc[0] = XComplex::ONE;
    let mut n = n;
    while n > 0 {
        if n & 1 == 1 {
            acc = mul(&acc, &base);
        }
        n >>= 1;
        if n > 0 {
            base = mul(&base, &base);
        }
    }
    acc
}

/// `T^n x`.
pub fn iterate(op: &OperatorSpec, x: &Element, n: u64) -> Result<Element> {
    op.validate()?;
    if n == 0 {
        return match (op, x) {
            (OperatorSpec::ShiftPower { .. }, Element::Seq(_))
            | (OperatorSpec::DiffPower { .. }, Element::Poly(_) | Element::Exp(_))
            | (OperatorSpec::Translation { .. }, Element::Poly(_))
            | (OperatorSpec::Convolution { .. }, Element::Poly(_) | Element::Exp(_)) => Ok(x.clone()),
            _ => op.reject(x),
        };
    }
    Ok(match (op, x) {
        (OperatorSpec::ShiftPower { weights, r, lambda }, Element::Seq(v)) => {
            Element::Seq(iterate_shift(weights, *r, *lambda, v, n))
        }
        (OperatorSpec::DiffPower { r, lambda }, Element::Poly(f)) => {
            let k = (*r as u64).saturating_mul(n);
            let Some(deg) = f.degree() else {
                return Ok(x.clone());
            };
            if k > deg as u64 {
                return Ok(Element::Poly(Polynomial::zero(f.degree_cap())));
            }
            let k = k as usize;
            let lam_n = pow_polar(*lambda, n);
            let coeffs = (0..=deg - k)
                .map(|m| f.coeff(m + k) * (factorial(m + k) / factorial(m)) * lam_n)
                .collect();
            Element::Poly(Polynomial::new(coeffs, f.degree_cap())?)
        }
        (OperatorSpec::DiffPower { r, lambda }, Element::Exp(s)) => Element::Exp(s.map_coeffs(|t| {
            t.coeff * pow_polar(*lambda, n) * pow_polar(t.exponent, (*r as u64) * n)
        })),
        (OperatorSpec::Translation { a, lambda }, Element::Poly(f)) => {
            let shifted = f.taylor_shift(*a * n as f64);
            Element::Poly(shifted.scale(pow_polar(*lambda, n)))
        }
        (OperatorSpec::Convolution { symbol }, Element::Poly(f)) => {
            let Some(deg) = f.degree() else {
                return Ok(x.clone());
            };
            // Φ(D)^n = (Φ^n)(D), and only the first deg+1 series terms act
            let sym: Vec<XComplex> = symbol.coeffs.iter().map(|&c| c.into()).collect();
            let power = truncated_series_pow(&sym, n, deg + 1);
            let mut acc = Polynomial::zero(f.degree_cap());
            for (k, c) in power.iter().enumerate() {
                if !c.is_zero() {
                    acc = acc.add(&f.derivative(k).scale(*c))?;
                }
            }
            Element::Poly(acc)
        }
        (OperatorSpec::Convolution { symbol }, Element::Exp(s)) => {
            Element::Exp(s.map_coeffs(|t| t.coeff * pow_polar(symbol.eval(t.exponent), n)))
        }
        _ => return op.reject(x),
    })
}

/// `(λ B_a^r)^n x` in closed form:
/// `(T^n x)_i = λ^n · a_{i+1} ⋯ a_{i+rn} · x_{i+rn}`.
fn iterate_shift(
    weights: &WeightSequence,
    r: usize,
    lambda: Complex64,
    v: &CoeffVector,
    n: u64,
) -> CoeffVector {
    let s = (r as u64).saturating_mul(n);
    if s >= v.len() as u64 {
        return CoeffVector::zero();
    }
    let s = s as usize;
    let lam_n = pow_polar(lambda, n);
    let constant = weights.as_constant().map(|c| pow_polar(c, s as u64) * lam_n);
    let coeffs = (0..v.len() - s)
        .map(|i| {
            let c = v.coeff(i + s);
            if c.is_zero() {
                return XComplex::ZERO;
            }
            let factor = constant.unwrap_or_else(|| weights.product(i + 1, s) * lam_n);
            c * factor
        })
        .collect();
    CoeffVector::new(coeffs)
}

/// `[T x, T^2 x, ..., T^N x]`.
pub fn orbit(op: &OperatorSpec, x: &Element, len: usize) -> Result<Vec<Element>> {
    (1..=len as u64).map(|n| iterate(op, x, n)).collect()
}

/// `P(T) x = Σ_k P[k] T^k x`.
pub fn apply_operator_polynomial(p: &[Complex64], op: &OperatorSpec, x: &Element) -> Result<Element> {
    if p.is_empty() {
        return usage("operator polynomial needs at least one coefficient");
    }
    let mut acc: Option<Element> = None;
    for (k, c) in p.iter().enumerate() {
        let term = iterate(op, x, k as u64)?.scale((*c).into());
        acc = Some(match acc {
            None => term,
            Some(a) => a.add(&term)?,
        });
    }
    Ok(acc.expect("p is nonempty"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::{ExponentialSum, DEFAULT_DEGREE_CAP};

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn seq(v: &Element) -> Vec<Complex64> {
        let s = v.as_seq().unwrap().trimmed();
        (0..s.len()).map(|i| s.get(i)).collect()
    }

    fn poly(v: &[f64]) -> Element {
        Element::Poly(Polynomial::from_re(v).unwrap())
    }

    fn poly_coeffs(v: &Element) -> Vec<Complex64> {
        let p = v.as_poly().unwrap();
        p.coeffs().iter().map(|c| c.to_complex()).collect()
    }

    #[test]
    fn apply_examples() {
        let b = OperatorSpec::backward_shift();
        let y = apply(&b, &CoeffVector::basis(1).into()).unwrap();
        assert_eq!(seq(&y), vec![c(1.0)]);

        let d = OperatorSpec::diff(c(1.0), 1);
        let y = apply(&d, &poly(&[0.0, 0.0, 0.0, 1.0])).unwrap();
        assert_eq!(poly_coeffs(&y), vec![c(0.0), c(0.0), c(3.0)]);

        // Φ(z) = z on e^{2z}
        let conv = OperatorSpec::convolution(vec![c(0.0), c(1.0)]).unwrap();
        let e2 = Element::Exp(ExponentialSum::from_pairs(&[(c(1.0), c(2.0))]));
        let y = apply(&conv, &e2).unwrap();
        assert_eq!(y.as_exp().unwrap().coeff_of(c(2.0)).to_complex(), c(2.0));

        let tau = OperatorSpec::translation(c(1.0), c(1.0));
        let y = apply(&tau, &poly(&[0.0, 0.0, 1.0])).unwrap();
        assert_eq!(poly_coeffs(&y), vec![c(1.0), c(2.0), c(1.0)]);
    }

    #[test]
    fn kind_mismatch_is_usage_error() {
        let b = OperatorSpec::backward_shift();
        assert!(matches!(apply(&b, &poly(&[1.0])), Err(crate::Error::Usage(_))));
        let tau = OperatorSpec::translation(c(1.0), c(1.0));
        let e = Element::Exp(ExponentialSum::from_pairs(&[(c(1.0), c(1.0))]));
        assert!(matches!(apply(&tau, &e), Err(crate::Error::Usage(_))));
        assert!(matches!(iterate(&tau, &e, 3), Err(crate::Error::Usage(_))));
        assert!(matches!(iterate(&tau, &e, 0), Err(crate::Error::Usage(_))));
    }

    #[test]
    fn iterate_examples() {
        let two_b = OperatorSpec::shift(c(2.0), 1);
        let x: Element = CoeffVector::basis(3).into();
        assert_eq!(iterate(&two_b, &x, 0).unwrap(), x);
        // 2B(2B(2B e_3)) = 2B(2B 2e_2) = 2B 4e_1 = 8e_0
        let by_hand = (0..3).fold(x.clone(), |acc, _| apply(&two_b, &acc).unwrap());
        assert_eq!(seq(&by_hand), vec![c(8.0)]);
        assert_eq!(seq(&iterate(&two_b, &x, 3).unwrap()), vec![c(8.0)]);

        let d = OperatorSpec::diff(c(1.0), 1);
        let y = iterate(&d, &poly(&[0.0, 0.0, 1.0]), 3).unwrap();
        assert!(y.as_poly().unwrap().is_zero());
    }

    #[test]
    fn orbit_examples() {
        let b = OperatorSpec::backward_shift();
        let o = orbit(&b, &CoeffVector::basis(2).into(), 3).unwrap();
        assert_eq!(seq(&o[0]), vec![c(0.0), c(1.0)]);
        assert_eq!(seq(&o[1]), vec![c(1.0)]);
        assert!(o[2].as_seq().unwrap().is_zero());

        let two_b = OperatorSpec::shift(c(2.0), 1);
        let o = orbit(&two_b, &CoeffVector::from_re(&[1.0, 1.0, 1.0]).into(), 2).unwrap();
        assert_eq!(seq(&o[0]), vec![c(2.0), c(2.0)]);
        assert_eq!(seq(&o[1]), vec![c(4.0)]);

        let d = OperatorSpec::diff(c(1.0), 1);
        let o = orbit(&d, &poly(&[1.0, 1.0]), 2).unwrap();
        assert_eq!(poly_coeffs(&o[0]), vec![c(1.0)]);
        assert!(o[1].as_poly().unwrap().is_zero());
    }

    #[test]
    fn operator_polynomial_examples() {
        let b = OperatorSpec::backward_shift();
        let x: Element = CoeffVector::basis(1).into();
        assert_eq!(apply_operator_polynomial(&[c(1.0)], &b, &x).unwrap(), x);
        let y = apply_operator_polynomial(&[c(0.0), c(1.0)], &b, &x).unwrap();
        assert_eq!(seq(&y), seq(&apply(&b, &x).unwrap()));
        let y = apply_operator_polynomial(&[c(1.0), c(1.0)], &b, &x).unwrap();
        assert_eq!(seq(&y), vec![c(1.0), c(1.0)]);
        assert!(apply_operator_polynomial(&[], &b, &x).is_err());
    }

    #[test]
    fn weight_products() {
        let w = WeightSequence::new(WeightGenerator::Periodic(vec![c(2.0), c(3.0)])).unwrap();
        // a_2 a_3 a_4 a_5 = 3 * 2 * 3 * 2
        assert!((w.product(2, 4).to_complex() - c(36.0)).norm() < 1e-12);
        assert!((w.ln_abs_product(2, 4) - 36f64.ln()).abs() < 1e-12);
        let w = WeightSequence::new(WeightGenerator::Explicit {
            values: vec![c(1.0), c(2.0), c(4.0)],
            tail: c(0.5),
        })
        .unwrap();
        // a_2 .. a_6 = 2 * 4 * 0.5^3
        assert!((w.product(2, 5).to_complex() - c(1.0)).norm() < 1e-12);
        assert!((w.product(5, 2).to_complex() - c(0.25)).norm() < 1e-12);
        assert!(w.ln_abs_product(2, 5).abs() < 1e-12);
        assert!(WeightSequence::constant(c(0.0)).is_err());
        assert_eq!(w.bound(), 4.0);
    }

    #[test]
    fn weighted_shift_closed_form_matches_repeated_apply() {
        let w = WeightSequence::new(WeightGenerator::Periodic(vec![c(2.0), Complex64::new(0.0, 1.5), c(0.7)]))
            .unwrap();
        let op = OperatorSpec::weighted_shift(w, 2, Complex64::new(1.1, -0.3));
        let x: Element = CoeffVector::from_complex(
            &(0..20).map(|k| Complex64::new(k as f64, 1.0 - k as f64)).collect::<Vec<_>>(),
        )
        .into();
        let by_hand = (0..4).fold(x.clone(), |acc, _| apply(&op, &acc).unwrap());
        let closed = iterate(&op, &x, 4).unwrap();
        let diff = by_hand.sub(&closed).unwrap();
        assert!(crate::space::seq_norm(diff.as_seq().unwrap(), crate::SpaceSpec::C0) < 1e-9);
    }

    #[test]
    fn convolution_closed_form_matches_repeated_apply() {
        let op = OperatorSpec::convolution(vec![c(0.5), c(1.0), c(0.25)]).unwrap();
        let f = poly(&[1.0, -2.0, 0.5, 3.0, 1.0]);
        let by_hand = (0..5).fold(f.clone(), |acc, _| apply(&op, &acc).unwrap());
        let closed = iterate(&op, &f, 5).unwrap();
        for (a, b) in poly_coeffs(&by_hand).iter().zip(poly_coeffs(&closed)) {
            assert!((a - b).norm() < 1e-10);
        }
    }

    #[test]
    fn invalid_operator_rejected() {
        let op = OperatorSpec::shift(c(0.0), 1);
        assert!(apply(&op, &CoeffVector::basis(0).into()).is_err());
        let op = OperatorSpec::diff(c(1.0), 0);
        assert!(apply(&op, &poly(&[1.0])).is_err());
        let p = Polynomial::zero(DEFAULT_DEGREE_CAP);
        assert!(apply(&OperatorSpec::diff(c(1.0), 1), &p.into()).is_ok());
    }
}
