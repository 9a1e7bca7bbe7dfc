//! Right inverse for convolution families `Φ_1(D), ..., Φ_p(D)` acting on
//! exponential sums, where every `e_λ` is an eigenvector with eigenvalue
//! `Φ_i(λ)`.
//!
//! Symbols that are unimodular multiples of each other form one class; an
//! exponent `λ` belongs to the dominant region of `Φ_i` when `|Φ_i(λ)| > 1`
//! and no other symbol is larger there.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{usage, Result};
use crate::operators::ConvolutionSymbol;
use crate::shift_analysis::{mod_eq, TOL_MOD};
use crate::space::{ExpTerm, ExponentialSum};
use crate::xcomplex::pow_polar_neg;

/// Margin required before a grid point is reported as interior.
pub const MARGIN_MIN: f64 = 1e-6;

/// For each symbol `i`, the members `j` with `Φ_j = ζ Φ_i`, `|ζ| = 1`,
/// together with `ζ` (`i` itself included with `ζ = 1`).
pub fn symbol_classes(symbols: &[ConvolutionSymbol]) -> Vec<Vec<(usize, Complex64)>> {
    symbols
        .iter()
        .map(|si| {
            symbols
                .iter()
                .enumerate()
                .filter_map(|(j, sj)| si.unimodular_ratio(sj, TOL_MOD).map(|z| (j, z)))
                .collect()
        })
        .collect()
}

/// Checks that `λ` lies in the dominant region of symbol `i`.
fn check_dominant(
    symbols: &[ConvolutionSymbol],
    classes: &[Vec<(usize, Complex64)>],
    i: usize,
    l: usize,
    lambda: Complex64,
) -> Result<()> {
    let own = symbols[i].eval(lambda).norm();
    if !(own > 1.0 && !mod_eq(own, 1.0)) {
        return usage(format!(
            "exponent {lambda} (target {i}, term {l}): |Phi_{}| = {own} is not > 1",
            i + 1
        ));
    }
    for (j, s) in symbols.iter().enumerate() {
        let other = s.eval(lambda).norm();
        let same_class = classes[i].iter().any(|&(k, _)| k == j);
        if other > own && !mod_eq(other, own) {
            return usage(format!(
                "exponent {lambda} (target {i}, term {l}): |Phi_{}| = {other} exceeds |Phi_{}| = {own}",
                j + 1,
                i + 1
            ));
        }
        if !same_class && mod_eq(other, own) {
            return usage(format!(
                "exponent {lambda} (target {i}, term {l}): |Phi_{}| = |Phi_{}| there but the symbols are not unimodular multiples",
                j + 1,
                i + 1
            ));
        }
    }
    Ok(())
}

/// `R_n (v_1, ..., v_p) = Σ_i (1/τ(i)) Σ_l c_{i,l} Φ_i(λ_{i,l})^{-n} e_{λ_{i,l}}`.
///
/// `targets` is either empty (result: the empty sum) or has one entry per
/// symbol; every exponent of `targets[i]` must lie in the dominant region of
/// `symbols[i]`.
pub fn conv_rk(targets: &[ExponentialSum], n: u64, symbols: &[ConvolutionSymbol]) -> Result<ExponentialSum> {
    if targets.is_empty() {
        return Ok(ExponentialSum::default());
    }
    if targets.len() != symbols.len() {
        return usage(format!(
            "{} targets for {} symbols",
            targets.len(),
            symbols.len()
        ));
    }
    for s in symbols {
        s.validate()?;
    }
    let classes = symbol_classes(symbols);
    let mut terms = Vec::new();
    for (i, v) in targets.iter().enumerate() {
        let tau = classes[i].len() as f64;
        for (l, t) in v.terms().iter().enumerate() {
            check_dominant(symbols, &classes, i, l, t.exponent)?;
            let inv = pow_polar_neg(symbols[i].eval(t.exponent), n);
            terms.push(ExpTerm {
                coeff: (t.coeff * inv).scale(1.0 / tau),
                exponent: t.exponent,
            });
        }
    }
    Ok(ExponentialSum::new(terms))
}

/// Rectangle `[re_min, re_max] × [im_min, im_max]` sampled on a
/// `resolution × resolution` lattice including the corners.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegionGrid {
    pub re: (f64, f64),
    pub im: (f64, f64),
    pub resolution: usize,
}

impl RegionGrid {
    pub fn points(&self) -> Result<Vec<Complex64>> {
        if self.resolution == 0 {
            return usage("grid resolution must be at least 1");
        }
        if !(self.re.0 <= self.re.1 && self.im.0 <= self.im.1) {
            return usage("grid bounds are reversed");
        }
        let step = |(lo, hi): (f64, f64), k: usize| {
            if self.resolution == 1 {
                lo
            } else {
                lo + (hi - lo) * k as f64 / (self.resolution - 1) as f64
            }
        };
        Ok((0..self.resolution)
            .flat_map(|a| (0..self.resolution).map(move |b| (a, b)))
            .map(|(a, b)| Complex64::new(step(self.re, a), step(self.im, b)))
            .collect())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct RegionReport {
    /// Points with `max_j |Φ_j| < 1 - margin`.
    #[serde(with = "crate::json::complex_vec")]
    pub u0_points: Vec<Complex64>,
    /// Per symbol, points with `|Φ_i| > 1 + margin` where every symbol
    /// outside the class of `i` is smaller by the relative margin.
    pub ui_points: Vec<RegionPoints>,
    /// Names of the regions with no points, e.g. `"U_0"`, `"U_2"`.
    pub empty: Vec<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RegionPoints(#[serde(with = "crate::json::complex_vec")] pub Vec<Complex64>);

/// Classifies grid points into the decay region and the dominant regions.
pub fn conv_region_probe(symbols: &[ConvolutionSymbol], grid: &RegionGrid) -> Result<RegionReport> {
    if symbols.is_empty() {
        return usage("no symbols given");
    }
    let classes = symbol_classes(symbols);
    let mut report = RegionReport {
        ui_points: vec![RegionPoints::default(); symbols.len()],
        ..Default::default()
    };
    for z in grid.points()? {
        let vals: Vec<f64> = symbols.iter().map(|s| s.eval(z).norm()).collect();
        if vals.iter().all(|&v| v < 1.0 - MARGIN_MIN) {
            report.u0_points.push(z);
        }
        for i in 0..symbols.len() {
            let own = vals[i];
            let dominant = own > 1.0 + MARGIN_MIN
                && vals.iter().enumerate().all(|(j, &v)| {
                    classes[i].iter().any(|&(k, _)| k == j) || v < own * (1.0 - MARGIN_MIN)
                });
            if dominant {
                report.ui_points[i].0.push(z);
            }
        }
    }
    if report.u0_points.is_empty() {
        report.empty.push("U_0".into());
    }
    for (i, pts) in report.ui_points.iter().enumerate() {
        if pts.0.is_empty() {
            report.empty.push(format!("U_{}", i + 1));
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::{iterate, OperatorSpec};
    use crate::space::Element;
    use crate::xcomplex::XComplex;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn sym(coeffs: &[f64]) -> ConvolutionSymbol {
        ConvolutionSymbol::new(coeffs.iter().map(|&a| c(a)).collect()).unwrap()
    }

    #[test]
    fn single_symbol_inverts_eigenvalue() {
        let target = ExponentialSum::from_pairs(&[(c(1.0), c(2.0))]);
        let n = 7;
        let r = conv_rk(std::slice::from_ref(&target), n, &[sym(&[0.0, 1.0])]).unwrap();
        assert!((r.coeff_of(c(2.0)).to_complex() - c(0.5f64.powi(7))).norm() < 1e-18);
        let op = OperatorSpec::convolution(vec![c(0.0), c(1.0)]).unwrap();
        let back = iterate(&op, &Element::Exp(r), n).unwrap();
        assert_eq!(back.as_exp().unwrap().coeff_of(c(2.0)), XComplex::ONE);
    }

    #[test]
    fn empty_targets_give_empty_sum() {
        assert!(conv_rk(&[], 3, &[sym(&[0.0, 1.0])]).unwrap().is_empty());
    }

    #[test]
    fn opposite_symbols_average() {
        let target = ExponentialSum::from_pairs(&[(c(1.0), c(2.0))]);
        let syms = [sym(&[0.0, 1.0]), sym(&[0.0, -1.0])];
        assert_eq!(symbol_classes(&syms)[0].len(), 2);
        let n = 5;
        let r = conv_rk(&[target.clone(), target.clone()], n, &syms).unwrap();
        // (1/2) 2^{-5} + (1/2) (-2)^{-5} = 0 for odd n
        assert!(r.coeff_of(c(2.0)).abs() < 1e-18);
        let r = conv_rk(&[target.clone(), target], 6, &syms).unwrap();
        assert!((r.coeff_of(c(2.0)).to_complex() - c(0.5f64.powi(6))).norm() < 1e-18);
    }

    #[test]
    fn region_violation_names_the_term() {
        let target = ExponentialSum::from_pairs(&[(c(1.0), c(0.5))]);
        let err = conv_rk(&[target], 3, &[sym(&[0.0, 1.0])]).unwrap_err();
        assert!(err.to_string().contains("target 0, term 0"));
    }

    #[test]
    fn region_probe_partitions_by_modulus() {
        let grid = RegionGrid {
            re: (-2.0, 2.0),
            im: (-2.0, 2.0),
            resolution: 21,
        };
        let rep = conv_region_probe(&[sym(&[0.0, 1.0])], &grid).unwrap();
        assert!(rep.u0_points.iter().all(|z| z.norm() < 1.0));
        assert!(rep.ui_points[0].0.iter().all(|z| z.norm() > 1.0));
        assert!(rep.empty.is_empty());

        let small = RegionGrid {
            re: (-0.3, 0.3),
            im: (-0.3, 0.3),
            resolution: 7,
        };
        let rep = conv_region_probe(&[sym(&[0.0, 1.0])], &small).unwrap();
        assert_eq!(rep.empty, vec!["U_1".to_string()]);
    }

    #[test]
    fn region_probe_two_scalings() {
        let syms = [sym(&[0.0, 1.0]), sym(&[0.0, 2.0])];
        let grid = RegionGrid {
            re: (-2.0, 2.0),
            im: (-2.0, 2.0),
            resolution: 17,
        };
        let rep = conv_region_probe(&syms, &grid).unwrap();
        for z in grid.points().unwrap() {
            let in_u2 = 2.0 * z.norm() > 1.0 + MARGIN_MIN && z.norm() < 2.0 * z.norm() * (1.0 - MARGIN_MIN);
            assert_eq!(rep.ui_points[1].0.contains(&z), in_u2, "{z}");
        }
        assert!(rep.ui_points[0].0.is_empty());
        assert!(rep.empty.contains(&"U_1".to_string()));
    }
}
