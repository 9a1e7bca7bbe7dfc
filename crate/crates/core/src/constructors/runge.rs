//! One polynomial approximating different functions on disjoint disks.
//!
//! The fit is a weighted least-squares problem on boundary samples of every
//! disk. Columns use the basis `(z/ρ)^m` with `ρ` the largest modulus reached
//! by any disk, then are normalized to unit length before an SVD solve.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{usage, Error, Result};
use crate::space::{DiskRegion, Polynomial};
use crate::xcomplex::XComplex;

/// Condition estimates above this are reported as ill-conditioned.
pub const ILL_CONDITIONED: f64 = 1e12;
/// Singular values below `σ_max` times this are dropped.
const SVD_CUTOFF: f64 = 1e-13;

/// Target `z ↦ scale · target(z - offset)` on `region`, with a least-squares
/// row weight.
#[derive(Clone, Debug, PartialEq)]
pub struct FitPiece {
    pub region: DiskRegion,
    pub target: Polynomial,
    pub offset: Complex64,
    pub scale: XComplex,
    pub weight: f64,
}

impl FitPiece {
    pub fn new(region: DiskRegion, target: Polynomial) -> Self {
        Self {
            region,
            target,
            offset: Complex64::new(0.0, 0.0),
            scale: XComplex::ONE,
            weight: 1.0,
        }
    }

    pub fn eval(&self, z: Complex64) -> XComplex {
        self.target.eval_x(z - self.offset) * self.scale
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RungeFit {
    pub poly: Polynomial,
    /// Sup of `|f - target|` per piece on a grid four times finer than the
    /// fitting samples.
    pub sup_error: Vec<f64>,
    /// `σ_max / σ_min` of the column-normalized system, `f64::MAX` when
    /// `σ_min` vanishes.
    pub condition: f64,
    pub ill_conditioned: bool,
}

/// Least-squares polynomial of degree at most `degree` matching every piece
/// on `boundary_samples` points of its disk boundary.
pub fn runge_fit(
    pieces: &[FitPiece],
    degree: usize,
    boundary_samples: usize,
    degree_cap: usize,
) -> Result<RungeFit> {
    if pieces.is_empty() {
        return usage("runge fit needs at least one piece");
    }
    if boundary_samples < 8 {
        return usage(format!("need at least 8 boundary samples, got {boundary_samples}"));
    }
    if degree > degree_cap {
        return Err(Error::Capacity {
            needed: degree,
            cap: degree_cap,
        });
    }
    for (i, p) in pieces.iter().enumerate() {
        p.region.validate()?;
        if !(p.weight > 0.0 && p.weight.is_finite()) {
            return usage(format!("piece {i} has invalid weight {}", p.weight));
        }
        for (j, q) in pieces.iter().enumerate().skip(i + 1) {
            if !p.region.disjoint_from(&q.region) {
                return usage(format!("disks {i} and {j} overlap"));
            }
        }
    }
    let rho = pieces
        .iter()
        .map(|p| p.region.center.norm() + p.region.radius)
        .fold(0.0, f64::max);

    let cols = degree + 1;
    let rows = pieces.len() * boundary_samples;
    let mut a = DMatrix::<Complex64>::zeros(rows, cols);
    let mut b = DVector::<Complex64>::zeros(rows);
    let mut row = 0;
    for p in pieces {
        for z in p.region.boundary(boundary_samples) {
            let u = z / rho;
            let mut pw = Complex64::new(p.weight, 0.0);
            for m in 0..cols {
                a[(row, m)] = pw;
                pw *= u;
            }
            b[row] = (p.eval(z).scale(p.weight)).to_complex();
            row += 1;
        }
    }
    let col_norms: Vec<f64> = (0..cols)
        .map(|m| {
            let n = a.column(m).norm();
            if n > 0.0 {
                n
            } else {
                1.0
            }
        })
        .collect();
    for (m, &s) in col_norms.iter().enumerate() {
        a.column_mut(m).unscale_mut(s);
    }

    let svd = a.svd(true, true);
    let sv = &svd.singular_values;
    let s_max = sv.max();
    let s_min = sv.min();
    // a numerically singular system reports the largest finite estimate so
    // that the value survives a JSON round trip
    let condition = if s_min > 0.0 { (s_max / s_min).min(f64::MAX) } else { f64::MAX };
    let y = svd
        .solve(&b, s_max * SVD_CUTOFF)
        .map_err(|e| Error::Usage(format!("least-squares solve failed: {e}")))?;

    let rho_x = XComplex::from_f64(rho);
    let mut rho_pow = XComplex::ONE;
    let mut coeffs = Vec::with_capacity(cols);
    for (m, &s) in col_norms.iter().enumerate() {
        coeffs.push(XComplex::from(y[m]) / (rho_pow.scale(s)));
        rho_pow = rho_pow * rho_x;
    }
    let poly = Polynomial::new(coeffs, degree_cap)?;

    let sup_error = pieces
        .iter()
        .map(|p| {
            p.region
                .boundary(4 * boundary_samples)
                .map(|z| (poly.eval_x(z) - p.eval(z)).abs())
                .fold(0.0, f64::max)
        })
        .collect();
    Ok(RungeFit {
        poly,
        sup_error,
        condition,
        ill_conditioned: condition > ILL_CONDITIONED,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::DEFAULT_DEGREE_CAP;

    fn disk(re: f64, r: f64) -> DiskRegion {
        DiskRegion::new(Complex64::new(re, 0.0), r).unwrap()
    }

    #[test]
    fn target_in_span_is_recovered() {
        let z2 = Polynomial::from_re(&[0.0, 0.0, 1.0]).unwrap();
        let fit = runge_fit(&[FitPiece::new(disk(0.0, 1.0), z2)], 4, 32, DEFAULT_DEGREE_CAP).unwrap();
        assert!(fit.sup_error[0] < 1e-10);
        assert!((fit.poly.coeff(2).to_complex() - Complex64::new(1.0, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn constant_fit_splits_the_difference() {
        let pieces = [
            FitPiece::new(disk(0.0, 1.0), Polynomial::from_re(&[0.0]).unwrap()),
            FitPiece::new(disk(5.0, 1.0), Polynomial::from_re(&[1.0]).unwrap()),
        ];
        let fit = runge_fit(&pieces, 0, 32, DEFAULT_DEGREE_CAP).unwrap();
        assert!((fit.poly.coeff(0).to_complex() - Complex64::new(0.5, 0.0)).norm() < 1e-12);
        assert!((fit.sup_error[0] - 0.5).abs() < 1e-12);
        assert!((fit.sup_error[1] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn overlapping_disks_are_rejected() {
        let one = Polynomial::from_re(&[1.0]).unwrap();
        let pieces = [
            FitPiece::new(disk(0.0, 1.0), one.clone()),
            FitPiece::new(disk(1.5, 1.0), one),
        ];
        assert!(matches!(
            runge_fit(&pieces, 4, 32, DEFAULT_DEGREE_CAP),
            Err(Error::Usage(_))
        ));
    }

    #[test]
    fn degree_above_cap_is_capacity_error() {
        let one = Polynomial::from_re(&[1.0]).unwrap();
        let r = runge_fit(&[FitPiece::new(disk(0.0, 1.0), one)], 20, 32, 10);
        assert!(matches!(r, Err(Error::Capacity { needed: 20, cap: 10 })));
    }
}
