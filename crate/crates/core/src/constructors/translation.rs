//! Polynomials that scaled translates carry onto prescribed targets.
//!
//! For `T_l = μ_l τ_{b_l}` we have `T_l^n f(z) = μ_l^n f(z + n b_l)`, so a
//! polynomial close to `h` on `B(0, r)` and to `μ_l^{-n} g_l(z - n b_l)` on
//! `B(n b_l, r)` is close to `h` itself and sent near `g_l` by `T_l^n`. The
//! disks are far apart once `n` is large, and one polynomial matches all
//! pieces by [`runge_fit`].

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::runge::{runge_fit, FitPiece};
use crate::error::{usage, Result};
use crate::space::{DiskRegion, Polynomial};
use crate::xcomplex::{pow_polar, pow_polar_neg};

/// `g` should be reached by `μ τ_b`.
#[derive(Clone, Debug, PartialEq)]
pub struct TranslationTarget {
    pub g: Polynomial,
    pub b: Complex64,
    pub mu: Complex64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TranslationFit {
    pub f: Polynomial,
    /// Sup of `|f - h|` on the circle of radius `r`.
    pub anchor_error: f64,
    /// Per target, sup of `|μ^n f(z + n b) - g(z)|` on the circle of radius `r`.
    pub target_errors: Vec<f64>,
    pub condition: f64,
    pub ill_conditioned: bool,
    /// True when every measured error is below `eps`.
    pub within_eps: bool,
}

/// Lower bound that `n` must exceed so that `B(0, r)` and all `B(n b_l, r)`
/// are pairwise disjoint.
pub fn separation_bound(bs: &[Complex64], r: f64) -> Result<f64> {
    if let Some(b) = bs.iter().find(|b| b.norm() == 0.0) {
        return usage(format!("translation step must be nonzero, got {b}"));
    }
    let mut pair = 0.0f64;
    for (i, bi) in bs.iter().enumerate() {
        for bl in &bs[i + 1..] {
            let d = (bi - bl).norm();
            if d == 0.0 {
                return usage(format!("translation steps coincide ({bi}); the disks overlap for every n"));
            }
            pair = pair.max(2.0 * r / d);
        }
    }
    let single = bs.iter().map(|b| 2.0 * r / b.norm()).fold(0.0, f64::max);
    Ok(pair + single)
}

/// `ln(1 + e^x)` without overflow.
fn softplus(x: f64) -> f64 {
    if x > 0.0 {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}

/// Builds `f` for index `n` and measures the resulting errors.
#[allow(clippy::too_many_arguments)]
pub fn translation_construct(
    h: &Polynomial,
    targets: &[TranslationTarget],
    r: f64,
    eps: f64,
    degree: usize,
    samples: usize,
    n: u64,
    degree_cap: usize,
) -> Result<TranslationFit> {
    if !(r > 0.0 && r.is_finite()) {
        return usage(format!("radius must be positive, got {r}"));
    }
    if !(eps > 0.0) {
        return usage(format!("eps must be positive, got {eps}"));
    }
    if let Some(t) = targets.iter().find(|t| !(t.mu.norm() > 0.0 && t.mu.norm().is_finite())) {
        return usage(format!("scalar mu must be finite and nonzero, got {}", t.mu));
    }
    let bs: Vec<Complex64> = targets.iter().map(|t| t.b).collect();
    let bound = separation_bound(&bs, r)?;
    if !(n as f64 > bound) {
        return usage(format!(
            "index {n} too small: disks separate only for n > {bound:.6}, i.e. n >= {}",
            bound.floor() as u64 + 1
        ));
    }
    let nf = n as f64;

    // tolerance for piece l is eps / (1 + |μ_l|^n); rows are weighted by its
    // inverse, normalized in log space
    let log_w: Vec<f64> = std::iter::once(0.0)
        .chain(targets.iter().map(|t| softplus(nf * t.mu.norm().ln())))
        .collect();
    let top = log_w.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let weights: Vec<f64> = log_w.iter().map(|l| (l - top).exp()).collect();

    let mut pieces = vec![FitPiece {
        weight: weights[0],
        ..FitPiece::new(DiskRegion::centered(r)?, h.clone())
    }];
    for (t, &w) in targets.iter().zip(&weights[1..]) {
        let shift = t.b * nf;
        pieces.push(FitPiece {
            region: DiskRegion::new(shift, r)?,
            target: t.g.clone(),
            offset: shift,
            scale: pow_polar_neg(t.mu, n),
            weight: w,
        });
    }
    let fit = runge_fit(&pieces, degree, samples, degree_cap)?;
    let f = fit.poly;

    let circle = DiskRegion::centered(r)?;
    let anchor_error = circle
        .boundary(4 * samples)
        .map(|z| (f.eval_x(z) - h.eval_x(z)).abs())
        .fold(0.0, f64::max);
    let target_errors: Vec<f64> = targets
        .iter()
        .map(|t| {
            let mu_n = pow_polar(t.mu, n);
            circle
                .boundary(4 * samples)
                .map(|z| (f.eval_x(z + t.b * nf) * mu_n - t.g.eval_x(z)).abs())
                .fold(0.0, f64::max)
        })
        .collect();
    let within_eps = anchor_error < eps && target_errors.iter().all(|&e| e < eps);
    Ok(TranslationFit {
        f,
        anchor_error,
        target_errors,
        condition: fit.condition,
        ill_conditioned: fit.ill_conditioned,
        within_eps,
    })
}
