//! Right inverse for families of differentiation powers `λ_l D^{r_l}`.
//!
//! A monomial `z^m` is sent to the average over members of
//! `λ_l^{-n} m! z^{m + r_l n} / (m + r_l n)!`, where members sharing a power
//! count once in total (each gets weight `1/τ(l)` with `τ(l)` the size of its
//! power group). Factorial ratios are taken from the extended-range table.

use num_complex::Complex64;

use crate::error::{usage, Error, Result};
use crate::shift_analysis::mod_eq;
use crate::space::{factorial, Polynomial};
use crate::xcomplex::{pow_polar_neg, XComplex};

/// Checks that members sharing a power have equal moduli.
pub fn check_diff_ties(rs: &[usize], lambdas: &[Complex64]) -> Result<()> {
    if rs.is_empty() || rs.len() != lambdas.len() {
        return usage(format!(
            "need matching nonempty lists, got {} powers and {} scalars",
            rs.len(),
            lambdas.len()
        ));
    }
    if rs.contains(&0) {
        return usage("differentiation powers must be at least 1");
    }
    if let Some(l) = lambdas.iter().find(|l| !(l.norm() > 0.0 && l.norm().is_finite())) {
        return usage(format!("scalars must be finite and nonzero, got {l}"));
    }
    for i in 0..rs.len() {
        for j in i + 1..rs.len() {
            if rs[i] == rs[j] && !mod_eq(lambdas[i].norm(), lambdas[j].norm()) {
                return usage(format!(
                    "members {} and {} share power {} but |lambda| differs ({} vs {})",
                    i + 1,
                    j + 1,
                    rs[i],
                    lambdas[i].norm(),
                    lambdas[j].norm()
                ));
            }
        }
    }
    Ok(())
}

/// `R_n f` for the family `λ_l D^{r_l}`; the result keeps `f`'s degree cap.
pub fn diff_rk(f: &Polynomial, n: u64, rs: &[usize], lambdas: &[Complex64]) -> Result<Polynomial> {
    check_diff_ties(rs, lambdas)?;
    let cap = f.degree_cap();
    let Some(deg) = f.degree() else {
        return Ok(Polynomial::zero(cap));
    };
    let r_max = *rs.iter().max().expect("checked nonempty") as u64;
    let top = r_max
        .checked_mul(n)
        .and_then(|v| v.checked_add(deg as u64))
        .unwrap_or(u64::MAX);
    if top > cap as u64 {
        return Err(Error::Capacity {
            needed: top.min(usize::MAX as u64) as usize,
            cap,
        });
    }
    let mut coeffs = vec![XComplex::ZERO; top as usize + 1];
    for (l, (&r, &lambda)) in rs.iter().zip(lambdas).enumerate() {
        let tau = rs.iter().filter(|&&q| q == rs[l]).count();
        let shift = r * n as usize;
        let front = pow_polar_neg(lambda, n).scale(1.0 / tau as f64);
        for (m, &c) in f.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            coeffs[m + shift] += c * front * (factorial(m) / factorial(m + shift));
        }
    }
    Polynomial::new(coeffs, cap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::{iterate, OperatorSpec};
    use crate::space::Element;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn single_member_monomial() {
        let one = Polynomial::from_re(&[1.0]).unwrap();
        let g = diff_rk(&one, 2, &[1], &[c(2.0)]).unwrap();
        assert_eq!(g.degree(), Some(2));
        assert!((g.coeff(2).to_complex() - c(0.125)).norm() < 1e-15);
        let back = iterate(&OperatorSpec::diff(c(2.0), 1), &Element::Poly(g), 2).unwrap();
        assert!((back.as_poly().unwrap().coeff(0).to_complex() - c(1.0)).norm() < 1e-14);
    }

    #[test]
    fn zero_maps_to_zero() {
        let z = Polynomial::zero(64);
        assert!(diff_rk(&z, 5, &[1], &[c(2.0)]).unwrap().is_zero());
    }

    #[test]
    fn tied_members_are_averaged() {
        let one = Polynomial::from_re(&[1.0]).unwrap();
        let g = diff_rk(&one, 2, &[1, 1], &[c(2.0), c(-2.0)]).unwrap();
        assert!((g.coeff(2).to_complex() - c(0.125)).norm() < 1e-15);
        for l in [2.0, -2.0] {
            let back = iterate(&OperatorSpec::diff(c(l), 1), &Element::Poly(g.clone()), 2).unwrap();
            assert!((back.as_poly().unwrap().coeff(0).to_complex() - c(1.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn capacity_and_tie_violations() {
        let one = Polynomial::from_re(&[1.0]).unwrap().with_cap(10).unwrap();
        assert!(matches!(diff_rk(&one, 6, &[2], &[c(2.0)]), Err(Error::Capacity { .. })));
        assert!(matches!(
            diff_rk(&one, 1, &[1, 1], &[c(2.0), c(3.0)]),
            Err(Error::Usage(_))
        ));
    }
}
