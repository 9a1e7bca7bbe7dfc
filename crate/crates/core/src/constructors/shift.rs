//! Right inverse for unweighted shift families.
//!
//! For `λ_1 B^{r_1}, ..., λ_p B^{r_p}` with nondecreasing powers, keep one
//! member per distinct power (the last of each group). A block `x λ_t^{-n}`
//! placed at offset `r_t n` is sent by `λ_t^n B^{r_t n}` back onto `x`, by
//! lower powers far to the right, and by higher powers off the vector.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{usage, Result};
use crate::shift_analysis::{decide_s_unweighted, representatives};
use crate::space::CoeffVector;
use crate::xcomplex::{pow_polar_neg, XComplex};

/// Longest vector a construction may produce.
pub const MAX_SHIFT_LEN: u64 = 1 << 26;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShiftRk {
    pub vector: CoeffVector,
    /// Set when `n < N` and the zero vector was returned.
    pub zero_branch: bool,
}

/// Block vector for the target `x = (x_0, ..., x_{N-1})`, `N = x.len()`.
pub fn shift_rk(x: &CoeffVector, n: u64, rs: &[usize], lambdas: &[Complex64]) -> Result<ShiftRk> {
    let decision = decide_s_unweighted(rs, lambdas)?;
    if !decision.holds {
        return usage(format!("family is not simultaneously universal: {}", decision.reason));
    }
    let big_n = x.len() as u64;
    if n < big_n {
        return Ok(ShiftRk {
            vector: CoeffVector::zero(),
            zero_branch: true,
        });
    }
    let r_max = *rs.last().expect("decision checked nonempty") as u64;
    let len = r_max
        .checked_mul(n)
        .and_then(|v| v.checked_add(big_n))
        .filter(|&v| v <= MAX_SHIFT_LEN)
        .ok_or_else(|| crate::Error::Usage(format!("index {n} needs a vector longer than {MAX_SHIFT_LEN}")))?;
    let mut out = vec![XComplex::ZERO; len as usize];
    for t in representatives(rs) {
        let inv = pow_polar_neg(lambdas[t], n);
        let offset = (rs[t] as u64 * n) as usize;
        for (i, c) in x.coeffs().iter().enumerate() {
            out[offset + i] = *c * inv;
        }
    }
    Ok(ShiftRk {
        vector: CoeffVector::new(out),
        zero_branch: false,
    })
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
    fn single_shift_block() {
        let r = shift_rk(&CoeffVector::basis(0), 3, &[1], &[c(2.0)]).unwrap();
        assert!(!r.zero_branch);
        assert_eq!(r.vector.len(), 4);
        assert_eq!(r.vector.get(3), c(0.125));
        let back = iterate(&OperatorSpec::shift(c(2.0), 1), &r.vector.clone().into(), 3).unwrap();
        assert_eq!(back.as_seq().unwrap().trimmed(), CoeffVector::basis(0));
    }

    #[test]
    fn short_index_takes_zero_branch() {
        let x = CoeffVector::from_re(&[1.0, 2.0, 3.0]);
        let r = shift_rk(&x, 2, &[1], &[c(2.0)]).unwrap();
        assert!(r.zero_branch);
        assert!(r.vector.is_zero());
    }

    #[test]
    fn two_powers_block_offsets() {
        // blocks sit at r_t * n: 1*4 and 2*4
        let r = shift_rk(&CoeffVector::from_re(&[1.0]), 4, &[1, 2], &[c(2.0), c(3.0)]).unwrap();
        let v = &r.vector;
        assert_eq!(v.len(), 9);
        assert_eq!(v.get(4), c(1.0 / 16.0));
        assert!((v.get(8) - c(1.0 / 81.0)).norm() < 1e-16);
        let nonzero: Vec<usize> = (0..v.len()).filter(|&i| !v.coeff(i).is_zero()).collect();
        assert_eq!(nonzero, vec![4, 8]);
        // each operator returns the target at the front
        for (r_j, l) in [(1, 2.0), (2, 3.0)] {
            let y = iterate(&OperatorSpec::shift(c(l), r_j), &Element::Seq(v.clone()), 4).unwrap();
            assert!((y.as_seq().unwrap().get(0) - c(1.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn failing_family_is_rejected() {
        let r = shift_rk(&CoeffVector::basis(0), 5, &[1, 1], &[c(2.0), c(4.0)]);
        assert!(matches!(r, Err(crate::Error::Usage(_))));
    }
}
