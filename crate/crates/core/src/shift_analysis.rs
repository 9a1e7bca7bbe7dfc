//! Decisions for families of backward-shift powers.
//!
//! For unweighted families `λ_1 B^{r_1}, ..., λ_p B^{r_p}` (powers sorted
//! nondecreasingly) simultaneous universality is decided exactly from the
//! moduli `|λ_j|`. For weighted families with strictly increasing powers the
//! relevant growth condition quantifies over every bound `M` and offset `k`;
//! only its bounded form can be checked, see [`check_condition_iii`] and
//! [`condition_iii_sweep`].

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{usage, Result};
use crate::operators::{OperatorSpec, WeightSequence};

/// Relative tolerance for comparing moduli.
pub const TOL_MOD: f64 = 1e-12;

/// `λ B_a^r`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShiftMember {
    pub weights: WeightSequence,
    pub r: usize,
    #[serde(with = "crate::json::complex")]
    pub lambda: Complex64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShiftFamily {
    pub members: Vec<ShiftMember>,
}

impl ShiftFamily {
    pub fn new(members: Vec<ShiftMember>) -> Result<Self> {
        if members.is_empty() {
            return usage("shift family is empty");
        }
        if members.iter().any(|m| m.r == 0) {
            return usage("shift powers must be at least 1");
        }
        Ok(Self { members })
    }

    /// Unweighted family `λ_j B^{r_j}`.
    pub fn unweighted(rs: &[usize], lambdas: &[Complex64]) -> Result<Self> {
        if rs.len() != lambdas.len() {
            return usage(format!(
                "{} powers but {} scalars",
                rs.len(),
                lambdas.len()
            ));
        }
        Self::new(
            rs.iter()
                .zip(lambdas)
                .map(|(&r, &lambda)| ShiftMember {
                    weights: WeightSequence::unit(),
                    r,
                    lambda,
                })
                .collect(),
        )
    }

    /// Collects the shift members of an operator list.
    pub fn from_operators(ops: &[OperatorSpec]) -> Result<Self> {
        let members = ops
            .iter()
            .map(|op| match op {
                OperatorSpec::ShiftPower { weights, r, lambda } => Ok(ShiftMember {
                    weights: weights.clone(),
                    r: *r,
                    lambda: *lambda,
                }),
                other => usage(format!("{} is not a shift power", other.name())),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(members)
    }

    pub fn rs(&self) -> Vec<usize> {
        self.members.iter().map(|m| m.r).collect()
    }

    /// True when every weight sequence is constant 1.
    pub fn is_unweighted(&self) -> bool {
        self.members
            .iter()
            .all(|m| m.weights.as_constant() == Some(Complex64::new(1.0, 0.0)))
    }

    /// Scalars of the equivalent unweighted family: a constant weight `c`
    /// turns `λ B_c^r` into `(λ c^r) B^r`. `None` if some weights vary.
    pub fn effective_lambdas(&self) -> Option<Vec<Complex64>> {
        self.members
            .iter()
            .map(|m| m.weights.as_constant().map(|c| m.lambda * c.powu(m.r as u32)))
            .collect()
    }
}

/// Outcome of a decision with a human-readable reason.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decision {
    pub holds: bool,
    pub reason: String,
}

impl Decision {
    fn yes(reason: impl Into<String>) -> Self {
        Self {
            holds: true,
            reason: reason.into(),
        }
    }

    fn no(reason: impl Into<String>) -> Self {
        Self {
            holds: false,
            reason: reason.into(),
        }
    }
}

pub(crate) fn mod_eq(a: f64, b: f64) -> bool {
    (a - b).abs() <= TOL_MOD * a.max(b)
}

pub(crate) fn mod_lt(a: f64, b: f64) -> bool {
    a < b && !mod_eq(a, b)
}

fn check_input(rs: &[usize], lambdas: &[Complex64]) -> Result<Vec<f64>> {
    if rs.is_empty() || rs.len() != lambdas.len() {
        return usage(format!(
            "need matching nonempty lists, got {} powers and {} scalars",
            rs.len(),
            lambdas.len()
        ));
    }
    if rs.contains(&0) {
        return usage("shift powers must be at least 1");
    }
    if rs.windows(2).any(|w| w[1] < w[0]) {
        return usage("shift powers must be sorted nondecreasingly");
    }
    lambdas
        .iter()
        .map(|l| {
            let m = l.norm();
            if m > 0.0 && m.is_finite() {
                Ok(m)
            } else {
                usage(format!("scalars must be finite and nonzero, got {l}"))
            }
        })
        .collect()
}

/// Simultaneous universality of `λ_1 B^{r_1}, ..., λ_p B^{r_p}`,
/// `r_1 ≤ ... ≤ r_p`.
///
/// Holds iff every `|λ_j| > 1`, moduli strictly increase between distinct
/// powers, and moduli agree within each group of equal powers.
pub fn decide_s_unweighted(rs: &[usize], lambdas: &[Complex64]) -> Result<Decision> {
    let m = check_input(rs, lambdas)?;
    if let Some(j) = m.iter().position(|&a| !mod_lt(1.0, a)) {
        return Ok(Decision::no(format!(
            "condition (i) fails: |lambda_{}| = {} is not > 1",
            j + 1,
            m[j]
        )));
    }
    for j in 0..m.len() - 1 {
        if rs[j] != rs[j + 1] && !mod_lt(m[j], m[j + 1]) {
            return Ok(Decision::no(format!(
                "condition (ii) fails: r_{} < r_{} but |lambda_{}| = {} is not < |lambda_{}| = {}",
                j + 1,
                j + 2,
                j + 1,
                m[j],
                j + 2,
                m[j + 1]
            )));
        }
    }
    for j in 0..m.len() - 1 {
        if rs[j] == rs[j + 1] && !mod_eq(m[j], m[j + 1]) {
            return Ok(Decision::no(format!(
                "condition (iii) fails: r_{} = r_{} but |lambda_{}| = {} differs from |lambda_{}| = {}",
                j + 1,
                j + 2,
                j + 1,
                m[j],
                j + 2,
                m[j + 1]
            )));
        }
    }
    Ok(Decision::yes(
        "moduli exceed 1, increase strictly across distinct powers and agree on equal powers",
    ))
}

/// Disjoint universality: powers strictly increasing and
/// `1 < |λ_1| < ... < |λ_p|`.
pub fn decide_d_unweighted(rs: &[usize], lambdas: &[Complex64]) -> Result<Decision> {
    let m = check_input(rs, lambdas)?;
    if let Some(j) = rs.windows(2).position(|w| w[0] == w[1]) {
        return Ok(Decision::no(format!(
            "powers not strictly increasing: r_{} = r_{} = {}",
            j + 1,
            j + 2,
            rs[j]
        )));
    }
    if !mod_lt(1.0, m[0]) {
        return Ok(Decision::no(format!("|lambda_1| = {} is not > 1", m[0])));
    }
    if let Some(j) = m.windows(2).position(|w| !mod_lt(w[0], w[1])) {
        return Ok(Decision::no(format!(
            "moduli not strictly increasing: |lambda_{}| = {}, |lambda_{}| = {}",
            j + 1,
            m[j],
            j + 2,
            m[j + 1]
        )));
    }
    Ok(Decision::yes("powers and moduli strictly increase from above 1"))
}

/// Indices (0-based) of the last member of each group of equal powers.
pub fn representatives(rs: &[usize]) -> Vec<usize> {
    (0..rs.len())
        .filter(|&j| j + 1 == rs.len() || rs[j] != rs[j + 1])
        .collect()
}

/// Smallest `m ≤ m_max` at which, for every offset `j ≤ k`, each member's
/// weight window `a_{l,j+1} ⋯ a_{l,j+r_l m}` exceeds `M` in modulus and
/// dominates every lower-power member's aligned window by a factor above `M`.
///
/// Scalars are ignored. Returns `None` if no `m ≤ m_max` works, which is
/// evidence rather than proof that the condition fails.
pub fn check_condition_iii(family: &ShiftFamily, bound: f64, k: usize, m_max: usize) -> Result<Option<usize>> {
    let rs = family.rs();
    if rs.windows(2).any(|w| w[1] <= w[0]) {
        return usage("condition check needs strictly increasing powers");
    }
    if !(bound > 0.0 && bound.is_finite()) {
        return usage(format!("bound M must be positive and finite, got {bound}"));
    }
    if m_max == 0 {
        return usage("m_max must be at least 1");
    }
    let ln_m = bound.ln();
    let ok = |m: usize| {
        (0..=k).all(|j| {
            family.members.iter().enumerate().all(|(l, ml)| {
                let own = ml.weights.ln_abs_product(j + 1, ml.r * m);
                own > ln_m
                    && family.members[..l].iter().all(|ms| {
                        let start = j + (ml.r - ms.r) * m + 1;
                        own - ms.weights.ln_abs_product(start, ms.r * m) > ln_m
                    })
            })
        })
    };
    Ok((1..=m_max).find(|&m| ok(m)))
}

/// One cell of [`condition_iii_sweep`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepCell {
    pub bound: f64,
    pub k: usize,
    pub m: Option<usize>,
}

/// [`check_condition_iii`] over `M ∈ {10, 10^2, ..., 10^6}` and `k ≤ k_max`.
pub fn condition_iii_sweep(family: &ShiftFamily, k_max: usize, m_max: usize) -> Result<Vec<SweepCell>> {
    let cells: Vec<(f64, usize)> = (1..=6)
        .flat_map(|e| (0..=k_max).map(move |k| (10f64.powi(e), k)))
        .collect();
    crate::parallel::pool().install(|| {
        cells
            .par_iter()
            .map(|&(bound, k)| {
                Ok(SweepCell {
                    bound,
                    k,
                    m: check_condition_iii(family, bound, k, m_max)?,
                })
            })
            .collect()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::WeightGenerator;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn decision_examples() {
        let lam = [c(2.0), c(3.0), c(-3.0)];
        assert!(decide_s_unweighted(&[1, 2, 2], &lam).unwrap().holds);
        let d = decide_d_unweighted(&[1, 2, 2], &lam).unwrap();
        assert!(!d.holds);
        assert!(d.reason.contains("r_2 = r_3"));

        let s = decide_s_unweighted(&[1, 1], &[c(2.0), c(4.0)]).unwrap();
        assert!(!s.holds);
        assert!(s.reason.contains("(iii)"));

        let s = decide_s_unweighted(&[1, 2], &[c(1.0), c(2.0)]).unwrap();
        assert!(!s.holds);
        assert!(s.reason.contains("(i)"));

        assert!(decide_d_unweighted(&[1, 2], &[c(2.0), c(3.0)]).unwrap().holds);
        assert!(!decide_d_unweighted(&[1, 2], &[c(3.0), c(2.0)]).unwrap().holds);
    }

    #[test]
    fn decision_input_errors() {
        assert!(decide_s_unweighted(&[1, 2], &[c(2.0)]).is_err());
        assert!(decide_s_unweighted(&[2, 1], &[c(2.0), c(3.0)]).is_err());
        assert!(decide_d_unweighted(&[1, 2], &[c(2.0), c(0.0)]).is_err());
    }

    #[test]
    fn modulus_ties_use_relative_tolerance() {
        let a = Complex64::from_polar(3.0, 0.3);
        let b = Complex64::from_polar(3.0, 2.1);
        assert!(decide_s_unweighted(&[2, 2], &[a, b]).unwrap().holds);
    }

    #[test]
    fn representative_indices() {
        assert_eq!(representatives(&[1, 2, 2]), vec![0, 2]);
        assert_eq!(representatives(&[1, 1, 1]), vec![2]);
        assert_eq!(representatives(&[1, 2, 3]), vec![0, 1, 2]);
    }

    fn weighted(gens: &[(f64, usize)]) -> ShiftFamily {
        ShiftFamily::new(
            gens.iter()
                .map(|&(w, r)| ShiftMember {
                    weights: WeightSequence::constant(c(w)).unwrap(),
                    r,
                    lambda: c(1.0),
                })
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn condition_examples() {
        let unweighted = ShiftFamily::unweighted(&[1, 2], &[c(1.0), c(1.0)]).unwrap();
        assert_eq!(check_condition_iii(&unweighted, 2.0, 0, 1000).unwrap(), None);
        assert_eq!(check_condition_iii(&weighted(&[(2.0, 1)]), 10.0, 0, 100).unwrap(), Some(4));
    }

    #[test]
    fn condition_matches_naive_products() {
        // weights 2 (r = 1) and 3 (r = 2): own windows 2^m and 9^m, the cross
        // term 9^m / 2^m; all are offset independent for constant weights
        let fam = weighted(&[(2.0, 1), (3.0, 2)]);
        let got = check_condition_iii(&fam, 5.0, 1, 200).unwrap();
        let naive = (1..=200u32).find(|&m| {
            let a = 2f64.powi(m as i32);
            let b = 9f64.powi(m as i32);
            a > 5.0 && b > 5.0 && b / a > 5.0
        });
        assert_eq!(got, naive.map(|m| m as usize));
        assert_eq!(got, Some(3));
    }

    #[test]
    fn condition_requires_increasing_powers() {
        assert!(check_condition_iii(&weighted(&[(2.0, 2), (2.0, 1)]), 5.0, 0, 10).is_err());
    }

    #[test]
    fn periodic_weights_sweep() {
        let fam = ShiftFamily::new(vec![ShiftMember {
            weights: WeightSequence::new(WeightGenerator::Periodic(vec![c(4.0), c(0.5)])).unwrap(),
            r: 1,
            lambda: c(1.0),
        }])
        .unwrap();
        let cells = condition_iii_sweep(&fam, 2, 100).unwrap();
        assert_eq!(cells.len(), 18);
        assert!(cells.iter().all(|cell| cell.m.is_some()));
    }
}
