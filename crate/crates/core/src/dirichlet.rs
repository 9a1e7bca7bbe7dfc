//! Simultaneous return times of finitely many points on the unit circle.
//!
//! For angles `θ_1, ..., θ_m` (in turns) the residual of an index `n` is
//! `max_j |exp(2πi n θ_j) - 1| = max_j 2|sin(π n θ_j)|`. Every finite set
//! has indices with arbitrarily small residual, but no useful a priori bound
//! on how far one has to look, so searches are exhaustive up to `n_max`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use num_complex::Complex64;

use crate::error::{usage, Error, Result};
use crate::xcomplex::{frac_mul, turns_of};

/// Ranges shorter than this are scanned on the calling thread.
const PARALLEL_THRESHOLD: u64 = 1 << 16;
const CHUNK: u64 = 1 << 14;

/// Finite set of unimodular scalars `exp(2πi θ_j)`, `θ_j ∈ [0, 1)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct UnimodularSet {
    angles: Vec<f64>,
}

impl TryFrom<Vec<f64>> for UnimodularSet {
    type Error = Error;

    fn try_from(angles: Vec<f64>) -> Result<Self> {
        Self::new(angles)
    }
}

impl From<UnimodularSet> for Vec<f64> {
    fn from(s: UnimodularSet) -> Self {
        s.angles
    }
}

impl UnimodularSet {
    pub fn new(angles: Vec<f64>) -> Result<Self> {
        if angles.is_empty() {
            return usage("angle set is empty");
        }
        if let Some(a) = angles.iter().find(|a| !(0.0..1.0).contains(*a)) {
            return usage(format!("angles must lie in [0, 1), got {a}"));
        }
        Ok(Self { angles })
    }

    /// Angles of the given nonzero scalars; moduli are ignored.
    pub fn from_scalars(scalars: &[Complex64]) -> Result<Self> {
        if let Some(z) = scalars.iter().find(|z| z.norm() == 0.0) {
            return usage(format!("cannot take the phase of {z}"));
        }
        Self::new(scalars.iter().map(|&z| turns_of(z)).collect())
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    /// `max_j |exp(2πi n θ_j) - 1|`.
    pub fn residual(&self, n: u64) -> f64 {
        self.angles
            .iter()
            .map(|&a| {
                let f = frac_mul(n, a);
                2.0 * (std::f64::consts::PI * f.min(1.0 - f)).sin()
            })
            .fold(0.0, f64::max)
    }
}

/// Strictly increasing return indices with the residual each one achieved.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ReturnSequence {
    pub indices: Vec<u64>,
    pub residuals: Vec<f64>,
}

/// `eps_0 / 2^k` for `k = 0..stages` with `eps_0 = 0.5`.
pub fn default_schedule(stages: usize) -> Vec<f64> {
    (0..stages).map(|k| 0.5 * 0.5f64.powi(k as i32)).collect()
}

fn first_hit(set: &UnimodularSet, eps: f64, lo: u64, hi: u64) -> Option<u64> {
    (lo..=hi).find(|&n| set.residual(n) < eps)
}

/// Smallest `n` in `[n_min, n_max]` with residual below `eps`.
pub fn find_return(set: &UnimodularSet, eps: f64, n_min: u64, n_max: u64) -> Result<Option<u64>> {
    if !(eps > 0.0) {
        return usage(format!("eps must be positive, got {eps}"));
    }
    if n_min == 0 || n_min > n_max {
        return usage(format!("need 1 <= n_min <= n_max, got [{n_min}, {n_max}]"));
    }
    if n_max - n_min < PARALLEL_THRESHOLD {
        return Ok(first_hit(set, eps, n_min, n_max));
    }
    // Scan in windows of chunks; within a window every chunk reports its own
    // first hit and the window keeps the smallest, so the answer does not
    // depend on how many workers ran.
    let pool = crate::parallel::pool();
    let window = CHUNK * 4 * pool.current_num_threads() as u64;
    let mut lo = n_min;
    while lo <= n_max {
        let hi = lo.saturating_add(window - 1).min(n_max);
        let starts: Vec<u64> = (lo..=hi).step_by(CHUNK as usize).collect();
        let hit = pool.install(|| {
            starts
                .par_iter()
                .filter_map(|&s| first_hit(set, eps, s, s.saturating_add(CHUNK - 1).min(hi)))
                .min()
        });
        if hit.is_some() {
            return Ok(hit);
        }
        if hi == n_max {
            break;
        }
        lo = hi + 1;
    }
    Ok(None)
}

/// One return index per stage of `eps_schedule`, each strictly after the last.
///
/// A stage that finds nothing up to `n_max` ends the search with
/// [`Error::ReturnsExhausted`] carrying the indices found so far.
pub fn find_return_sequence(
    set: &UnimodularSet,
    eps_schedule: &[f64],
    n_max: u64,
) -> Result<ReturnSequence> {
    if eps_schedule.is_empty() {
        return usage("eps schedule is empty");
    }
    // equal consecutive tolerances are allowed: they just ask for another return
    if eps_schedule.windows(2).any(|w| !(w[1] <= w[0])) {
        return usage("eps schedule must be nonincreasing");
    }
    let mut seq = ReturnSequence::default();
    for (stage, &eps) in eps_schedule.iter().enumerate() {
        let n_min = seq.indices.last().map_or(1, |&n| n + 1);
        let found = if n_min > n_max {
            None
        } else {
            find_return(set, eps, n_min, n_max)?
        };
        match found {
            Some(n) => {
                seq.indices.push(n);
                seq.residuals.push(set.residual(n));
            }
            None => {
                return Err(Error::ReturnsExhausted {
                    partial: seq,
                    stage,
                    eps,
                    n_max,
                })
            }
        }
    }
    Ok(seq)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(a: &[f64]) -> UnimodularSet {
        UnimodularSet::new(a.to_vec()).unwrap()
    }

    #[test]
    fn small_examples() {
        assert_eq!(find_return(&set(&[0.5]), 1e-9, 1, 10).unwrap(), Some(2));
        assert_eq!(find_return(&set(&[0.25, 0.5]), 1e-9, 1, 10).unwrap(), Some(4));
        assert_eq!(find_return(&set(&[0.3]), 1e-9, 1, 9).unwrap(), None);
    }

    #[test]
    fn sqrt2_matches_naive_scan() {
        let a = 2f64.sqrt().fract();
        let s = set(&[a]);
        let naive = (1..=10_000u64).find(|&n| {
            let z = Complex64::from_polar(1.0, std::f64::consts::TAU * a * n as f64);
            (z - 1.0).norm() < 0.05
        });
        assert_eq!(find_return(&s, 0.05, 1, 10_000).unwrap(), naive);
    }

    #[test]
    fn sequences() {
        let r = find_return_sequence(&set(&[0.5]), &[0.1, 0.01, 0.001], 100).unwrap();
        assert_eq!(r.indices, vec![2, 4, 6]);
        let r = find_return_sequence(&set(&[1.0 / 3.0]), &[1e-6, 1e-6], 100).unwrap();
        assert_eq!(r.indices, vec![3, 6]);
        assert_eq!(default_schedule(3), vec![0.5, 0.25, 0.125]);
    }

    #[test]
    fn parallel_scan_agrees_with_serial() {
        let s = set(&[(5f64.sqrt() - 1.0) / 2.0]);
        let eps = 1e-5;
        let par = find_return(&s, eps, 1, 1_000_000).unwrap();
        let ser = first_hit(&s, eps, 1, 1_000_000);
        assert_eq!(par, ser);
        assert!(par.is_some());
    }

    #[test]
    fn exhaustion_keeps_partial_result() {
        match find_return_sequence(&set(&[0.5]), &[0.1, 0.01, 0.001], 5) {
            Err(Error::ReturnsExhausted { partial, stage, .. }) => {
                assert_eq!(partial.indices, vec![2, 4]);
                assert_eq!(stage, 2);
            }
            other => panic!("expected exhaustion, got {other:?}"),
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(UnimodularSet::new(vec![]).is_err());
        assert!(UnimodularSet::new(vec![1.0]).is_err());
        assert!(find_return(&set(&[0.5]), 0.0, 1, 2).is_err());
        assert!(find_return(&set(&[0.5]), 0.1, 3, 2).is_err());
        assert!(find_return_sequence(&set(&[0.5]), &[0.1, 0.2], 10).is_err());
    }
}
