//! Empirical checks of the random-matrix norm bounds and Hoeffding's inequality.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::trial_seed;
use crate::error::{Error, Result};
use crate::linalg::{DenseSymMatrix, Matrix};
use crate::planted::{rng_from_seed, DistributionSpec};

/// Target of `‖A − μeeᵀ‖ / (σ√n)` for symmetric matrices.
pub const SYMMETRIC_TARGET: f64 = 3.0;
/// Target for rectangular matrices, where the constant is not pinned down.
pub const RECTANGULAR_TARGET: f64 = 5.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MatrixShape {
    /// `n × n`, entries on and above the diagonal independent.
    Symmetric,
    /// `rows × n`, all entries independent.
    Rectangular { rows: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormSuiteReport {
    pub distribution: DistributionSpec,
    pub n: usize,
    pub shape: MatrixShape,
    pub trials: usize,
    pub sigma: f64,
    /// `‖A − μeeᵀ‖₂` per trial.
    pub deviation_norms: Vec<f64>,
    /// `‖A − μeeᵀ‖₂ / (σ√n)` per trial; 0 when `σ = 0`.
    pub ratios: Vec<f64>,
    pub max_ratio: f64,
    /// `(p, ratio quantile)` for p in 0.5, 0.9, 0.99.
    pub quantiles: Vec<(f64, f64)>,
    pub target: f64,
    pub within_target: usize,
}

fn quantile(sorted: &[f64], p: f64) -> f64 {
    if sorted.is_empty() {
        return 0.0;
    }
    let idx = ((sorted.len() - 1) as f64 * p).round() as usize;
    sorted[idx]
}

fn deviation_norm(dist: &DistributionSpec, n: usize, shape: MatrixShape, seed: u64) -> Result<f64> {
    let mut rng = rng_from_seed(seed);
    let mu = dist.mean();
    match shape {
        MatrixShape::Symmetric => {
            let mut a = DenseSymMatrix::zeros(n);
            for i in 0..n {
                for j in i..n {
                    a.set_pair(i, j, dist.sample(&mut rng) - mu);
                }
            }
            a.spectral_norm()
        }
        MatrixShape::Rectangular { rows } => {
            let mut a = Matrix::zeros(rows, n);
            for v in a.as_mut_slice() {
                *v = dist.sample(&mut rng) - mu;
            }
            a.spectral_norm()
        }
    }
}

/// Samples `trials` matrices and measures their centred spectral norm.
pub fn empirical_norm_suite(
    dist: &DistributionSpec,
    n: usize,
    shape: MatrixShape,
    trials: usize,
    seed: u64,
) -> Result<NormSuiteReport> {
    if n < 10 || trials < 10 {
        return Err(Error::Domain(format!("need n ≥ 10 and trials ≥ 10, got n = {n}, trials = {trials}")));
    }
    if let MatrixShape::Rectangular { rows } = shape {
        if rows == 0 {
            return Err(Error::Domain("rectangular shape needs at least one row".into()));
        }
    }
    let deviation_norms: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|t| deviation_norm(dist, n, shape, trial_seed(seed, 0, t)))
        .collect::<Result<_>>()?;
    let sigma = dist.std_dev();
    let scale = sigma * (n as f64).sqrt();
    let ratios: Vec<f64> =
        deviation_norms.iter().map(|v| if scale > 0.0 { v / scale } else { 0.0 }).collect();
    let mut sorted = ratios.clone();
    sorted.sort_by(f64::total_cmp);
    let target = match shape {
        MatrixShape::Symmetric => SYMMETRIC_TARGET,
        MatrixShape::Rectangular { .. } => RECTANGULAR_TARGET,
    };
    Ok(NormSuiteReport {
        distribution: *dist,
        n,
        shape,
        trials,
        sigma,
        max_ratio: sorted.last().copied().unwrap_or(0.0),
        quantiles: [0.5, 0.9, 0.99].iter().map(|&p| (p, quantile(&sorted, p))).collect(),
        within_target: ratios.iter().filter(|r| **r <= target).count(),
        target,
        ratios,
        deviation_norms,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HoeffdingRow {
    pub t: f64,
    pub exceedances: usize,
    pub frequency: f64,
    /// `2 exp(−2t²/m)`.
    pub bound: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HoeffdingReport {
    pub distribution: DistributionSpec,
    pub m: usize,
    pub trials: usize,
    pub rows: Vec<HoeffdingRow>,
}

impl HoeffdingReport {
    /// Every empirical frequency is at most its bound.
    pub fn within_bounds(&self) -> bool {
        self.rows.iter().all(|r| r.frequency <= r.bound)
    }
}

/// Frequency of `|S − E S| > t` for sums of `m` draws, at `t = √m` and `t = m^{3/4}`.
pub fn hoeffding_suite(dist: &DistributionSpec, m: usize, trials: usize, seed: u64) -> Result<HoeffdingReport> {
    if m == 0 || trials == 0 {
        return Err(Error::Domain("m and trials must be positive".into()));
    }
    let mean = dist.mean() * m as f64;
    let deviations: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = rng_from_seed(trial_seed(seed, 1, t));
            let s: f64 = (0..m).map(|_| dist.sample(&mut rng)).sum();
            (s - mean).abs()
        })
        .collect();
    let mf = m as f64;
    let rows = [mf.sqrt(), mf.powf(0.75)]
        .iter()
        .map(|&t| {
            let exceedances = deviations.iter().filter(|d| **d > t).count();
            HoeffdingRow {
                t,
                exceedances,
                frequency: exceedances as f64 / trials as f64,
                bound: 2.0 * (-2.0 * t * t / mf).exp(),
            }
        })
        .collect();
    Ok(HoeffdingReport { distribution: *dist, m, trials, rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_distribution_has_zero_deviation() {
        let d = DistributionSpec::uniform(0.3, 0.0).unwrap();
        let r = empirical_norm_suite(&d, 12, MatrixShape::Symmetric, 10, 1).unwrap();
        assert!(r.deviation_norms.iter().all(|v| *v == 0.0));
        assert_eq!(r.max_ratio, 0.0);
        assert_eq!(r.within_target, 10);
    }

    #[test]
    fn small_suites_respect_targets() {
        let d = DistributionSpec::bernoulli(0.5).unwrap();
        let r = empirical_norm_suite(&d, 60, MatrixShape::Symmetric, 10, 3).unwrap();
        assert_eq!(r.within_target, 10, "{:?}", r.quantiles);
        let r = empirical_norm_suite(&d, 60, MatrixShape::Rectangular { rows: 30 }, 10, 3).unwrap();
        assert_eq!(r.within_target, 10);
        assert!(r.quantiles[0].1 <= r.quantiles[2].1);
    }

    #[test]
    fn preconditions() {
        let d = DistributionSpec::bernoulli(0.5).unwrap();
        assert!(empirical_norm_suite(&d, 9, MatrixShape::Symmetric, 10, 0).is_err());
        assert!(empirical_norm_suite(&d, 10, MatrixShape::Symmetric, 9, 0).is_err());
        assert!(hoeffding_suite(&d, 0, 10, 0).is_err());
    }

    #[test]
    fn hoeffding_bounds() {
        let d = DistributionSpec::bernoulli(0.5).unwrap();
        let r = hoeffding_suite(&d, 400, 200, 5).unwrap();
        assert!(r.within_bounds(), "{:?}", r.rows);
        assert!((r.rows[0].bound - 2.0 * (-2.0f64).exp()).abs() < 1e-15);
    }
}
