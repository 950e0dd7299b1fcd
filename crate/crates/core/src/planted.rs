//! Planted cluster and planted bicluster models, plus the recovery-guarantee
//! conditions evaluated on their parameters.
//!
//! Randomness comes from ChaCha8 (`rand_chacha::ChaCha8Rng`), a counter-based
//! stream seeded with `seed_from_u64`. Entries are drawn in row-major order
//! over the upper triangle (clique) or the full matrix (biclique).

use rand::{Rng, RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{BicliquePlan, BipartiteWeights, CliquePlan, SymmetricWeights};
use crate::linalg::{DenseSymMatrix, Matrix};

/// A distribution supported on `[0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DistributionRepr", into = "DistributionRepr")]
pub enum DistributionSpec {
    /// Takes value 1 with probability `mean`, else 0.
    Bernoulli { mean: f64 },
    /// Uniform on `[mean - half_width, mean + half_width]`.
    UniformInterval { mean: f64, half_width: f64 },
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum DistributionRepr {
    Bernoulli { mean: f64 },
    #[serde(alias = "uniform")]
    UniformInterval { mean: f64, half_width: f64 },
}

impl TryFrom<DistributionRepr> for DistributionSpec {
    type Error = Error;
    fn try_from(r: DistributionRepr) -> Result<Self> {
        match r {
            DistributionRepr::Bernoulli { mean } => Self::bernoulli(mean),
            DistributionRepr::UniformInterval { mean, half_width } => Self::uniform(mean, half_width),
        }
    }
}

impl From<DistributionSpec> for DistributionRepr {
    fn from(d: DistributionSpec) -> Self {
        match d {
            DistributionSpec::Bernoulli { mean } => DistributionRepr::Bernoulli { mean },
            DistributionSpec::UniformInterval { mean, half_width } => {
                DistributionRepr::UniformInterval { mean, half_width }
            }
        }
    }
}

impl DistributionSpec {
    pub fn bernoulli(mean: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&mean) {
            return Err(Error::Domain(format!("Bernoulli mean {mean} outside [0, 1]")));
        }
        Ok(Self::Bernoulli { mean })
    }

    pub fn uniform(mean: f64, half_width: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&mean) {
            return Err(Error::Domain(format!("uniform mean {mean} outside [0, 1]")));
        }
        if !(half_width >= 0.0 && half_width <= mean.min(1.0 - mean) + 1e-15) {
            return Err(Error::Domain(format!(
                "half width {half_width} must lie in [0, min(mean, 1 - mean)] for mean {mean}"
            )));
        }
        Ok(Self::UniformInterval { mean, half_width })
    }

    pub fn mean(&self) -> f64 {
        match *self {
            Self::Bernoulli { mean } | Self::UniformInterval { mean, .. } => mean,
        }
    }

    pub fn variance(&self) -> f64 {
        match *self {
            Self::Bernoulli { mean } => mean * (1.0 - mean),
            Self::UniformInterval { half_width, .. } => half_width * half_width / 3.0,
        }
    }

    pub fn std_dev(&self) -> f64 {
        self.variance().sqrt()
    }

    /// One draw; always inside `[0, 1]`.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let u: f64 = rng.random();
        match *self {
            Self::Bernoulli { mean } => {
                if u < mean {
                    1.0
                } else {
                    0.0
                }
            }
            Self::UniformInterval { mean, half_width } => {
                (mean + half_width * (2.0 * u - 1.0)).clamp(0.0, 1.0)
            }
        }
    }

    /// Same family with a different mean; uniform widths are clipped to stay in range.
    pub fn with_mean(&self, mean: f64) -> Result<Self> {
        match *self {
            Self::Bernoulli { .. } => Self::bernoulli(mean),
            Self::UniformInterval { half_width, .. } => Self::uniform(mean, half_width.min(mean.min(1.0 - mean))),
        }
    }
}

/// The seeded generator used everywhere in the crate.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Planted cluster model: in-clique weights from `omega_in`, all others from `omega_out`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlantedCliqueSpec {
    pub plan: CliquePlan,
    pub omega_in: DistributionSpec,
    pub omega_out: DistributionSpec,
}

/// Planted bicluster model on `U × V`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlantedBicliqueSpec {
    pub plan: BicliquePlan,
    pub omega_in: DistributionSpec,
    pub omega_out: DistributionSpec,
}

/// In-block mean `alpha` and out-of-block mean `beta`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelMeans {
    pub alpha: f64,
    pub beta: f64,
}

impl PlantedCliqueSpec {
    pub fn means(&self) -> ModelMeans {
        ModelMeans { alpha: self.omega_in.mean(), beta: self.omega_out.mean() }
    }
}

impl PlantedBicliqueSpec {
    pub fn means(&self) -> ModelMeans {
        ModelMeans { alpha: self.omega_in.mean(), beta: self.omega_out.mean() }
    }
}

/// Draws a symmetric weight matrix; each unordered pair (and each diagonal entry) once.
pub fn sample_planted_cluster(spec: &PlantedCliqueSpec, seed: u64) -> SymmetricWeights {
    let mut rng = rng_from_seed(seed);
    let labels = spec.plan.labels();
    let n = labels.len();
    let mut w = DenseSymMatrix::zeros(n);
    for i in 0..n {
        for j in i..n {
            let inside = labels[i].is_some() && labels[i] == labels[j];
            let dist = if inside { &spec.omega_in } else { &spec.omega_out };
            w.set_pair(i, j, dist.sample(&mut rng));
        }
    }
    SymmetricWeights::new(w).expect("samples lie in [0, 1]")
}

/// Draws an `m × n` bipartite weight matrix in row-major order.
pub fn sample_planted_bicluster(spec: &PlantedBicliqueSpec, seed: u64) -> BipartiteWeights {
    let mut rng = rng_from_seed(seed);
    let (left, right) = spec.plan.labels();
    let w = Matrix::from_fn(left.len(), right.len(), |u, v| {
        let inside = left[u].is_some() && left[u] == right[v];
        let dist = if inside { &spec.omega_in } else { &spec.omega_out };
        dist.sample(&mut rng)
    });
    BipartiteWeights::new(w).expect("samples lie in [0, 1]")
}

/// Empirical in-block and out-of-block means of a clique instance.
pub fn estimate_clique_means(w: &SymmetricWeights, plan: &CliquePlan) -> ModelMeans {
    let labels = plan.labels();
    let (mut sin, mut nin, mut sout, mut nout) = (0.0, 0usize, 0.0, 0usize);
    for i in 0..w.n() {
        for j in 0..w.n() {
            if labels[i].is_some() && labels[i] == labels[j] {
                sin += w.get(i, j);
                nin += 1;
            } else {
                sout += w.get(i, j);
                nout += 1;
            }
        }
    }
    ModelMeans { alpha: sin / nin.max(1) as f64, beta: sout / nout.max(1) as f64 }
}

/// Empirical in-block and out-of-block means of a biclique instance.
pub fn estimate_biclique_means(w: &BipartiteWeights, plan: &BicliquePlan) -> ModelMeans {
    let (left, right) = plan.labels();
    let (mut sin, mut nin, mut sout, mut nout) = (0.0, 0usize, 0.0, 0usize);
    for u in 0..w.m() {
        for v in 0..w.n() {
            if left[u].is_some() && left[u] == right[v] {
                sin += w.get(u, v);
                nin += 1;
            } else {
                sout += w.get(u, v);
                nout += 1;
            }
        }
    }
    ModelMeans { alpha: sin / nin.max(1) as f64, beta: sout / nout.max(1) as f64 }
}

/// Signal margin `α(1 + [r_noise = 0]) − 2β` of the clique model.
pub fn gamma_clique(alpha: f64, beta: f64, r_noise: usize) -> f64 {
    let doubled = if r_noise == 0 { 2.0 } else { 1.0 };
    doubled * alpha - 2.0 * beta
}

/// Signal margin of the biclique model; α doubles only when both noise sides are empty.
pub fn gamma_biclique(alpha: f64, beta: f64, m_noise: usize, n_noise: usize) -> f64 {
    let doubled = if m_noise == 0 && n_noise == 0 { 2.0 } else { 1.0 };
    doubled * alpha - 2.0 * beta
}

/// Constants of the recovery bounds and the free parameters of the certificates.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GuaranteeParams {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub b1: f64,
    pub b2: f64,
    /// Scale of `μ` relative to `γ r̂`.
    pub epsilon: f64,
    /// Fraction of the available slack assigned to `π₄`.
    pub kappa: f64,
}

impl Default for GuaranteeParams {
    /// Constants from the calibration sweep described in the README.
    fn default() -> Self {
        Self { c1: 1.0, c2: 1.0, c3: 1.0, b1: 1.0, b2: 1.0, epsilon: 0.1, kappa: 0.9 }
    }
}

impl GuaranteeParams {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("c1", self.c1), ("c2", self.c2), ("c3", self.c3), ("b1", self.b1), ("b2", self.b2)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Domain(format!("{name} = {v} must be positive")));
            }
        }
        for (name, v) in [("epsilon", self.epsilon), ("kappa", self.kappa)] {
            if !(v > 0.0 && v < 1.0) {
                return Err(Error::Domain(format!("{name} = {v} must lie in (0, 1)")));
            }
        }
        Ok(())
    }
}

/// Both sides of a recovery bound and whether it holds.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GuaranteeReport {
    pub gamma: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
    /// `α τ_i > β τ_j` for all pairs; always true for cliques.
    pub tau_condition_holds: bool,
    /// Set when exactly one side of the noise pair is empty, so the noise
    /// side ratio is undefined (or zero) and is left out of the τ-condition.
    pub tau_noise_undefined: bool,
}

/// `c1 √N + c2 √(k r_noise) + c3 r_noise ≤ γ r̂`, with `γ > 0`.
pub fn check_clique_guarantee(spec: &PlantedCliqueSpec, params: &GuaranteeParams) -> GuaranteeReport {
    let plan = &spec.plan;
    let ModelMeans { alpha, beta } = spec.means();
    let r_noise = plan.noise_size();
    let gamma = gamma_clique(alpha, beta, r_noise);
    let n = plan.n() as f64;
    let k = plan.cliques().len() as f64;
    let lhs = params.c1 * n.sqrt() + params.c2 * (k * r_noise as f64).sqrt() + params.c3 * r_noise as f64;
    let rhs = gamma * plan.min_size() as f64;
    GuaranteeReport {
        gamma,
        lhs,
        rhs,
        holds: gamma > 0.0 && lhs <= rhs,
        tau_condition_holds: true,
        tau_noise_undefined: false,
    }
}

/// Side ratios that enter the τ-condition: every block plus the noise pair
/// when both of its sides are nonempty.
pub fn defined_taus(plan: &BicliquePlan) -> Vec<f64> {
    let mut taus: Vec<f64> = (0..plan.left_blocks().len()).map(|q| plan.tau(q)).collect();
    if let Some(t) = plan.tau_noise().filter(|t| *t > 0.0) {
        taus.push(t);
    }
    taus
}

/// `α τ_i > β τ_j` for every pair of defined side ratios.
pub fn tau_condition(alpha: f64, beta: f64, taus: &[f64]) -> bool {
    let lo = taus.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = taus.iter().copied().fold(0.0, f64::max);
    alpha * lo > beta * hi
}

/// `b1 (√k + √n_noise + 1) √N + β √(m_noise n_noise) ≤ b2 γ n̂` plus the τ-condition.
/// `N` is the right side size.
pub fn check_biclique_guarantee(spec: &PlantedBicliqueSpec, params: &GuaranteeParams) -> GuaranteeReport {
    let plan = &spec.plan;
    let ModelMeans { alpha, beta } = spec.means();
    let (m_noise, n_noise) = (plan.left_noise().len(), plan.right_noise().len());
    let gamma = gamma_biclique(alpha, beta, m_noise, n_noise);
    let k = plan.left_blocks().len() as f64;
    let n = plan.n() as f64;
    // τ_noise n_noise = √(m_noise n_noise), which also covers the undefined case as 0.
    let noise_term = beta * ((m_noise * n_noise) as f64).sqrt();
    let lhs = params.b1 * (k.sqrt() + (n_noise as f64).sqrt() + 1.0) * n.sqrt() + noise_term;
    let rhs = params.b2 * gamma * plan.min_right() as f64;
    let tau_ok = tau_condition(alpha, beta, &defined_taus(plan));
    GuaranteeReport {
        gamma,
        lhs,
        rhs,
        holds: gamma > 0.0 && lhs <= rhs && tau_ok,
        tau_condition_holds: tau_ok,
        tau_noise_undefined: (n_noise == 0) != (m_noise == 0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn clique_spec(sizes: &[usize], noise: usize, a: f64, b: f64) -> PlantedCliqueSpec {
        PlantedCliqueSpec {
            plan: CliquePlan::from_sizes(sizes, noise).unwrap(),
            omega_in: DistributionSpec::bernoulli(a).unwrap(),
            omega_out: DistributionSpec::bernoulli(b).unwrap(),
        }
    }

    #[test]
    fn gamma_examples() {
        assert!((gamma_clique(0.8, 0.2, 0) - 1.2).abs() < 1e-15);
        assert!((gamma_clique(0.8, 0.2, 5) - 0.4).abs() < 1e-15);
        assert!((gamma_clique(0.4, 0.25, 3) + 0.1).abs() < 1e-15);
        assert!((gamma_biclique(0.8, 0.2, 0, 0) - 1.2).abs() < 1e-15);
        assert!((gamma_biclique(0.8, 0.2, 0, 4) - 0.4).abs() < 1e-15);
        assert!((gamma_biclique(0.5, 0.3, 2, 2) + 0.1).abs() < 1e-15);
    }

    #[test]
    fn distribution_validation_and_moments() {
        assert!(DistributionSpec::bernoulli(1.2).is_err());
        assert!(DistributionSpec::uniform(0.2, 0.3).is_err());
        let u = DistributionSpec::uniform(0.5, 0.3).unwrap();
        assert!((u.variance() - 0.03).abs() < 1e-15);
        let b = DistributionSpec::bernoulli(0.25).unwrap();
        assert!((b.variance() - 0.1875).abs() < 1e-15);
        let json = serde_json::to_string(&u).unwrap();
        assert_eq!(json, r#"{"kind":"uniform_interval","mean":0.5,"half_width":0.3}"#);
        let bad = r#"{"kind":"uniform_interval","mean":0.9,"half_width":0.3}"#;
        assert!(serde_json::from_str::<DistributionSpec>(bad).is_err());
    }

    #[test]
    fn deterministic_pattern_at_extreme_means() {
        let spec = clique_spec(&[3, 2], 2, 1.0, 0.0);
        let w = sample_planted_cluster(&spec, 3);
        let labels = spec.plan.labels();
        for i in 0..7 {
            for j in 0..7 {
                let inside = labels[i].is_some() && labels[i] == labels[j];
                assert_eq!(w.get(i, j), if inside { 1.0 } else { 0.0 });
            }
        }
        let bspec = PlantedBicliqueSpec {
            plan: BicliquePlan::from_sizes(&[2, 3], &[1, 2], 1, 1).unwrap(),
            omega_in: DistributionSpec::bernoulli(1.0).unwrap(),
            omega_out: DistributionSpec::bernoulli(0.0).unwrap(),
        };
        let w = sample_planted_bicluster(&bspec, 3);
        let (l, r) = bspec.plan.labels();
        for u in 0..6 {
            for v in 0..4 {
                let inside = l[u].is_some() && l[u] == r[v];
                assert_eq!(w.get(u, v), if inside { 1.0 } else { 0.0 });
            }
        }
    }

    #[test]
    fn same_seed_same_matrix() {
        let spec = clique_spec(&[4, 4], 1, 0.7, 0.3);
        assert_eq!(sample_planted_cluster(&spec, 42), sample_planted_cluster(&spec, 42));
        assert_ne!(sample_planted_cluster(&spec, 42), sample_planted_cluster(&spec, 43));
    }

    #[test]
    fn clique_guarantee_examples() {
        let p = GuaranteeParams::default();
        let params = GuaranteeParams { c1: 1.0, c2: 1.0, c3: 1.0, ..p };
        // N = 10000, k = 2, r̂ = 5000, no noise, γ = 1.2.
        let spec = clique_spec(&[5000, 5000], 0, 0.8, 0.2);
        let r = check_clique_guarantee(&spec, &params);
        assert!((r.lhs - 100.0).abs() < 1e-9 && (r.rhs - 6000.0).abs() < 1e-9 && r.holds);
        let spec = clique_spec(&[10; 10], 0, 0.8, 0.2);
        let r = check_clique_guarantee(&spec, &params);
        assert!((r.lhs - 10.0).abs() < 1e-12 && (r.rhs - 12.0).abs() < 1e-12 && r.holds);
        let spec = clique_spec(&[10; 10], 0, 0.4, 0.4);
        assert!(!check_clique_guarantee(&spec, &params).holds);
    }

    #[test]
    fn biclique_guarantee_examples() {
        let params = GuaranteeParams { b1: 1.0, b2: 1.0, ..GuaranteeParams::default() };
        let spec = PlantedBicliqueSpec {
            plan: BicliquePlan::from_sizes(&[100], &[100], 0, 0).unwrap(),
            omega_in: DistributionSpec::bernoulli(0.8).unwrap(),
            omega_out: DistributionSpec::bernoulli(0.2).unwrap(),
        };
        let r = check_biclique_guarantee(&spec, &params);
        assert!((r.lhs - 20.0).abs() < 1e-12 && (r.rhs - 120.0).abs() < 1e-12);
        assert!(r.holds && r.tau_condition_holds);
        assert!(tau_condition(0.8, 0.2, &[1.0, 1.0]));
        assert!(!tau_condition(0.5, 0.2, &[1.0, 3.0]));
    }

    #[test]
    fn noise_changes_gamma_by_alpha() {
        for &(a, b) in &[(0.3, 0.1), (0.9, 0.5), (0.5, 0.5)] {
            assert!((gamma_clique(a, b, 0) - gamma_clique(a, b, 4) - a).abs() < 1e-15);
        }
    }
}
