//! Certificate for the densest k-disjoint-clique relaxation.
//!
//! Blocks are numbered `0..k` with the noise set as block `k`. With
//! `μ = εγr̂` the multipliers are
//!
//! ```text
//! (r_q I + eeᵀ) λ_q = W_qq e − μe,        λ = 0 on noise
//! η_qs = E eeᵀ + y eᵀ + e zᵀ              (q ≠ s), 0 on diagonal blocks
//! S    = −W + λeᵀ + eλᵀ − η + μI
//! ```
//!
//! where `E = E[λ_q] + E[λ_s] − β` and `y`, `z` absorb the deviation of
//! `λ_q eᵀ + eλ_sᵀ − W_qs` from its mean so that every block of `S` has zero
//! row and column sums against the lift.

use std::collections::BTreeMap;

use crate::certificates::{
    max_yz_inf, slack_measurements, smw_solve_ones, CertificateSummary, KktReport, NormBoundConstants,
    SpectralNormReport,
};
use crate::error::{Error, Result};
use crate::graph::{CliquePlan, Partition, SymmetricWeights};
use crate::linalg::DenseSymMatrix;
use crate::planted::{estimate_clique_means, gamma_clique, ModelMeans};

#[derive(Clone, Debug)]
pub struct CliqueCertificate {
    pub plan: CliquePlan,
    pub means: ModelMeans,
    pub gamma: f64,
    pub epsilon: f64,
    pub mu: f64,
    pub lambda: Vec<f64>,
    /// `E[λ_q] = ½(α − μ/r_q)` per block, 0 for noise.
    pub expected_lambda: Vec<f64>,
    pub eta: DenseSymMatrix,
    pub s: DenseSymMatrix,
    /// `(q, s) ↦ (y on C_q, z on C_s)` for every ordered pair of distinct nonempty blocks.
    pub yz: BTreeMap<(usize, usize), (Vec<f64>, Vec<f64>)>,
    /// `(q, s) ↦ (b₁; b₂)`, the row and column sums of the centred block.
    pub b: BTreeMap<(usize, usize), Vec<f64>>,
    /// `S̃ = Σ s_tilde_parts`; `S − μI − S̃` vanishes on the complement of the lift.
    pub s_tilde: DenseSymMatrix,
    pub s_tilde_parts: Vec<DenseSymMatrix>,
    /// Set when the plan came from rounding rather than from the generator.
    pub from_recovered_plan: bool,
}

/// Certificate with `α`, `β` estimated from `w` on `plan`.
pub fn build_clique_certificate(w: &SymmetricWeights, plan: &CliquePlan, epsilon: f64) -> Result<CliqueCertificate> {
    if plan.n() != w.n() {
        return Err(Error::Shape(format!("plan covers {} vertices, weights have {}", plan.n(), w.n())));
    }
    build_clique_certificate_with_means(w, plan, estimate_clique_means(w, plan), epsilon)
}

pub fn build_clique_certificate_with_means(
    w: &SymmetricWeights,
    plan: &CliquePlan,
    means: ModelMeans,
    epsilon: f64,
) -> Result<CliqueCertificate> {
    let n = w.n();
    if plan.n() != n {
        return Err(Error::Shape(format!("plan covers {} vertices, weights have {n}", plan.n())));
    }
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(Error::Domain(format!("epsilon = {epsilon} must be positive")));
    }
    let ModelMeans { alpha, beta } = means;
    let k = plan.cliques().len();
    let gamma = gamma_clique(alpha, beta, plan.noise_size());
    if !(gamma > 0.0) {
        return Err(Error::CertificateRefused(format!("gamma = {gamma} is not positive")));
    }
    let mu = epsilon * gamma * plan.min_size() as f64;

    let mut lambda = vec![0.0; n];
    let mut expected_lambda = vec![0.0; k + 1];
    for q in 0..k {
        let c = plan.block(q);
        let r = c.len() as f64;
        let rhs: Vec<f64> = c.iter().map(|&i| c.iter().map(|&j| w.get(i, j)).sum::<f64>() - mu).collect();
        for (&i, v) in c.iter().zip(smw_solve_ones(r, &rhs)) {
            lambda[i] = v;
        }
        expected_lambda[q] = 0.5 * (alpha - mu / r);
    }

    let mut eta = vec![0.0; n * n];
    let mut yz = BTreeMap::new();
    let mut bmap = BTreeMap::new();
    for q in 0..=k {
        for t in (q + 1)..=k {
            let (cq, cs) = (plan.block(q), plan.block(t));
            if cq.is_empty() || cs.is_empty() {
                continue;
            }
            let (rq, rs) = (cq.len() as f64, cs.len() as f64);
            let e = expected_lambda[q] + expected_lambda[t] - beta;
            let mut b1 = vec![0.0; cq.len()];
            let mut b2 = vec![0.0; cs.len()];
            for (a, &i) in cq.iter().enumerate() {
                for (c, &j) in cs.iter().enumerate() {
                    let d = lambda[i] + lambda[j] - w.get(i, j) - e;
                    b1[a] += d;
                    b2[c] += d;
                }
            }
            let total: f64 = b1.iter().sum();
            let shift = total / (rq + rs);
            let y: Vec<f64> = b1.iter().map(|v| (v - shift) / rs).collect();
            let z: Vec<f64> = b2.iter().map(|v| (v - shift) / rq).collect();
            for (a, &i) in cq.iter().enumerate() {
                for (c, &j) in cs.iter().enumerate() {
                    let v = e + y[a] + z[c];
                    eta[i * n + j] = v;
                    eta[j * n + i] = v;
                }
            }
            let stacked: Vec<f64> = b1.iter().chain(&b2).copied().collect();
            let swapped: Vec<f64> = b2.iter().chain(&b1).copied().collect();
            bmap.insert((q, t), stacked);
            bmap.insert((t, q), swapped);
            yz.insert((t, q), (z.clone(), y.clone()));
            yz.insert((q, t), (y, z));
        }
    }
    let eta = DenseSymMatrix::from_symmetric_unchecked(n, eta);
    let s = gradient_slack(w, &lambda, &eta, mu);

    let labels = plan.labels();
    let noise = |i: usize| labels[i].is_none();
    let dev = |i: usize| labels[i].map_or(0.0, |q| lambda[i] - expected_lambda[q]);
    let part1 = DenseSymMatrix::from_fn(n, |i, j| {
        let mean = if labels[i].is_some() && labels[i] == labels[j] { alpha } else { beta };
        mean - w.get(i, j)
    });
    let part2 = DenseSymMatrix::from_fn(n, |i, j| match (noise(i), noise(j)) {
        (false, true) => dev(i),
        (true, false) => dev(j),
        _ => 0.0,
    });
    let part3 = DenseSymMatrix::from_fn(n, |i, j| if noise(i) && noise(j) { -beta } else { 0.0 });
    let mut pos = vec![0usize; n];
    for q in 0..=k {
        for (a, &i) in plan.block(q).iter().enumerate() {
            pos[i] = a;
        }
    }
    let y_noise = |i: usize| -> f64 {
        labels[i].and_then(|q| yz.get(&(q, k))).map_or(0.0, |(y, _)| y[pos[i]])
    };
    let part4 = DenseSymMatrix::from_fn(n, |i, j| match (noise(i), noise(j)) {
        (false, true) => -y_noise(i),
        (true, false) => -y_noise(j),
        _ => 0.0,
    });
    let s_tilde = part1.add(&part2).add(&part3).add(&part4);

    Ok(CliqueCertificate {
        plan: plan.clone(),
        means,
        gamma,
        epsilon,
        mu,
        lambda,
        expected_lambda,
        eta,
        s,
        yz,
        b: bmap,
        s_tilde,
        s_tilde_parts: vec![part1, part2, part3, part4],
        from_recovered_plan: false,
    })
}

fn gradient_slack(w: &SymmetricWeights, lambda: &[f64], eta: &DenseSymMatrix, mu: f64) -> DenseSymMatrix {
    let n = w.n();
    let mut s = vec![0.0; n * n];
    for i in 0..n {
        for j in i..n {
            let mut v = -w.get(i, j) + lambda[i] + lambda[j] - eta[(i, j)];
            if i == j {
                v += mu;
            }
            s[i * n + j] = v;
            s[j * n + i] = v;
        }
    }
    DenseSymMatrix::from_symmetric_unchecked(n, s)
}

/// Checks the optimality conditions of the lift of `plan` with `cert`.
pub fn verify_clique_kkt(w: &SymmetricWeights, plan: &CliquePlan, cert: &CliqueCertificate, tol: f64) -> KktReport {
    let n = w.n();
    let lift = plan.lift();
    let expected = gradient_slack(w, &cert.lambda, &cert.eta, cert.mu);
    let stationarity = cert.s.sub(&expected).max_abs();

    let rows = lift.row_sums();
    let cs_rowsum: f64 = cert.lambda.iter().zip(&rows).map(|(l, r)| l * (r - 1.0)).sum::<f64>().abs();
    let cs_nonneg = lift.dot(&cert.eta).abs();
    let (sx, s_frob, s_spec, min_eig) = slack_measurements(&cert.s, &lift).unwrap_or((f64::NAN, f64::NAN, f64::NAN, f64::NAN));

    let labels = plan.labels();
    let min_lambda = (0..n).filter(|&i| labels[i].is_some()).map(|i| cert.lambda[i]).fold(f64::INFINITY, f64::min);
    let mut min_eta = f64::INFINITY;
    for i in 0..n {
        for j in 0..n {
            if labels[i] != labels[j] {
                min_eta = min_eta.min(cert.eta[(i, j)]);
            }
        }
    }
    if min_eta == f64::INFINITY {
        min_eta = 0.0;
    }
    let gate_norm = cert.s_tilde.spectral_norm().unwrap_or(f64::NAN);
    let gate_margin = cert.mu - gate_norm;
    let mut report = KktReport {
        stationarity_resid: stationarity,
        cs_rowsum_resid: cs_rowsum,
        cs_nonneg_resid: cs_nonneg,
        cs_sdp_resid: sx / (1.0 + s_frob),
        min_lambda,
        min_phi: None,
        min_eta,
        min_eig_s: min_eig,
        s_spectral_norm: s_spec,
        s_frobenius_norm: s_frob,
        tol,
        passed: false,
        gate_norm,
        gate_margin,
        sufficiency_gate_holds: gate_margin > 0.0,
        gate_noise_term: 0.0,
        mu_min: cert.mu,
    };
    report.passed = report.evaluate_passed();
    report
}

/// `r_s eᵀW_qq e > r_q eᵀW_qs e` for every ordered pair of distinct cliques.
pub fn clique_uniqueness_holds(w: &SymmetricWeights, plan: &CliquePlan) -> bool {
    let k = plan.cliques().len();
    let block_sum = |a: &[usize], b: &[usize]| -> f64 { a.iter().map(|&i| b.iter().map(|&j| w.get(i, j)).sum::<f64>()).sum() };
    for q in 0..k {
        let cq = plan.block(q);
        let inner = block_sum(cq, cq);
        for s in 0..k {
            if s == q {
                continue;
            }
            let cs = plan.block(s);
            if !(cs.len() as f64 * inner > cq.len() as f64 * block_sum(cq, cs)) {
                return false;
            }
        }
    }
    true
}

impl CliqueCertificate {
    /// Norms of `S̃₁..S̃₄` against `c₁√N + c₂√(k r_noise) + β r_noise`.
    pub fn spectral_norm_report(&self, constants: &NormBoundConstants) -> SpectralNormReport {
        let names = ["mean_deviation", "noise_lambda_deviation", "noise_block_mean", "noise_y_correction"];
        let parts: Vec<(String, f64)> = names
            .iter()
            .zip(&self.s_tilde_parts)
            .map(|(name, p)| (name.to_string(), p.spectral_norm().unwrap_or(f64::NAN)))
            .collect();
        let total = self.s_tilde.spectral_norm().unwrap_or(f64::NAN);
        let n = self.plan.n() as f64;
        let k = self.plan.cliques().len() as f64;
        let r_noise = self.plan.noise_size() as f64;
        let bound = constants.first * n.sqrt() + constants.second * (k * r_noise).sqrt() + self.means.beta * r_noise;
        let labels = self.plan.labels();
        let min_lambda = (0..self.lambda.len())
            .filter(|&i| labels[i].is_some())
            .map(|i| self.lambda[i])
            .fold(f64::INFINITY, f64::min);
        SpectralNormReport {
            parts,
            total,
            bound,
            ratio: total / bound,
            min_lambda,
            min_phi: None,
            max_yz_inf: max_yz_inf(self.yz.values()),
        }
    }

    pub fn summary(&self, w: &SymmetricWeights, tol: f64, constants: &NormBoundConstants) -> CertificateSummary {
        CertificateSummary {
            kind: "clique".into(),
            plan_source: if self.from_recovered_plan { "recovered" } else { "planted" }.into(),
            gamma: self.gamma,
            epsilon: self.epsilon,
            mu: vec![self.mu],
            alpha: self.means.alpha,
            beta: self.means.beta,
            kkt: verify_clique_kkt(w, &self.plan, self, tol),
            uniqueness_holds: clique_uniqueness_holds(w, &self.plan),
            norms: self.spectral_norm_report(constants),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::planted::{sample_planted_cluster, DistributionSpec, PlantedCliqueSpec};

    fn ideal(sizes: &[usize], noise: usize) -> (SymmetricWeights, CliquePlan) {
        let plan = CliquePlan::from_sizes(sizes, noise).unwrap();
        let l = plan.labels();
        let w = DenseSymMatrix::from_fn(plan.n(), |i, j| if l[i].is_some() && l[i] == l[j] { 1.0 } else { 0.0 });
        (SymmetricWeights::new(w).unwrap(), plan)
    }

    fn planted(a: f64, b: f64, sizes: &[usize], noise: usize, seed: u64) -> (SymmetricWeights, PlantedCliqueSpec) {
        let spec = PlantedCliqueSpec {
            plan: CliquePlan::from_sizes(sizes, noise).unwrap(),
            omega_in: DistributionSpec::bernoulli(a).unwrap(),
            omega_out: DistributionSpec::bernoulli(b).unwrap(),
        };
        (sample_planted_cluster(&spec, seed), spec)
    }

    #[test]
    fn ideal_multipliers() {
        let (w, plan) = ideal(&[4, 4, 4], 0);
        let eps = 0.1;
        let cert = build_clique_certificate(&w, &plan, eps).unwrap();
        assert!((cert.gamma - 2.0).abs() < 1e-15);
        for l in &cert.lambda {
            assert!((l - (0.5 - eps)).abs() < 1e-12);
        }
        for b in cert.b.values() {
            assert!(b.iter().all(|v| v.abs() < 1e-12));
        }
        let expect = 1.0 - cert.mu / 4.0;
        for i in 0..12 {
            for j in 0..12 {
                let v = cert.eta[(i, j)];
                if i / 4 == j / 4 {
                    assert_eq!(v, 0.0);
                } else {
                    assert!((v - expect).abs() < 1e-12);
                }
            }
        }
        let rep = verify_clique_kkt(&w, &plan, &cert, 1e-8);
        assert!(rep.passed, "{rep:?}");
        assert!(rep.min_eig_s >= -1e-10);
        assert!(clique_uniqueness_holds(&w, &plan));
        let norms = cert.spectral_norm_report(&NormBoundConstants::default());
        assert!(norms.total < 1e-12 && norms.triangle_inequality_holds());
    }

    #[test]
    fn ideal_with_noise_passes() {
        let (w, plan) = ideal(&[3, 4], 2);
        let cert = build_clique_certificate(&w, &plan, 0.1).unwrap();
        let rep = verify_clique_kkt(&w, &plan, &cert, 1e-8);
        assert!(rep.passed, "{rep:?}");
        for &i in plan.noise() {
            assert_eq!(cert.lambda[i], 0.0);
            for &j in plan.noise() {
                assert_eq!(cert.eta[(i, j)], 0.0);
            }
        }
    }

    #[test]
    fn corrupted_lambda_breaks_stationarity() {
        let (w, plan) = ideal(&[3, 3], 0);
        let mut cert = build_clique_certificate(&w, &plan, 0.1).unwrap();
        cert.lambda[2] += 1.0;
        let rep = verify_clique_kkt(&w, &plan, &cert, 1e-8);
        assert!(rep.stationarity_resid > 0.9);
        assert!(!rep.passed);
    }

    #[test]
    fn gamma_nonpositive_is_refused() {
        let (w, plan) = ideal(&[3, 3], 0);
        let err = build_clique_certificate_with_means(&w, &plan, ModelMeans { alpha: 0.2, beta: 0.3 }, 0.1);
        assert!(matches!(err, Err(Error::CertificateRefused(_))));
    }

    #[test]
    fn planted_instance_identities() {
        for (noise, seed) in [(0, 3u64), (6, 4)] {
            let (w, spec) = planted(0.9, 0.1, &[30, 30], noise, seed);
            let plan = &spec.plan;
            let cert = build_clique_certificate_with_means(&w, plan, spec.means(), 0.1).unwrap();
            let n = w.n();
            let lift = plan.lift();
            let sx = cert.s.matmul(&lift).frobenius_norm();
            assert!(sx <= 1e-9 * (1.0 + cert.s.frobenius_norm()), "{sx}");
            let rep = verify_clique_kkt(&w, plan, &cert, 1e-6);
            assert!(rep.stationarity_resid <= 1e-12);
            if noise == 0 {
                assert!(rep.min_eta >= -1e-10, "{}", rep.min_eta);
            }

            // y/z solve the unperturbed singular system and mirror each other.
            for (&(q, s), (y, z)) in &cert.yz {
                let (rq, rs) = (plan.block(q).len() as f64, plan.block(s).len() as f64);
                let b = &cert.b[&(q, s)];
                let (b1, b2) = b.split_at(y.len());
                let (sy, sz): (f64, f64) = (y.iter().sum(), z.iter().sum());
                for (v, bb) in y.iter().zip(b1) {
                    assert!((rs * v + sz - bb).abs() < 1e-10);
                }
                for (v, bb) in z.iter().zip(b2) {
                    assert!((rq * v + sy - bb).abs() < 1e-10);
                }
                let mirrored = &cert.yz[&(s, q)];
                assert_eq!((&mirrored.0, &mirrored.1), (z, y));
            }

            // S − μI − S̃ vanishes on the complement of the lift's column space.
            let p = DenseSymMatrix::identity(n).sub(&lift);
            let rest = cert.s.sub(&DenseSymMatrix::identity(n).scaled(cert.mu)).sub(&cert.s_tilde);
            let left = p.matmul(&rest);
            let both = left.matmul(&p.to_matrix()).unwrap();
            assert!(both.max_abs() < 1e-9, "{}", both.max_abs());
        }
    }

    #[test]
    fn uniqueness_examples() {
        let plan = CliquePlan::from_sizes(&[3, 3], 0).unwrap();
        let flat = SymmetricWeights::new(DenseSymMatrix::from_fn(6, |_, _| 0.3)).unwrap();
        assert!(!clique_uniqueness_holds(&flat, &plan));
        let hits = (0..20)
            .filter(|&seed| {
                let (w, spec) = planted(0.8, 0.2, &[40, 40], 0, seed);
                clique_uniqueness_holds(&w, &spec.plan)
            })
            .count();
        assert_eq!(hits, 20);
    }
}
