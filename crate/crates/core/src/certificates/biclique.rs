//! Certificate for the densest k-disjoint-biclique relaxation.
//!
//! Work happens in the symmetric `(m + n)`-dimensional embedding, with right
//! vertex `v` at index `m + v`. Block `q < k` is `C_q = U_q ∪ V_q` with
//! weight vector `w_q = (e; τ_q e)`, `τ_q = √(m_q/n_q)`; block `k` is the
//! noise pair. The multipliers are
//!
//! ```text
//! (m_q I + eeᵀ) λ_q = τ_q W_qq e − μ₁ e
//! (n_q I + eeᵀ) φ_q = W_qqᵀ e / τ_q − μ₂ e
//! η_qs = Π^{qs} + y w_sᵀ + w_q zᵀ          (q ≠ s), 0 on diagonal blocks
//! S    = diag(μ₁I, μ₂I) + S̄ − η,   S̄ = [[λeᵀ + eλᵀ, −W], [−Wᵀ, φeᵀ + eφᵀ]]
//! ```
//!
//! `Π^{qs}` is block-constant with entries `(π₁, τ_s π₂; τ_q π₃, τ_q τ_s π₄)`,
//! chosen so that `E[S̄] − Π` annihilates the lift in expectation, and `y`,
//! `z` remove the remaining sample deviation.

use std::collections::BTreeMap;

use crate::certificates::{
    max_yz_inf, slack_measurements, smw_solve_ones, CertificateSummary, KktReport, NormBoundConstants,
    SpectralNormReport,
};
use crate::error::{Error, Result};
use crate::graph::{BicliquePlan, BipartiteWeights, Partition};
use crate::linalg::{DenseSymMatrix, Matrix};
use crate::planted::{
    defined_taus, estimate_biclique_means, gamma_biclique, rng_from_seed, tau_condition, DistributionSpec, ModelMeans,
};

#[derive(Clone, Debug)]
pub struct BicliqueCertificate {
    pub plan: BicliquePlan,
    pub means: ModelMeans,
    pub gamma: f64,
    pub epsilon: f64,
    pub kappa: f64,
    pub rho1: f64,
    pub mu1: f64,
    pub mu2: f64,
    pub lambda: Vec<f64>,
    pub phi: Vec<f64>,
    /// `E[λ_q] = ½(α/τ_q − μ₁/m_q)`, 0 for noise.
    pub expected_lambda: Vec<f64>,
    /// `E[φ_q] = ½(ατ_q − μ₂/n_q)`, 0 for noise.
    pub expected_phi: Vec<f64>,
    pub eta: DenseSymMatrix,
    pub s: DenseSymMatrix,
    /// `(q, s) ↦ (π₁, π₂, π₃, π₄)`.
    pub pi: BTreeMap<(usize, usize), [f64; 4]>,
    /// `(q, s) ↦ (y on C_q, z on C_s)`, each ordered `U` part then `V` part.
    pub yz: BTreeMap<(usize, usize), (Vec<f64>, Vec<f64>)>,
    /// `S₁..S₄`: centred noise, expected part minus `Π`, the `y`/`z` part, `diag(μ₁I, μ₂I)`.
    pub s_parts: Vec<DenseSymMatrix>,
    pub from_recovered_plan: bool,
}

/// `(π₁, π₂, π₃, π₄)` for two blocks with `λ̄ = E[λ_q] + E[λ_s]`, `φ̄ = E[φ_q] + E[φ_s]`.
pub(crate) fn pi_for_pair(lambda_bar: f64, phi_bar: f64, tau_q: f64, tau_s: f64, beta: f64, kappa: f64) -> [f64; 4] {
    let prod = tau_q * tau_s;
    let p4 = kappa * (phi_bar - beta * tau_q.max(tau_s)) / prod;
    let p2 = phi_bar / prod - beta / tau_s - p4;
    let p3 = phi_bar / prod - beta / tau_q - p4;
    let p1 = lambda_bar - phi_bar / prod + p4;
    [p1, p2, p3, p4]
}

/// Residual of the four linear conditions `Π` must meet for a pair of blocks.
#[cfg(test)]
pub(crate) fn pi_system_residual(
    pi: [f64; 4],
    lambda_bar: f64,
    phi_bar: f64,
    tau_q: f64,
    tau_s: f64,
    beta: f64,
) -> f64 {
    let [p1, p2, p3, p4] = pi;
    let prod = tau_q * tau_s;
    [
        p1 + p2 - (lambda_bar - beta / tau_s),
        p1 + p3 - (lambda_bar - beta / tau_q),
        prod * (p3 + p4) - (phi_bar - tau_s * beta),
        prod * (p2 + p4) - (phi_bar - tau_q * beta),
    ]
    .iter()
    .fold(0.0f64, |a, v| a.max(v.abs()))
}

struct Layout {
    m: usize,
    k: usize,
    /// Embedded indices of each block, `U` part first; index `k` is noise.
    blocks: Vec<Vec<usize>>,
    /// Per embedded index: block (noise = `k`).
    label: Vec<usize>,
    /// Per block: `τ_q` (1 for the noise pair).
    tau: Vec<f64>,
}

impl Layout {
    fn new(plan: &BicliquePlan) -> Self {
        let (m, n) = (plan.m(), plan.n());
        let k = plan.left_blocks().len();
        let mut blocks = Vec::with_capacity(k + 1);
        let mut label = vec![k; m + n];
        for q in 0..=k {
            let idx: Vec<usize> = plan.left(q).iter().copied().chain(plan.right(q).iter().map(|v| m + v)).collect();
            for &i in &idx {
                label[i] = q;
            }
            blocks.push(idx);
        }
        let mut tau: Vec<f64> = (0..k).map(|q| plan.tau(q)).collect();
        tau.push(1.0);
        Self { m, k, blocks, label, tau }
    }

    fn is_left(&self, i: usize) -> bool {
        i < self.m
    }

    /// `w_q` restricted to block `q`.
    fn weights(&self, q: usize) -> Vec<f64> {
        self.blocks[q].iter().map(|&i| if self.is_left(i) { 1.0 } else { self.tau[q] }).collect()
    }
}

fn sbar_entry(w: &BipartiteWeights, m: usize, lambda: &[f64], phi: &[f64], i: usize, j: usize) -> f64 {
    match (i < m, j < m) {
        (true, true) => lambda[i] + lambda[j],
        (false, false) => phi[i - m] + phi[j - m],
        (true, false) => -w.get(i, j - m),
        (false, true) => -w.get(j, i - m),
    }
}

/// Certificate with `α`, `β` estimated from `w` on `plan`.
pub fn build_biclique_certificate(
    w: &BipartiteWeights,
    plan: &BicliquePlan,
    epsilon: f64,
    kappa: f64,
    rho1: f64,
) -> Result<BicliqueCertificate> {
    if plan.m() != w.m() || plan.n() != w.n() {
        return Err(Error::Shape(format!("plan is {}x{}, weights are {}x{}", plan.m(), plan.n(), w.m(), w.n())));
    }
    build_biclique_certificate_with_means(w, plan, estimate_biclique_means(w, plan), epsilon, kappa, rho1)
}

pub fn build_biclique_certificate_with_means(
    w: &BipartiteWeights,
    plan: &BicliquePlan,
    means: ModelMeans,
    epsilon: f64,
    kappa: f64,
    rho1: f64,
) -> Result<BicliqueCertificate> {
    let (m, n) = (w.m(), w.n());
    if plan.m() != m || plan.n() != n {
        return Err(Error::Shape(format!("plan is {}x{}, weights are {m}x{n}", plan.m(), plan.n())));
    }
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(Error::Domain(format!("epsilon = {epsilon} must be positive")));
    }
    if !(kappa > 0.0 && kappa < 1.0) {
        return Err(Error::Domain(format!("kappa = {kappa} must lie in (0, 1)")));
    }
    if !(rho1 > 0.0 && rho1.is_finite()) {
        return Err(Error::Domain(format!("rho1 = {rho1} must be positive")));
    }
    let ModelMeans { alpha, beta } = means;
    let (m_noise, n_noise) = (plan.left_noise().len(), plan.right_noise().len());
    let gamma = gamma_biclique(alpha, beta, m_noise, n_noise);
    if !(gamma > 0.0) {
        return Err(Error::CertificateRefused(format!("gamma = {gamma} is not positive")));
    }
    if !tau_condition(alpha, beta, &defined_taus(plan)) {
        return Err(Error::CertificateRefused("side-ratio condition alpha*min(tau) > beta*max(tau) fails".into()));
    }
    let mu1 = epsilon * gamma * plan.min_left() as f64;
    let mu2 = epsilon * gamma * plan.min_right() as f64;
    let lay = Layout::new(plan);
    let k = lay.k;
    let dim = m + n;

    let mut lambda = vec![0.0; m];
    let mut phi = vec![0.0; n];
    let mut expected_lambda = vec![0.0; k + 1];
    let mut expected_phi = vec![0.0; k + 1];
    for q in 0..k {
        let (uq, vq) = (plan.left(q), plan.right(q));
        let tau = lay.tau[q];
        let (mq, nq) = (uq.len() as f64, vq.len() as f64);
        let rhs: Vec<f64> = uq.iter().map(|&u| tau * vq.iter().map(|&v| w.get(u, v)).sum::<f64>() - mu1).collect();
        for (&u, x) in uq.iter().zip(smw_solve_ones(mq, &rhs)) {
            lambda[u] = x;
        }
        let rhs: Vec<f64> = vq.iter().map(|&v| uq.iter().map(|&u| w.get(u, v)).sum::<f64>() / tau - mu2).collect();
        for (&v, x) in vq.iter().zip(smw_solve_ones(nq, &rhs)) {
            phi[v] = x;
        }
        expected_lambda[q] = 0.5 * (alpha / tau - mu1 / mq);
        expected_phi[q] = 0.5 * (alpha * tau - mu2 / nq);
    }

    let sbar = |i: usize, j: usize| sbar_entry(w, m, &lambda, &phi, i, j);
    let expected = |i: usize, j: usize| -> f64 {
        let (a, b) = (lay.label[i], lay.label[j]);
        match (i < m, j < m) {
            (true, true) => expected_lambda[a] + expected_lambda[b],
            (false, false) => expected_phi[a] + expected_phi[b],
            _ => -(if a == b && a < k { alpha } else { beta }),
        }
    };

    let mut eta = vec![0.0; dim * dim];
    let mut pi_part = vec![0.0; dim * dim];
    let mut yz_part = vec![0.0; dim * dim];
    let mut pi_map = BTreeMap::new();
    let mut yz = BTreeMap::new();
    let set = |buf: &mut Vec<f64>, i: usize, j: usize, v: f64| {
        buf[i * dim + j] = v;
        buf[j * dim + i] = v;
    };

    for q in 0..k {
        let wq = lay.weights(q);
        let mq = plan.left(q).len() as f64;
        for s in (q + 1)..k {
            let ws = lay.weights(s);
            let ms = plan.left(s).len() as f64;
            let (tq, ts) = (lay.tau[q], lay.tau[s]);
            let lambda_bar = expected_lambda[q] + expected_lambda[s];
            let phi_bar = expected_phi[q] + expected_phi[s];
            let pi = pi_for_pair(lambda_bar, phi_bar, tq, ts, beta, kappa);
            if pi.iter().any(|p| !(*p > 0.0)) {
                return Err(Error::CertificateRefused(format!(
                    "pi for blocks ({q}, {s}) is not positive: {pi:?}; increase kappa or decrease epsilon"
                )));
            }
            let entry = |i: usize, j: usize| match (i < m, j < m) {
                (true, true) => pi[0],
                (true, false) => ts * pi[1],
                (false, true) => tq * pi[2],
                (false, false) => tq * ts * pi[3],
            };
            let (cq, cs) = (&lay.blocks[q], &lay.blocks[s]);
            let mut bq = vec![0.0; cq.len()];
            let mut bs = vec![0.0; cs.len()];
            for (a, &i) in cq.iter().enumerate() {
                for (c, &j) in cs.iter().enumerate() {
                    let d = sbar(i, j) - expected(i, j);
                    bq[a] += d * ws[c];
                    bs[c] += d * wq[a];
                }
            }
            let t: f64 = bq.iter().zip(&wq).map(|(b, x)| b * x).sum();
            let shift = t / (2.0 * (mq + ms));
            let y: Vec<f64> = bq.iter().zip(&wq).map(|(b, x)| (b - shift * x) / (2.0 * ms)).collect();
            let z: Vec<f64> = bs.iter().zip(&ws).map(|(b, x)| (b - shift * x) / (2.0 * mq)).collect();
            for (a, &i) in cq.iter().enumerate() {
                for (c, &j) in cs.iter().enumerate() {
                    let p = entry(i, j);
                    let corr = y[a] * ws[c] + wq[a] * z[c];
                    set(&mut pi_part, i, j, p);
                    set(&mut yz_part, i, j, corr);
                    set(&mut eta, i, j, p + corr);
                }
            }
            pi_map.insert((q, s), pi);
            pi_map.insert((s, q), [pi[0], pi[2], pi[1], pi[3]]);
            yz.insert((s, q), (z.clone(), y.clone()));
            yz.insert((q, s), (y, z));
        }
    }

    let cn = lay.blocks[k].clone();
    if !cn.is_empty() {
        let tau_noise = plan.tau_noise().filter(|t| *t > 0.0).unwrap_or(1.0);
        for q in 0..k {
            let wq = lay.weights(q);
            let mq = plan.left(q).len() as f64;
            let tq = lay.tau[q];
            let p12 = 0.5 * (expected_lambda[q] - beta / tq);
            let vu = (expected_phi[q] - tq * beta) / (2.0 * tq);
            let vv = 0.5 * (expected_phi[q] - tq * beta);
            let needs_left = m_noise > 0;
            let needs_right = n_noise > 0;
            if (needs_left && !(p12 > 0.0)) || (needs_right && !(vv > 0.0)) {
                return Err(Error::CertificateRefused(format!(
                    "pi for the noise pair and block {q} is not positive; decrease epsilon"
                )));
            }
            let entry = |i: usize, j: usize| match (i < m, j < m) {
                (true, true) => p12,
                (true, false) => tq * p12,
                (false, true) => vu,
                (false, false) => vv,
            };
            let cq = &lay.blocks[q];
            let mut b = vec![0.0; cn.len()];
            for (a, &i) in cn.iter().enumerate() {
                for (c, &j) in cq.iter().enumerate() {
                    b[a] += (sbar(i, j) - expected(i, j)) * wq[c];
                }
            }
            let y: Vec<f64> = b.iter().map(|v| v / (2.0 * mq)).collect();
            for (a, &i) in cn.iter().enumerate() {
                for (c, &j) in cq.iter().enumerate() {
                    let p = entry(i, j);
                    let corr = y[a] * wq[c];
                    set(&mut pi_part, i, j, p);
                    set(&mut yz_part, i, j, corr);
                    set(&mut eta, i, j, p + corr);
                }
            }
            let p34 = (expected_phi[q] - tq * beta) / (2.0 * tau_noise * tq);
            let pi = [p12, p12, p34, p34];
            pi_map.insert((k, q), pi);
            pi_map.insert((q, k), pi);
            yz.insert((k, q), (y.clone(), vec![0.0; cq.len()]));
            yz.insert((q, k), (vec![0.0; cq.len()], y));
        }
    }

    let eta = DenseSymMatrix::from_symmetric_unchecked(dim, eta);
    let s = gradient_slack(w, &lambda, &phi, &eta, mu1, mu2);
    let s1 = DenseSymMatrix::from_fn(dim, |i, j| {
        if lay.label[i] == k && lay.label[j] == k {
            sbar(i, j)
        } else {
            sbar(i, j) - expected(i, j)
        }
    });
    let s2 = DenseSymMatrix::from_fn(dim, |i, j| {
        let (a, b) = (lay.label[i], lay.label[j]);
        if a == k && b == k {
            0.0
        } else {
            expected(i, j) - pi_part[i * dim + j]
        }
    });
    let s3 = DenseSymMatrix::from_symmetric_unchecked(dim, yz_part.iter().map(|v| -v).collect());
    let s4 = DenseSymMatrix::from_fn(dim, |i, j| match (i == j, i < m) {
        (true, true) => mu1,
        (true, false) => mu2,
        _ => 0.0,
    });

    Ok(BicliqueCertificate {
        plan: plan.clone(),
        means,
        gamma,
        epsilon,
        kappa,
        rho1,
        mu1,
        mu2,
        lambda,
        phi,
        expected_lambda,
        expected_phi,
        eta,
        s,
        pi: pi_map,
        yz,
        s_parts: vec![s1, s2, s3, s4],
        from_recovered_plan: false,
    })
}

fn gradient_slack(
    w: &BipartiteWeights,
    lambda: &[f64],
    phi: &[f64],
    eta: &DenseSymMatrix,
    mu1: f64,
    mu2: f64,
) -> DenseSymMatrix {
    let m = w.m();
    let dim = m + w.n();
    let mut s = vec![0.0; dim * dim];
    for i in 0..dim {
        for j in i..dim {
            let mut v = sbar_entry(w, m, lambda, phi, i, j) - eta[(i, j)];
            if i == j {
                v += if i < m { mu1 } else { mu2 };
            }
            s[i * dim + j] = v;
            s[j * dim + i] = v;
        }
    }
    DenseSymMatrix::from_symmetric_unchecked(dim, s)
}

/// `½(α/2 + β) max(τ_max, 1) / min(τ_min, 1)`.
fn noise_gate_constant(plan: &BicliquePlan, means: ModelMeans) -> f64 {
    let taus = defined_taus(plan);
    let hi = taus.iter().copied().fold(1.0f64, f64::max);
    let lo = taus.iter().copied().fold(1.0f64, f64::min);
    0.5 * (means.alpha / 2.0 + means.beta) * hi / lo
}

/// Checks the optimality conditions of the lift of `plan` with `cert`.
pub fn verify_biclique_kkt(
    w: &BipartiteWeights,
    plan: &BicliquePlan,
    cert: &BicliqueCertificate,
    tol: f64,
) -> KktReport {
    let m = w.m();
    let lift = plan.lift();
    let expected = gradient_slack(w, &cert.lambda, &cert.phi, &cert.eta, cert.mu1, cert.mu2);
    let stationarity = cert.s.sub(&expected).max_abs();

    // Row sums are taken within each side of the lift.
    let (mut left_cs, mut right_cs) = (0.0, 0.0);
    for i in 0..lift.n() {
        if i < m {
            left_cs += cert.lambda[i] * (lift.row(i)[..m].iter().sum::<f64>() - 1.0);
        } else {
            right_cs += cert.phi[i - m] * (lift.row(i)[m..].iter().sum::<f64>() - 1.0);
        }
    }
    let cs_rowsum = left_cs.abs() + right_cs.abs();
    let cs_nonneg = lift.dot(&cert.eta).abs();
    let (sx, s_frob, s_spec, min_eig) =
        slack_measurements(&cert.s, &lift).unwrap_or((f64::NAN, f64::NAN, f64::NAN, f64::NAN));

    let (left, right) = plan.labels();
    let min_lambda = (0..m).filter(|&u| left[u].is_some()).map(|u| cert.lambda[u]).fold(f64::INFINITY, f64::min);
    let min_phi = (0..w.n()).filter(|&v| right[v].is_some()).map(|v| cert.phi[v]).fold(f64::INFINITY, f64::min);
    let lay = Layout::new(plan);
    let dim = lift.n();
    let mut min_eta = f64::INFINITY;
    for i in 0..dim {
        for j in 0..dim {
            if lay.label[i] != lay.label[j] {
                min_eta = min_eta.min(cert.eta[(i, j)]);
            }
        }
    }
    if min_eta == f64::INFINITY {
        min_eta = 0.0;
    }

    let gate_norm = cert.s_parts[0].spectral_norm().unwrap_or(f64::NAN);
    let n_noise = plan.right_noise().len() as f64;
    let gate_noise_term = noise_gate_constant(plan, cert.means) * (n_noise * w.n() as f64).sqrt();
    let mu_min = cert.mu1.min(cert.mu2);
    let gate_margin = mu_min - gate_noise_term - gate_norm;
    let mut report = KktReport {
        stationarity_resid: stationarity,
        cs_rowsum_resid: cs_rowsum,
        cs_nonneg_resid: cs_nonneg,
        cs_sdp_resid: sx / (1.0 + s_frob),
        min_lambda,
        min_phi: Some(min_phi),
        min_eta,
        min_eig_s: min_eig,
        s_spectral_norm: s_spec,
        s_frobenius_norm: s_frob,
        tol,
        passed: false,
        gate_norm,
        gate_margin,
        sufficiency_gate_holds: gate_margin > 0.0,
        gate_noise_term,
        mu_min,
    };
    report.passed = report.evaluate_passed();
    report
}

/// `n_s eᵀW_{U_q,V_q}e > n_q eᵀW_{U_q,V_s}e` for every ordered pair of distinct blocks.
pub fn biclique_uniqueness_holds(w: &BipartiteWeights, plan: &BicliquePlan) -> bool {
    let k = plan.left_blocks().len();
    let block_sum = |a: &[usize], b: &[usize]| -> f64 { a.iter().map(|&u| b.iter().map(|&v| w.get(u, v)).sum::<f64>()).sum() };
    for q in 0..k {
        let inner = block_sum(plan.left(q), plan.right(q));
        let nq = plan.right(q).len() as f64;
        for s in 0..k {
            if s == q {
                continue;
            }
            let ns = plan.right(s).len() as f64;
            if !(ns * inner > nq * block_sum(plan.left(q), plan.right(s))) {
                return false;
            }
        }
    }
    true
}

impl BicliqueCertificate {
    /// Splits `S₁` into the multiplier deviations, the off-mean cross blocks,
    /// the in-block deviation and the residual mean shifts, with `R` drawn
    /// from `resample` (or `R = βeeᵀ` when absent).
    pub fn s1_decomposition(
        &self,
        w: &BipartiteWeights,
        resample: Option<(&DistributionSpec, u64)>,
    ) -> Vec<DenseSymMatrix> {
        let plan = &self.plan;
        let (m, n) = (plan.m(), plan.n());
        let dim = m + n;
        let lay = Layout::new(plan);
        let k = lay.k;
        let beta = self.means.beta;
        let alpha = self.means.alpha;
        let mut rng = resample.map(|(_, seed)| rng_from_seed(seed));
        let mut r = Matrix::filled(m, n, beta);
        if let (Some((dist, _)), Some(rng)) = (resample, rng.as_mut()) {
            for q in 0..k {
                for &u in plan.left(q) {
                    for &v in plan.right(q) {
                        r[(u, v)] = dist.sample(rng);
                    }
                }
            }
        }
        let dev = |i: usize| -> f64 {
            let q = lay.label[i];
            if i < m {
                self.lambda[i] - self.expected_lambda[q]
            } else {
                self.phi[i - m] - self.expected_phi[q]
            }
        };
        let cross = |i: usize, j: usize| -> Option<(usize, usize)> {
            match (i < m, j < m) {
                (true, false) => Some((i, j - m)),
                (false, true) => Some((j, i - m)),
                _ => None,
            }
        };
        let in_block = |i: usize, j: usize| lay.label[i] == lay.label[j] && lay.label[i] < k;
        let noise_pair = |i: usize, j: usize| lay.label[i] == k && lay.label[j] == k;
        let t1 = DenseSymMatrix::from_fn(dim, |i, j| if cross(i, j).is_none() { dev(i) + dev(j) } else { 0.0 });
        let t2 = DenseSymMatrix::from_fn(dim, |i, j| match cross(i, j) {
            Some((u, v)) if in_block(i, j) => beta - r[(u, v)],
            Some((u, v)) => beta - w.get(u, v),
            None => 0.0,
        });
        let t3 = DenseSymMatrix::from_fn(dim, |i, j| match cross(i, j) {
            Some((u, v)) if in_block(i, j) => alpha - w.get(u, v),
            _ => 0.0,
        });
        let t4 = DenseSymMatrix::from_fn(dim, |i, j| match cross(i, j) {
            Some((u, v)) if in_block(i, j) => r[(u, v)] - beta,
            Some(_) if noise_pair(i, j) => -beta,
            _ => 0.0,
        });
        vec![t1, t2, t3, t4]
    }

    /// Norms of the `S₁` split (with `R = βeeᵀ`) against
    /// `c₁√(kN) + c₂√N + β τ_noise n_noise`, `N` the right side size.
    pub fn spectral_norm_report(&self, w: &BipartiteWeights, constants: &NormBoundConstants) -> SpectralNormReport {
        let names = ["multiplier_deviation", "off_mean_cross", "in_block_deviation", "mean_shift"];
        let parts: Vec<(String, f64)> = names
            .iter()
            .zip(self.s1_decomposition(w, None))
            .map(|(name, p)| (name.to_string(), p.spectral_norm().unwrap_or(f64::NAN)))
            .collect();
        let total = self.s_parts[0].spectral_norm().unwrap_or(f64::NAN);
        let plan = &self.plan;
        let n = plan.n() as f64;
        let k = plan.left_blocks().len() as f64;
        let noise = ((plan.left_noise().len() * plan.right_noise().len()) as f64).sqrt();
        let bound = constants.first * (k * n).sqrt() + constants.second * n.sqrt() + self.means.beta * noise;
        let (left, right) = plan.labels();
        let min_lambda = (0..plan.m())
            .filter(|&u| left[u].is_some())
            .map(|u| self.lambda[u])
            .fold(f64::INFINITY, f64::min);
        let min_phi =
            (0..plan.n()).filter(|&v| right[v].is_some()).map(|v| self.phi[v]).fold(f64::INFINITY, f64::min);
        SpectralNormReport {
            parts,
            total,
            bound,
            ratio: total / bound,
            min_lambda,
            min_phi: Some(min_phi),
            max_yz_inf: max_yz_inf(self.yz.values()),
        }
    }

    pub fn summary(&self, w: &BipartiteWeights, tol: f64, constants: &NormBoundConstants) -> CertificateSummary {
        CertificateSummary {
            kind: "biclique".into(),
            plan_source: if self.from_recovered_plan { "recovered" } else { "planted" }.into(),
            gamma: self.gamma,
            epsilon: self.epsilon,
            mu: vec![self.mu1, self.mu2],
            alpha: self.means.alpha,
            beta: self.means.beta,
            kkt: verify_biclique_kkt(w, &self.plan, self, tol),
            uniqueness_holds: biclique_uniqueness_holds(w, &self.plan),
            norms: self.spectral_norm_report(w, constants),
        }
    }
}
