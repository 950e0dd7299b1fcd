use densest_core::certificates::*;
use densest_core::graph::{BicliquePlan, CliquePlan};
use densest_core::linalg::{dense_solve, Matrix};
use densest_core::planted::*;
use proptest::prelude::*;

fn clique_instance(sizes: &[usize], noise: usize, a: f64, b: f64, seed: u64) -> (densest_core::graph::SymmetricWeights, CliquePlan) {
    let spec = PlantedCliqueSpec {
        plan: CliquePlan::from_sizes(sizes, noise).unwrap(),
        omega_in: DistributionSpec::bernoulli(a).unwrap(),
        omega_out: DistributionSpec::bernoulli(b).unwrap(),
    };
    (sample_planted_cluster(&spec, seed), spec.plan)
}

fn biclique_instance(
    left: &[usize],
    right: &[usize],
    noise: (usize, usize),
    a: f64,
    b: f64,
    seed: u64,
) -> (densest_core::graph::BipartiteWeights, BicliquePlan) {
    let spec = PlantedBicliqueSpec {
        plan: BicliquePlan::from_sizes(left, right, noise.0, noise.1).unwrap(),
        omega_in: DistributionSpec::uniform(a, 0.5 * a.min(1.0 - a)).unwrap(),
        omega_out: DistributionSpec::uniform(b, 0.5 * b.min(1.0 - b)).unwrap(),
    };
    (sample_planted_bicluster(&spec, seed), spec.plan)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn smw_matches_a_dense_solve(a in 0.1f64..10.0, pairs in proptest::collection::vec((-3.0f64..3.0, -3.0f64..3.0), 1..12)) {
        let (u, rhs): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
        let n = u.len();
        let dense = Matrix::from_fn(n, n, |i, j| u[i] * u[j] + if i == j { a } else { 0.0 });
        let expected = dense_solve(&dense, &rhs).unwrap();
        let got = smw_solve(a, &u, &rhs).unwrap();
        let scale = expected.iter().fold(1e-300f64, |m, x| m.max(x.abs()));
        for (g, e) in got.iter().zip(&expected) {
            prop_assert!((g - e).abs() <= 1e-12 * scale.max(1.0), "{g} vs {e}");
        }
    }
}

#[test]
fn smw_rejects_bad_input() {
    assert!(smw_solve(0.0, &[1.0], &[1.0]).is_err());
    assert!(smw_solve(1.0, &[1.0, 2.0], &[1.0]).is_err());
}

#[test]
fn ideal_instances_pass() {
    let (w, plan) = clique_instance(&[4, 5, 6], 3, 1.0, 0.0, 0);
    let cert = build_clique_certificate(&w, &plan, DEFAULT_EPSILON).unwrap();
    let report = verify_clique_kkt(&w, &plan, &cert, 1e-8);
    assert!(report.passed, "{report:?}");
    assert!(clique_uniqueness_holds(&w, &plan));

    let (w, plan) = biclique_instance(&[4, 5], &[5, 4], (0, 0), 0.8, 0.0, 0);
    let cert = build_biclique_certificate(&w, &plan, DEFAULT_EPSILON, DEFAULT_KAPPA, DEFAULT_RHO1).unwrap();
    let report = verify_biclique_kkt(&w, &plan, &cert, 1e-8);
    assert!(report.passed, "{report:?}");
    assert!(biclique_uniqueness_holds(&w, &plan));
}

#[test]
fn noisy_instances_satisfy_stationarity() {
    for seed in 0..5 {
        let (w, plan) = clique_instance(&[20, 25], 6, 0.85, 0.15, seed);
        let cert = build_clique_certificate(&w, &plan, DEFAULT_EPSILON).unwrap();
        let r = verify_clique_kkt(&w, &plan, &cert, 1e-8);
        assert!(r.stationarity_resid <= 1e-10, "{}", r.stationarity_resid);
        assert!(r.cs_rowsum_resid <= 1e-10 && r.cs_nonneg_resid <= 1e-10, "{r:?}");
        let parts = cert.s_tilde_parts.iter().skip(1).fold(cert.s_tilde_parts[0].clone(), |acc, p| acc.add(p));
        assert!(parts.sub(&cert.s_tilde).max_abs() <= 1e-10);

        let (w, plan) = biclique_instance(&[15, 20], &[20, 15], (3, 4), 0.8, 0.2, seed);
        let cert = build_biclique_certificate(&w, &plan, DEFAULT_EPSILON, DEFAULT_KAPPA, DEFAULT_RHO1).unwrap();
        let r = verify_biclique_kkt(&w, &plan, &cert, 1e-8);
        assert!(r.stationarity_resid <= 1e-10, "{}", r.stationarity_resid);
        assert!(r.cs_rowsum_resid <= 1e-10 && r.cs_nonneg_resid <= 1e-10, "{r:?}");
        assert!(r.min_lambda > 0.0 && r.min_phi.unwrap() > 0.0);
    }
}

#[test]
fn corrupted_certificates_fail() {
    let (w, plan) = clique_instance(&[4, 5], 2, 1.0, 0.0, 1);
    let good = build_clique_certificate(&w, &plan, DEFAULT_EPSILON).unwrap();
    assert!(verify_clique_kkt(&w, &plan, &good, 1e-8).passed);

    let mut bad = good.clone();
    bad.lambda[0] = -1.0;
    let r = verify_clique_kkt(&w, &plan, &bad, 1e-8);
    assert!(!r.passed && r.stationarity_resid > 0.5);

    let mut bad = good.clone();
    bad.eta.set_pair(0, 8, -0.5);
    let r = verify_clique_kkt(&w, &plan, &bad, 1e-8);
    assert!(!r.passed && r.min_eta < 0.0);

    let mut bad = good.clone();
    bad.s.set_pair(0, 1, bad.s[(0, 1)] + 1e-3);
    assert!(!verify_clique_kkt(&w, &plan, &bad, 1e-8).passed);

    assert!(build_clique_certificate(&w, &CliquePlan::from_sizes(&[4, 5], 0).unwrap(), DEFAULT_EPSILON).is_err());

    // A plan that is not the planted one cannot be certified by its own slack.
    let shifted = CliquePlan::from_labels(
        &[Some(0), Some(0), Some(0), Some(1), Some(1), Some(1), Some(1), Some(1), None, None, Some(0)],
        2,
    )
    .unwrap();
    if let Ok(cert) = build_clique_certificate(&w, &shifted, DEFAULT_EPSILON) {
        assert!(!verify_clique_kkt(&w, &shifted, &cert, 1e-8).passed);
    }

    let (w, plan) = biclique_instance(&[4, 5], &[5, 4], (0, 0), 0.8, 0.0, 2);
    let good = build_biclique_certificate(&w, &plan, DEFAULT_EPSILON, DEFAULT_KAPPA, DEFAULT_RHO1).unwrap();
    let mut bad = good.clone();
    bad.phi[0] += 0.25;
    assert!(!verify_biclique_kkt(&w, &plan, &bad, 1e-8).passed);
}

#[test]
fn builder_rejects_bad_parameters() {
    let (w, plan) = clique_instance(&[3, 3], 0, 0.9, 0.1, 0);
    assert!(build_clique_certificate(&w, &plan, 0.0).is_err());
    let (bw, bplan) = biclique_instance(&[3], &[3], (0, 0), 0.8, 0.2, 0);
    assert!(build_biclique_certificate(&bw, &bplan, 0.1, 1.0, 1.0).is_err());
    assert!(build_biclique_certificate(&bw, &bplan, 0.1, 0.5, 0.0).is_err());
    // α = 0.2, β = 0.3 with noise on both sides gives γ < 0.
    let (bw, bplan) = biclique_instance(&[3], &[3], (2, 2), 0.2, 0.3, 0);
    let means = ModelMeans { alpha: 0.2, beta: 0.3 };
    assert!(build_biclique_certificate_with_means(&bw, &bplan, means, 0.1, 0.5, 1.0).is_err());
}
