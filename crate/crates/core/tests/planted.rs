use densest_core::graph::{BicliquePlan, CliquePlan, Partition};
use densest_core::planted::*;
use proptest::prelude::*;

fn clique_spec(sizes: &[usize], noise: usize, inner: DistributionSpec, outer: DistributionSpec) -> PlantedCliqueSpec {
    PlantedCliqueSpec { plan: CliquePlan::from_sizes(sizes, noise).unwrap(), omega_in: inner, omega_out: outer }
}

#[test]
fn deterministic_extremes_give_the_block_pattern() {
    let spec = clique_spec(&[3, 2], 2, DistributionSpec::bernoulli(1.0).unwrap(), DistributionSpec::bernoulli(0.0).unwrap());
    let w = sample_planted_cluster(&spec, 123);
    let lift_support = spec.plan.lift();
    for i in 0..7 {
        for j in 0..7 {
            assert_eq!(w.get(i, j), if lift_support[(i, j)] > 0.0 { 1.0 } else { 0.0 });
        }
    }
    let bspec = PlantedBicliqueSpec {
        plan: BicliquePlan::from_sizes(&[2, 1], &[1, 3], 1, 0).unwrap(),
        omega_in: DistributionSpec::bernoulli(1.0).unwrap(),
        omega_out: DistributionSpec::bernoulli(0.0).unwrap(),
    };
    let w = sample_planted_bicluster(&bspec, 5);
    let (l, r) = bspec.plan.labels();
    for u in 0..4 {
        for v in 0..4 {
            let same = l[u].is_some() && l[u] == r[v];
            assert_eq!(w.get(u, v), if same { 1.0 } else { 0.0 });
        }
    }
}

#[test]
fn block_means_concentrate() {
    // |mean − α| ≤ 4σ/√E in at least 99% of 200 draws.
    let inner = DistributionSpec::bernoulli(0.8).unwrap();
    let spec = clique_spec(&[30, 30], 0, inner, DistributionSpec::uniform(0.3, 0.2).unwrap());
    let entries = 30 * 31 / 2;
    let bound = 4.0 * inner.std_dev() / (entries as f64).sqrt();
    let mut hits = 0;
    for seed in 0..200 {
        let w = sample_planted_cluster(&spec, seed);
        let mut sum = 0.0;
        for i in 0..30 {
            for j in i..30 {
                sum += w.get(i, j);
            }
        }
        hits += ((sum / entries as f64 - 0.8).abs() <= bound) as usize;
    }
    assert!(hits >= 198, "{hits}/200");

    let bspec = PlantedBicliqueSpec {
        plan: BicliquePlan::from_sizes(&[20], &[25], 0, 0).unwrap(),
        omega_in: inner,
        omega_out: DistributionSpec::bernoulli(0.1).unwrap(),
    };
    let bound = 4.0 * inner.std_dev() / (500f64).sqrt();
    let hits = (0..200)
        .filter(|&seed| {
            let w = sample_planted_bicluster(&bspec, seed);
            let mean = w.matrix().as_slice().iter().sum::<f64>() / 500.0;
            (mean - 0.8).abs() <= bound
        })
        .count();
    assert!(hits >= 198, "{hits}/200");
}

#[test]
fn guarantee_examples() {
    let spec = clique_spec(&[5000, 5000], 0, DistributionSpec::bernoulli(0.8).unwrap(), DistributionSpec::bernoulli(0.2).unwrap());
    let r = check_clique_guarantee(&spec, &GuaranteeParams::default());
    assert!((r.gamma - 1.2).abs() < 1e-12);
    assert!((r.lhs - 100.0).abs() < 1e-12);
    assert!((r.rhs - 6000.0).abs() < 1e-9);
    assert!(r.holds);

    let bspec = PlantedBicliqueSpec {
        plan: BicliquePlan::from_sizes(&[100], &[100], 0, 0).unwrap(),
        omega_in: DistributionSpec::bernoulli(0.8).unwrap(),
        omega_out: DistributionSpec::bernoulli(0.2).unwrap(),
    };
    let r = check_biclique_guarantee(&bspec, &GuaranteeParams::default());
    assert!((r.lhs - 20.0).abs() < 1e-12);
    assert!((r.rhs - 120.0).abs() < 1e-9);
    assert!(r.holds && r.tau_condition_holds && !r.tau_noise_undefined);

    // τ = (1, 3): 0.5 · 1 ≤ 0.2 · 3.
    assert!(!tau_condition(0.5, 0.2, &[1.0, 3.0]));
    assert!(tau_condition(0.8, 0.2, &[1.0, 1.0]));

    let one_sided = PlantedBicliqueSpec { plan: BicliquePlan::from_sizes(&[4], &[4], 3, 0).unwrap(), ..bspec };
    assert!(check_biclique_guarantee(&one_sided, &GuaranteeParams::default()).tau_noise_undefined);
}

proptest! {
    #[test]
    fn entries_stay_in_range_and_reproduce(
        seed in any::<u64>(),
        a in 0.0f64..=1.0,
        b in 0.0f64..=1.0,
        spread in 0.0f64..=1.0,
    ) {
        let inner = DistributionSpec::uniform(a, spread * a.min(1.0 - a)).unwrap();
        let spec = clique_spec(&[3, 4], 2, inner, DistributionSpec::bernoulli(b).unwrap());
        let w1 = sample_planted_cluster(&spec, seed);
        let w2 = sample_planted_cluster(&spec, seed);
        prop_assert_eq!(&w1, &w2);
        prop_assert!(w1.matrix().as_slice().iter().all(|v| (0.0..=1.0).contains(v)));
        let bspec = PlantedBicliqueSpec {
            plan: BicliquePlan::from_sizes(&[2, 3], &[3, 1], 1, 2).unwrap(),
            omega_in: inner,
            omega_out: DistributionSpec::bernoulli(b).unwrap(),
        };
        let z1 = sample_planted_bicluster(&bspec, seed);
        prop_assert_eq!(&z1, &sample_planted_bicluster(&bspec, seed));
        prop_assert!(z1.matrix().as_slice().iter().all(|v| (0.0..=1.0).contains(v)));
    }

    #[test]
    fn gamma_noise_drop_is_alpha(a in 0.0f64..=1.0, b in 0.0f64..=1.0, r in 1usize..100, s in 1usize..100) {
        prop_assert!((gamma_clique(a, b, 0) - gamma_clique(a, b, r) - a).abs() <= 1e-15);
        prop_assert!((gamma_biclique(a, b, 0, 0) - gamma_biclique(a, b, r, s) - a).abs() <= 1e-15);
        prop_assert_eq!(gamma_biclique(a, b, r, 0), gamma_biclique(a, b, r, s));
    }

    #[test]
    fn guarantee_holds_iff_its_sides_agree(a in 0.0f64..=1.0, b in 0.0f64..=1.0, r in 1usize..40, noise in 0usize..10) {
        let spec = clique_spec(&[r, r + 1], noise, DistributionSpec::bernoulli(a).unwrap(), DistributionSpec::bernoulli(b).unwrap());
        let rep = check_clique_guarantee(&spec, &GuaranteeParams::default());
        prop_assert_eq!(rep.holds, rep.gamma > 0.0 && rep.lhs <= rep.rhs);
        prop_assert!((rep.rhs - rep.gamma * r as f64).abs() <= 1e-12);
    }

    #[test]
    fn distribution_moments(mean in 0.0f64..=1.0, spread in 0.0f64..=1.0) {
        let hw = spread * mean.min(1.0 - mean);
        let u = DistributionSpec::uniform(mean, hw).unwrap();
        prop_assert!((u.variance() - hw * hw / 3.0).abs() <= 1e-15);
        let b = DistributionSpec::bernoulli(mean).unwrap();
        prop_assert!((b.variance() - mean * (1.0 - mean)).abs() <= 1e-15);
        prop_assert!(DistributionSpec::uniform(mean, mean.min(1.0 - mean) + 1e-6).is_err());
    }
}

#[test]
fn distribution_json_shapes() {
    let d: DistributionSpec = serde_json::from_str(r#"{"kind":"uniform","mean":0.5,"half_width":0.1}"#).unwrap();
    assert_eq!(d, DistributionSpec::uniform(0.5, 0.1).unwrap());
    assert!(serde_json::from_str::<DistributionSpec>(r#"{"kind":"bernoulli","mean":1.5}"#).is_err());
    assert!(serde_json::from_str::<DistributionSpec>(r#"{"kind":"uniform","mean":0.1,"half_width":0.5}"#).is_err());
}
