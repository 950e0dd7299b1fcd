//! Clique and biclique densities.
//!
//! Clique density is the quadratic form `vᵀWv / vᵀv` of the characteristic
//! vector, so diagonal weights count once and off-diagonal pairs twice.

use crate::error::{Error, Result};
use crate::graph::plan::{BicliquePlan, CliquePlan};
use crate::graph::weights::{BipartiteWeights, SymmetricWeights};

fn check_members(set: &[usize], universe: usize, what: &str) -> Result<()> {
    if set.is_empty() {
        return Err(Error::Domain(format!("{what} must be nonempty")));
    }
    if let Some(&v) = set.iter().find(|&&v| v >= universe) {
        return Err(Error::Domain(format!("{what} contains vertex {v}, outside 0..{universe}")));
    }
    Ok(())
}

/// `Σ_{i,j ∈ C} W_ij / |C|`.
pub fn clique_density(w: &SymmetricWeights, clique: &[usize]) -> Result<f64> {
    check_members(clique, w.n(), "clique")?;
    let mut total = 0.0;
    for &i in clique {
        for &j in clique {
            total += w.get(i, j);
        }
    }
    Ok(total / clique.len() as f64)
}

/// Sum of the densities of the plan's cliques; the noise set contributes nothing.
pub fn clique_sum_density(w: &SymmetricWeights, plan: &CliquePlan) -> Result<f64> {
    if plan.n() != w.n() {
        return Err(Error::Shape(format!("plan covers {} vertices, weights have {}", plan.n(), w.n())));
    }
    plan.cliques().iter().map(|c| clique_density(w, c)).sum()
}

/// `Σ_{u ∈ U', v ∈ V'} W_uv / sqrt(|U'| |V'|)`.
pub fn biclique_density(w: &BipartiteWeights, left: &[usize], right: &[usize]) -> Result<f64> {
    check_members(left, w.m(), "left side")?;
    check_members(right, w.n(), "right side")?;
    let mut total = 0.0;
    for &u in left {
        for &v in right {
            total += w.get(u, v);
        }
    }
    Ok(total / ((left.len() * right.len()) as f64).sqrt())
}

/// Sum of biclique densities over the plan's blocks.
pub fn biclique_sum_density(w: &BipartiteWeights, plan: &BicliquePlan) -> Result<f64> {
    if plan.m() != w.m() || plan.n() != w.n() {
        return Err(Error::Shape(format!(
            "plan is {}x{}, weights are {}x{}",
            plan.m(),
            plan.n(),
            w.m(),
            w.n()
        )));
    }
    plan.left_blocks()
        .iter()
        .zip(plan.right_blocks())
        .map(|(u, v)| biclique_density(w, u, v))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::plan::Partition;
    use crate::linalg::{DenseSymMatrix, Matrix};

    fn lcg(seed: u64) -> impl FnMut() -> f64 {
        let mut s = seed;
        move || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (s >> 11) as f64 / (1u64 << 53) as f64
        }
    }

    #[test]
    fn clique_density_examples() {
        let ones = SymmetricWeights::new(DenseSymMatrix::from_fn(3, |_, _| 1.0)).unwrap();
        assert_eq!(clique_density(&ones, &[0, 1, 2]).unwrap(), 3.0);
        assert_eq!(clique_density(&ones, &[0]).unwrap(), 1.0);
        let mut w = DenseSymMatrix::zeros(4);
        w.set_pair(0, 0, 1.0);
        w.set_pair(1, 1, 1.0);
        w.set_pair(0, 1, 0.5);
        let w = SymmetricWeights::new(w).unwrap();
        assert_eq!(clique_density(&w, &[0, 1]).unwrap(), 1.5);
        assert!(clique_density(&w, &[]).is_err());
    }

    #[test]
    fn block_diagonal_sum() {
        let plan = CliquePlan::from_sizes(&[2, 3], 0).unwrap();
        let labels = plan.labels();
        let w = SymmetricWeights::new(DenseSymMatrix::from_fn(5, |i, j| {
            if labels[i] == labels[j] { 1.0 } else { 0.0 }
        }))
        .unwrap();
        assert_eq!(clique_sum_density(&w, &plan).unwrap(), 5.0);
        let wrong = CliquePlan::from_sizes(&[2], 0).unwrap();
        assert!(clique_sum_density(&w, &wrong).is_err());
    }

    #[test]
    fn clique_sum_matches_trace_with_lift() {
        let mut rnd = lcg(11);
        let w = SymmetricWeights::new(DenseSymMatrix::from_fn(6, |_, _| rnd())).unwrap();
        let plan = CliquePlan::new(6, vec![vec![0, 4], vec![1, 2, 5]]).unwrap();
        // Tr(Xᵀ W X) with X the normalized indicator columns.
        let mut trace = 0.0;
        for c in plan.cliques() {
            let r = c.len() as f64;
            for &i in c {
                for &j in c {
                    trace += w.get(i, j) / r;
                }
            }
        }
        let via_lift = w.matrix().dot(&plan.lift());
        let direct = clique_sum_density(&w, &plan).unwrap();
        assert!((direct - trace).abs() < 1e-12);
        assert!((direct - via_lift).abs() < 1e-12);
    }

    #[test]
    fn biclique_density_examples() {
        let w = BipartiteWeights::new(Matrix::filled(2, 3, 1.0)).unwrap();
        assert!((biclique_density(&w, &[0, 1], &[0, 1, 2]).unwrap() - 6f64.sqrt()).abs() < 1e-15);

        let mut rnd = lcg(5);
        let w = BipartiteWeights::new(Matrix::from_fn(3, 4, |_, _| rnd())).unwrap();
        assert_eq!(biclique_density(&w, &[2], &[3]).unwrap(), w.get(2, 3));
        let sum = w.get(0, 1) + w.get(0, 2) + w.get(1, 1) + w.get(1, 2);
        assert!((biclique_density(&w, &[0, 1], &[1, 2]).unwrap() - sum / 2.0).abs() < 1e-15);
        assert!(biclique_density(&w, &[], &[1]).is_err());
    }

    #[test]
    fn biclique_blocks_and_lift_trace() {
        let plan = BicliquePlan::from_sizes(&[2, 3], &[2, 3], 0, 0).unwrap();
        let (l, r) = plan.labels();
        let w = BipartiteWeights::new(Matrix::from_fn(5, 5, |u, v| if l[u] == r[v] { 1.0 } else { 0.0 })).unwrap();
        assert!((biclique_sum_density(&w, &plan).unwrap() - 5.0).abs() < 1e-12);

        let mut rnd = lcg(9);
        let w = BipartiteWeights::new(Matrix::from_fn(4, 5, |_, _| rnd())).unwrap();
        let plan = BicliquePlan::new(4, 5, vec![vec![0, 3], vec![1]], vec![vec![4], vec![0, 1, 2]]).unwrap();
        let half_trace = 0.5 * w.symmetrized().dot(&plan.lift());
        assert!((half_trace - biclique_sum_density(&w, &plan).unwrap()).abs() < 1e-12);
    }
}
