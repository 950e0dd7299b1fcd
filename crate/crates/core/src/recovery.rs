//! Rounding relaxation solutions back to partitions and deciding exact recovery.
//!
//! Rounding thresholds the support of the solution and reads blocks off the
//! connected components. On an exact lift every in-block entry is at least
//! `1/n` (cliques) or `1/max(m, n)` (bicliques, cross block), so the default
//! threshold sits at half of that.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::{Error as CrateError, Result};
use crate::graph::{BicliquePlan, CliquePlan, Partition};
use crate::linalg::DenseSymMatrix;

/// Why a matrix could not be rounded to a plan.
#[derive(Clone, Debug, PartialEq, Error, Serialize, Deserialize)]
pub enum RoundingFailure {
    #[error("found {found} components, expected {expected}")]
    ComponentCount { found: usize, expected: usize },
    #[error("component {component} has an entry {entry} below half the threshold")]
    NotDense { component: usize, entry: f64 },
    #[error("{side} vertex {vertex} carries mass but has no partner on the other side")]
    OneSided { side: String, vertex: usize },
    #[error("matrix has dimension {found}, expected {expected}")]
    Dimension { found: usize, expected: usize },
}

/// Default clique rounding threshold `1/(2n)`.
pub fn default_clique_threshold(n: usize) -> f64 {
    1.0 / (2.0 * n as f64)
}

/// Default biclique rounding threshold `1/(2 max(m, n))`.
pub fn default_biclique_threshold(m: usize, n: usize) -> f64 {
    1.0 / (2.0 * m.max(n) as f64)
}

fn components(nodes: usize, mut neighbours: impl FnMut(usize, &mut Vec<usize>)) -> Vec<Vec<usize>> {
    let mut seen = vec![false; nodes];
    let mut out = Vec::new();
    let mut scratch = Vec::new();
    for start in 0..nodes {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut comp = vec![start];
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            scratch.clear();
            neighbours(v, &mut scratch);
            for &w in &scratch {
                if !seen[w] {
                    seen[w] = true;
                    comp.push(w);
                    stack.push(w);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// Reads `k` cliques off the support of `x` thresholded at `theta`
/// (default `1/(2n)`).
pub fn round_clique_solution(
    x: &DenseSymMatrix,
    k: usize,
    theta: Option<f64>,
) -> std::result::Result<CliquePlan, RoundingFailure> {
    let n = x.n();
    let theta = theta.unwrap_or_else(|| default_clique_threshold(n));
    let comps = components(n, |i, out| {
        out.extend((0..n).filter(|&j| j != i && x[(i, j)] >= theta));
    });
    let cliques: Vec<Vec<usize>> =
        comps.into_iter().filter(|c| c.len() >= 2 || x[(c[0], c[0])] >= theta).collect();
    if cliques.len() != k {
        return Err(RoundingFailure::ComponentCount { found: cliques.len(), expected: k });
    }
    for (q, c) in cliques.iter().enumerate() {
        for &i in c {
            for &j in c {
                if x[(i, j)] < theta / 2.0 {
                    return Err(RoundingFailure::NotDense { component: q, entry: x[(i, j)] });
                }
            }
        }
    }
    CliquePlan::new(n, cliques).map_err(|_| RoundingFailure::ComponentCount { found: 0, expected: k })
}

/// Reads `k` bicliques off the `(U, V)` block of `z` thresholded at `theta`
/// (default `1/(2 max(m, n))`).
pub fn round_biclique_solution(
    z: &DenseSymMatrix,
    m: usize,
    n: usize,
    k: usize,
    theta: Option<f64>,
) -> std::result::Result<BicliquePlan, RoundingFailure> {
    if z.n() != m + n {
        return Err(RoundingFailure::Dimension { found: z.n(), expected: m + n });
    }
    let theta = theta.unwrap_or_else(|| default_biclique_threshold(m, n));
    // Nodes 0..m are U, m..m+n are V; only cross edges count.
    let comps = components(m + n, |a, out| {
        let others = if a < m { m..m + n } else { 0..m };
        out.extend(others.filter(|&b| z[(a, b)] >= theta));
    });
    let mut left_blocks = Vec::new();
    let mut right_blocks = Vec::new();
    for c in comps {
        if c.len() == 1 {
            let a = c[0];
            if z[(a, a)] >= theta {
                let (side, vertex) = if a < m { ("left", a) } else { ("right", a - m) };
                return Err(RoundingFailure::OneSided { side: side.into(), vertex });
            }
            continue;
        }
        let (us, vs): (Vec<usize>, Vec<usize>) = c.iter().partition(|&&a| a < m);
        left_blocks.push(us);
        right_blocks.push(vs.into_iter().map(|v| v - m).collect::<Vec<_>>());
    }
    if left_blocks.len() != k {
        return Err(RoundingFailure::ComponentCount { found: left_blocks.len(), expected: k });
    }
    for (q, (us, vs)) in left_blocks.iter().zip(&right_blocks).enumerate() {
        for &u in us {
            for &v in vs {
                if z[(u, m + v)] < theta / 2.0 {
                    return Err(RoundingFailure::NotDense { component: q, entry: z[(u, m + v)] });
                }
            }
        }
    }
    BicliquePlan::new(m, n, left_blocks, right_blocks)
        .map_err(|_| RoundingFailure::ComponentCount { found: 0, expected: k })
}

/// Equality as unlabeled families of blocks with equal noise sets.
pub fn partitions_equal<P: Partition + PartialEq>(a: &P, b: &P) -> Result<bool> {
    if !a.same_universe(b) {
        return Err(CrateError::Shape("plans live on different vertex sets".into()));
    }
    Ok(a.canonical() == b.canonical())
}

/// `‖x − lift(plan)‖_∞ ≤ tol`.
pub fn is_lift_of<P: Partition>(x: &DenseSymMatrix, plan: &P, tol: f64) -> bool {
    x.n() == plan.lift_dim() && x.sub(&plan.lift()).max_abs() <= tol
}

/// Outcome of rounding one solution against a known ground truth.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RecoveryReport<P> {
    pub recovered: Option<P>,
    pub exact: bool,
    /// Largest entry outside the support of the true lift.
    pub max_offplan_entry: f64,
    /// Smallest entry on the support of the true lift.
    pub min_inplan_entry: f64,
    pub rounding_threshold: f64,
    pub failure: Option<RoundingFailure>,
}

fn support_extremes(x: &DenseSymMatrix, truth_lift: &DenseSymMatrix) -> (f64, f64) {
    let mut off = 0.0f64;
    let mut on = f64::INFINITY;
    for (a, t) in x.as_slice().iter().zip(truth_lift.as_slice()) {
        if *t > 0.0 {
            on = on.min(*a);
        } else {
            off = off.max(*a);
        }
    }
    (off, on)
}

/// Rounds `x` and compares with `truth`.
pub fn clique_recovery_report(x: &DenseSymMatrix, truth: &CliquePlan, theta: Option<f64>) -> RecoveryReport<CliquePlan> {
    let theta = theta.unwrap_or_else(|| default_clique_threshold(x.n()));
    let (max_off, min_on) = support_extremes(x, &truth.lift());
    let rounded = round_clique_solution(x, truth.cliques().len(), Some(theta));
    let exact = matches!(&rounded, Ok(p) if partitions_equal(p, truth).unwrap_or(false));
    let (recovered, failure) = match rounded {
        Ok(p) => (Some(p), None),
        Err(f) => (None, Some(f)),
    };
    RecoveryReport { recovered, exact, max_offplan_entry: max_off, min_inplan_entry: min_on, rounding_threshold: theta, failure }
}

/// Rounds `z` and compares with `truth`.
pub fn biclique_recovery_report(
    z: &DenseSymMatrix,
    truth: &BicliquePlan,
    theta: Option<f64>,
) -> RecoveryReport<BicliquePlan> {
    let (m, n) = (truth.m(), truth.n());
    let theta = theta.unwrap_or_else(|| default_biclique_threshold(m, n));
    let (max_off, min_on) = support_extremes(z, &truth.lift());
    let rounded = round_biclique_solution(z, m, n, truth.left_blocks().len(), Some(theta));
    let exact = matches!(&rounded, Ok(p) if partitions_equal(p, truth).unwrap_or(false));
    let (recovered, failure) = match rounded {
        Ok(p) => (Some(p), None),
        Err(f) => (None, Some(f)),
    };
    RecoveryReport { recovered, exact, max_offplan_entry: max_off, min_inplan_entry: min_on, rounding_threshold: theta, failure }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perturbed(x: &DenseSymMatrix, size: f64) -> DenseSymMatrix {
        let mut s = 7u64;
        DenseSymMatrix::from_fn(x.n(), |i, j| {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let u = (s >> 11) as f64 / (1u64 << 53) as f64;
            x[(i, j)] + size * (2.0 * u - 1.0)
        })
    }

    #[test]
    fn clique_rounding_examples() {
        let plan = CliquePlan::new(7, vec![vec![0, 3, 5], vec![1, 2], vec![6]]).unwrap();
        let lift = plan.lift();
        assert_eq!(round_clique_solution(&lift, 3, None).unwrap(), plan);
        let noisy = round_clique_solution(&perturbed(&lift, 1e-7), 3, None).unwrap();
        assert!(partitions_equal(&noisy, &plan).unwrap());
        assert_eq!(
            round_clique_solution(&DenseSymMatrix::zeros(4), 1, None),
            Err(RoundingFailure::ComponentCount { found: 0, expected: 1 })
        );
        assert!(matches!(round_clique_solution(&lift, 2, None), Err(RoundingFailure::ComponentCount { .. })));
    }

    #[test]
    fn chained_support_is_not_dense() {
        // 0-1 and 1-2 strong, 0-2 absent: one component that is not a clique.
        let mut x = DenseSymMatrix::identity(3).scaled(0.5);
        x.set_pair(0, 1, 0.5);
        x.set_pair(1, 2, 0.5);
        assert!(matches!(round_clique_solution(&x, 1, None), Err(RoundingFailure::NotDense { .. })));
    }

    #[test]
    fn biclique_rounding_examples() {
        let plan = BicliquePlan::new(4, 3, vec![vec![0, 2], vec![3]], vec![vec![1], vec![0, 2]]).unwrap();
        let lift = plan.lift();
        assert_eq!(round_biclique_solution(&lift, 4, 3, 2, None).unwrap(), plan);
        let noisy = round_biclique_solution(&perturbed(&lift, 1e-7), 4, 3, 2, None).unwrap();
        assert!(partitions_equal(&noisy, &plan).unwrap());

        let mut z = lift.clone();
        for u in 0..4 {
            for v in 0..3 {
                z.set_pair(u, 4 + v, 0.0);
            }
        }
        assert!(round_biclique_solution(&z, 4, 3, 2, None).is_err());
        assert!(round_biclique_solution(&DenseSymMatrix::zeros(7), 4, 3, 2, None).is_err());
    }

    #[test]
    fn equality_ignores_labels() {
        let a = CliquePlan::new(5, vec![vec![0, 1], vec![2, 3]]).unwrap();
        let b = CliquePlan::new(5, vec![vec![3, 2], vec![1, 0]]).unwrap();
        let c = CliquePlan::new(5, vec![vec![0, 1, 2], vec![3]]).unwrap();
        assert!(partitions_equal(&a, &a).unwrap());
        assert!(partitions_equal(&a, &b).unwrap());
        assert!(!partitions_equal(&a, &c).unwrap());
        let d = CliquePlan::new(6, vec![vec![0, 1], vec![2, 3]]).unwrap();
        assert!(partitions_equal(&a, &d).is_err());
    }

    #[test]
    fn lift_check() {
        let plan = CliquePlan::from_sizes(&[2, 2], 1).unwrap();
        let lift = plan.lift();
        assert!(is_lift_of(&lift, &plan, 1e-12));
        let mut bumped = lift.clone();
        bumped.set_pair(0, 4, 2e-6);
        assert!(!is_lift_of(&bumped, &plan, 1e-6));
    }

    #[test]
    fn report_on_exact_lift() {
        let plan = CliquePlan::from_sizes(&[3, 3], 2).unwrap();
        let r = clique_recovery_report(&plan.lift(), &plan, None);
        assert!(r.exact);
        assert_eq!(r.max_offplan_entry, 0.0);
        assert!((r.min_inplan_entry - 1.0 / 3.0).abs() < 1e-15);
    }
}
