//! Exhaustive search for the densest k-disjoint-clique and biclique subgraphs.
//!
//! Blocks are unlabeled, so the search enumerates canonical labelings only:
//! block numbers appear in order of their smallest member. Among plans whose
//! values agree to within a relative 1e-12 the lexicographically smallest
//! labeling (noise = 0, blocks = 1..k) wins.

use crate::error::{Error, Result};
use crate::graph::plan::{BicliquePlan, CliquePlan};
use crate::graph::weights::{BipartiteWeights, SymmetricWeights};

/// Largest vertex count the clique oracle accepts by default.
pub const CLIQUE_ENUMERATION_CAP: usize = 13;
/// Largest `m + n` the biclique oracle accepts by default.
pub const BICLIQUE_ENUMERATION_CAP: usize = 12;

fn improves(value: f64, best: f64) -> bool {
    best == f64::NEG_INFINITY || value > best + 1e-12 * best.abs().max(1.0)
}

/// Densest k-disjoint-clique subgraph by enumeration, with the default cap.
pub fn brute_force_densest_kdc(w: &SymmetricWeights, k: usize) -> Result<(CliquePlan, f64)> {
    brute_force_densest_kdc_capped(w, k, CLIQUE_ENUMERATION_CAP)
}

pub fn brute_force_densest_kdc_capped(w: &SymmetricWeights, k: usize, cap: usize) -> Result<(CliquePlan, f64)> {
    let n = w.n();
    if n > cap {
        return Err(Error::EnumerationCap { size: n, cap });
    }
    if k == 0 || k > n {
        return Err(Error::Domain(format!("k = {k} must lie in 1..={n}")));
    }
    let mut search = CliqueSearch {
        w,
        k,
        labels: vec![0; n],
        members: vec![Vec::new(); k + 1],
        mass: vec![0.0; k + 1],
        best_value: f64::NEG_INFINITY,
        best_labels: Vec::new(),
    };
    search.descend(0, 0);
    let labels: Vec<Option<usize>> =
        search.best_labels.iter().map(|&l| if l == 0 { None } else { Some(l - 1) }).collect();
    Ok((CliquePlan::from_labels(&labels, k)?, search.best_value))
}

struct CliqueSearch<'a> {
    w: &'a SymmetricWeights,
    k: usize,
    labels: Vec<usize>,
    members: Vec<Vec<usize>>,
    // vᵀWv for each open clique (index 0 unused: noise)
    mass: Vec<f64>,
    best_value: f64,
    best_labels: Vec<usize>,
}

impl CliqueSearch<'_> {
    fn descend(&mut self, vertex: usize, opened: usize) {
        let n = self.labels.len();
        if vertex == n {
            if opened == self.k {
                let value: f64 = (1..=self.k).map(|q| self.mass[q] / self.members[q].len() as f64).sum();
                if improves(value, self.best_value) {
                    self.best_value = value;
                    self.best_labels = self.labels.clone();
                }
            }
            return;
        }
        // Every unopened clique still needs a vertex.
        if n - vertex < self.k - opened {
            return;
        }
        let top = if opened < self.k { opened + 1 } else { opened };
        for label in 0..=top {
            self.labels[vertex] = label;
            if label == 0 {
                self.descend(vertex + 1, opened);
                continue;
            }
            let gain = self.w.get(vertex, vertex)
                + 2.0 * self.members[label].iter().map(|&j| self.w.get(vertex, j)).sum::<f64>();
            let saved = self.mass[label];
            self.mass[label] += gain;
            self.members[label].push(vertex);
            self.descend(vertex + 1, opened.max(label));
            self.members[label].pop();
            self.mass[label] = saved;
        }
    }
}

/// Densest k-disjoint-biclique subgraph by enumeration, with the default cap.
pub fn brute_force_densest_kdb(w: &BipartiteWeights, k: usize) -> Result<(BicliquePlan, f64)> {
    brute_force_densest_kdb_capped(w, k, BICLIQUE_ENUMERATION_CAP)
}

pub fn brute_force_densest_kdb_capped(w: &BipartiteWeights, k: usize, cap: usize) -> Result<(BicliquePlan, f64)> {
    let (m, n) = (w.m(), w.n());
    if m + n > cap {
        return Err(Error::EnumerationCap { size: m + n, cap });
    }
    if k == 0 || k > m.min(n) {
        return Err(Error::Domain(format!("k = {k} must lie in 1..={}", m.min(n))));
    }
    let mut search = BicliqueSearch {
        w,
        k,
        left: vec![0; m],
        left_sizes: vec![0; k + 1],
        right: vec![0; n],
        right_sizes: vec![0; k + 1],
        column_mass: vec![vec![0.0; k + 1]; n],
        mass: vec![0.0; k + 1],
        best_value: f64::NEG_INFINITY,
        best: (Vec::new(), Vec::new()),
    };
    search.descend_left(0, 0);
    let to_opt = |l: &Vec<usize>| -> Vec<Option<usize>> {
        l.iter().map(|&x| if x == 0 { None } else { Some(x - 1) }).collect()
    };
    let (left, right) = (to_opt(&search.best.0), to_opt(&search.best.1));
    let mut left_blocks = vec![Vec::new(); k];
    let mut right_blocks = vec![Vec::new(); k];
    for (u, l) in left.iter().enumerate() {
        if let Some(q) = l {
            left_blocks[*q].push(u);
        }
    }
    for (v, l) in right.iter().enumerate() {
        if let Some(q) = l {
            right_blocks[*q].push(v);
        }
    }
    Ok((BicliquePlan::new(m, n, left_blocks, right_blocks)?, search.best_value))
}

struct BicliqueSearch<'a> {
    w: &'a BipartiteWeights,
    k: usize,
    left: Vec<usize>,
    left_sizes: Vec<usize>,
    right: Vec<usize>,
    right_sizes: Vec<usize>,
    // Σ_{u ∈ U_q} W_uv for each right vertex v and label q
    column_mass: Vec<Vec<f64>>,
    // Σ_{u ∈ U_q, v ∈ V_q} W_uv
    mass: Vec<f64>,
    best_value: f64,
    best: (Vec<usize>, Vec<usize>),
}

impl BicliqueSearch<'_> {
    fn descend_left(&mut self, vertex: usize, opened: usize) {
        let m = self.left.len();
        if vertex == m {
            if opened == self.k {
                for v in 0..self.right.len() {
                    for q in 1..=self.k {
                        self.column_mass[v][q] = 0.0;
                    }
                    for u in 0..m {
                        let l = self.left[u];
                        if l > 0 {
                            self.column_mass[v][l] += self.w.get(u, v);
                        }
                    }
                }
                self.descend_right(0);
            }
            return;
        }
        if m - vertex < self.k - opened {
            return;
        }
        let top = if opened < self.k { opened + 1 } else { opened };
        for label in 0..=top {
            self.left[vertex] = label;
            self.left_sizes[label] += 1;
            self.descend_left(vertex + 1, opened.max(label));
            self.left_sizes[label] -= 1;
        }
    }

    fn descend_right(&mut self, vertex: usize) {
        let n = self.right.len();
        let missing = (1..=self.k).filter(|&q| self.right_sizes[q] == 0).count();
        if n - vertex < missing {
            return;
        }
        if vertex == n {
            let value: f64 = (1..=self.k)
                .map(|q| self.mass[q] / ((self.left_sizes[q] * self.right_sizes[q]) as f64).sqrt())
                .sum();
            if improves(value, self.best_value) {
                self.best_value = value;
                self.best = (self.left.clone(), self.right.clone());
            }
            return;
        }
        for label in 0..=self.k {
            self.right[vertex] = label;
            self.right_sizes[label] += 1;
            let gain = if label > 0 { self.column_mass[vertex][label] } else { 0.0 };
            let saved = self.mass[label];
            self.mass[label] += gain;
            self.descend_right(vertex + 1);
            self.mass[label] = saved;
            self.right_sizes[label] -= 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::density::{biclique_sum_density, clique_sum_density};
    use crate::graph::plan::Partition;
    use crate::linalg::{DenseSymMatrix, Matrix};

    #[test]
    fn block_diagonal_clique_oracle() {
        let truth = CliquePlan::from_sizes(&[2, 3], 0).unwrap();
        let l = truth.labels();
        let w = SymmetricWeights::new(DenseSymMatrix::from_fn(5, |i, j| if l[i] == l[j] { 1.0 } else { 0.0 })).unwrap();
        let (plan, value) = brute_force_densest_kdc(&w, 2).unwrap();
        assert_eq!(plan.canonical(), truth.canonical());
        assert!((value - 5.0).abs() < 1e-12);
    }

    #[test]
    fn all_ones_single_clique_takes_everything() {
        let w = SymmetricWeights::new(DenseSymMatrix::from_fn(4, |_, _| 1.0)).unwrap();
        let (plan, value) = brute_force_densest_kdc(&w, 1).unwrap();
        assert_eq!(plan.cliques()[0], vec![0, 1, 2, 3]);
        assert_eq!(value, 4.0);
    }

    #[test]
    fn cap_is_enforced() {
        let w = SymmetricWeights::new(DenseSymMatrix::zeros(14)).unwrap();
        assert!(matches!(brute_force_densest_kdc(&w, 2), Err(Error::EnumerationCap { size: 14, cap: 13 })));
        let w = BipartiteWeights::new(Matrix::zeros(7, 6)).unwrap();
        assert!(matches!(brute_force_densest_kdb(&w, 2), Err(Error::EnumerationCap { .. })));
    }

    #[test]
    fn zero_weights_tie_break_is_canonical() {
        // Every plan scores zero; the smallest labeling is (noise, noise, clique).
        let w = SymmetricWeights::new(DenseSymMatrix::zeros(3)).unwrap();
        let (plan, value) = brute_force_densest_kdc(&w, 1).unwrap();
        assert_eq!(value, 0.0);
        assert_eq!(plan.cliques()[0], vec![2]);
    }

    #[test]
    fn biclique_blocks() {
        let truth = BicliquePlan::from_sizes(&[2, 1], &[2, 1], 0, 0).unwrap();
        let (l, r) = truth.labels();
        let w = BipartiteWeights::new(Matrix::from_fn(3, 3, |u, v| if l[u] == r[v] { 1.0 } else { 0.0 })).unwrap();
        let (plan, value) = brute_force_densest_kdb(&w, 2).unwrap();
        assert_eq!(plan.canonical(), truth.canonical());
        assert!((value - 3.0).abs() < 1e-12);
        assert!((biclique_sum_density(&w, &plan).unwrap() - value).abs() < 1e-12);

        let w = BipartiteWeights::new(Matrix::filled(2, 3, 1.0)).unwrap();
        let (plan, value) = brute_force_densest_kdb(&w, 1).unwrap();
        assert_eq!(plan.left_blocks()[0].len(), 2);
        assert_eq!(plan.right_blocks()[0].len(), 3);
        assert!((value - 6f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn reported_value_matches_density() {
        let w = SymmetricWeights::new(DenseSymMatrix::from_fn(7, |i, j| ((i * 5 + j * 5 + i * j) % 7) as f64 / 7.0))
            .unwrap();
        let (plan, value) = brute_force_densest_kdc(&w, 2).unwrap();
        assert!((clique_sum_density(&w, &plan).unwrap() - value).abs() < 1e-12);
    }
}
