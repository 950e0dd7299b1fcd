//! Euclidean projections onto the PSD cone and onto the polyhedral part of
//! the feasible set.

use std::ops::Range;

use crate::error::Result;
use crate::linalg::DenseSymMatrix;
use crate::sdp::problem::SdpProblem;

/// Frobenius-nearest PSD matrix: clamp negative eigenvalues to zero.
pub fn project_psd(m: &DenseSymMatrix) -> Result<DenseSymMatrix> {
    Ok(project_psd_with_spectrum(m)?.0)
}

/// Like [`project_psd`], also returning the ascending spectrum of the input.
pub(crate) fn project_psd_with_spectrum(m: &DenseSymMatrix) -> Result<(DenseSymMatrix, Vec<f64>)> {
    let n = m.n();
    let eig = m.eigen()?;
    let positive = eig.values.iter().filter(|&&v| v > 0.0).count();
    if positive == n {
        return Ok((m.clone(), eig.values));
    }
    // Sum over whichever side of the spectrum is smaller.
    let (terms, mut out): (Vec<usize>, Vec<f64>) = if positive <= n - positive {
        ((n - positive..n).collect(), vec![0.0; n * n])
    } else {
        ((0..n - positive).collect(), m.as_slice().to_vec())
    };
    let v = &eig.vectors;
    for &l in &terms {
        let lambda = eig.values[l];
        let sign = if lambda > 0.0 { 1.0 } else { -1.0 };
        let coef = sign * lambda;
        let col: Vec<f64> = (0..n).map(|i| v[(i, l)]).collect();
        for i in 0..n {
            let a = coef * col[i];
            if a == 0.0 {
                continue;
            }
            let row = &mut out[i * n..(i + 1) * n];
            for j in i..n {
                row[j] += a * col[j];
            }
        }
    }
    for i in 0..n {
        for j in 0..i {
            out[i * n + j] = out[j * n + i];
        }
    }
    Ok((DenseSymMatrix::from_symmetric_unchecked(n, out), eig.values))
}

/// Inner tolerance and cycle cap of the Dykstra iteration.
pub const DYKSTRA_TOL: f64 = 1e-10;
pub const DYKSTRA_MAX_CYCLES: usize = 1000;

/// Projection onto `{X ≥ 0} ∩ {Tr X_BB = k} ∩ {X_BB e ≤ e} ∩ {X = Xᵀ}` by
/// cyclic Dykstra iteration, run to the default inner tolerance.
pub fn project_polyhedral(m: &DenseSymMatrix, problem: &SdpProblem) -> DenseSymMatrix {
    PolyhedralProjector::new(problem).project(m, DYKSTRA_TOL, DYKSTRA_MAX_CYCLES).0
}

/// Dykstra iteration whose correction terms persist between calls, so that a
/// sequence of nearby inputs (as inside the solver) reuses earlier work.
///
/// The corrections are the dual variables of the nonnegativity and row-sum
/// sets; the two affine sets need none. Keeping them is equivalent to
/// restarting the dual block-coordinate ascent from a feasible dual point.
#[derive(Clone, Debug)]
pub struct PolyhedralProjector {
    n: usize,
    k: f64,
    blocks: Vec<Range<usize>>,
    corr_rows: Vec<f64>,
    corr_clamp: Vec<f64>,
}

impl PolyhedralProjector {
    pub fn new(problem: &SdpProblem) -> Self {
        let n = problem.dim();
        Self {
            n,
            k: problem.k() as f64,
            blocks: problem.blocks().to_vec(),
            corr_rows: vec![0.0; n * n],
            corr_clamp: vec![0.0; n * n],
        }
    }

    pub fn reset(&mut self) {
        self.corr_rows.iter_mut().for_each(|x| *x = 0.0);
        self.corr_clamp.iter_mut().for_each(|x| *x = 0.0);
    }

    /// Projects `m`; returns the result and the number of cycles used.
    pub fn project(&mut self, m: &DenseSymMatrix, tol: f64, max_cycles: usize) -> (DenseSymMatrix, usize) {
        let n = self.n;
        assert_eq!(m.n(), n, "dimension mismatch");
        let mut x: Vec<f64> = m
            .as_slice()
            .iter()
            .zip(&self.corr_rows)
            .zip(&self.corr_clamp)
            .map(|((a, b), c)| a - b - c)
            .collect();
        let mut prev = x.clone();
        let mut cycles = 0;
        while cycles < max_cycles {
            cycles += 1;
            self.trace_step(&mut x);
            self.row_step(&mut x);
            self.clamp_step(&mut x);
            symmetrize(&mut x, n);
            let change = x.iter().zip(&prev).fold(0.0f64, |acc, (a, b)| acc.max((a - b).abs()));
            if change <= tol {
                break;
            }
            prev.copy_from_slice(&x);
        }
        (DenseSymMatrix::from_symmetric_unchecked(n, x), cycles)
    }

    fn trace_step(&self, x: &mut [f64]) {
        let n = self.n;
        for b in &self.blocks {
            let t: f64 = b.clone().map(|i| x[i * n + i]).sum();
            let shift = (self.k - t) / b.len() as f64;
            for i in b.clone() {
                x[i * n + i] += shift;
            }
        }
    }

    fn row_step(&mut self, x: &mut [f64]) {
        let n = self.n;
        for b in &self.blocks {
            let width = b.len() as f64;
            for i in b.clone() {
                let lo = i * n + b.start;
                let hi = i * n + b.end;
                let row = &mut x[lo..hi];
                let corr = &mut self.corr_rows[lo..hi];
                let mut sum = 0.0;
                for (r, c) in row.iter_mut().zip(corr.iter()) {
                    *r += c;
                    sum += *r;
                }
                let excess = (sum - 1.0).max(0.0) / width;
                for (r, c) in row.iter_mut().zip(corr.iter_mut()) {
                    *c = excess;
                    *r -= excess;
                }
            }
        }
    }

    fn clamp_step(&mut self, x: &mut [f64]) {
        for (r, c) in x.iter_mut().zip(self.corr_clamp.iter_mut()) {
            let y = *r + *c;
            if y < 0.0 {
                *r = 0.0;
                *c = y;
            } else {
                *r = y;
                *c = 0.0;
            }
        }
    }
}

fn symmetrize(x: &mut [f64], n: usize) {
    for i in 0..n {
        for j in (i + 1)..n {
            let v = 0.5 * (x[i * n + j] + x[j * n + i]);
            x[i * n + j] = v;
            x[j * n + i] = v;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{CliquePlan, Partition, SymmetricWeights};
    use crate::sdp::problem::{assemble_clique_sdp, linear_residuals};

    fn clique_problem(n: usize, k: usize) -> SdpProblem {
        assemble_clique_sdp(&SymmetricWeights::new(DenseSymMatrix::zeros(n)).unwrap(), k).unwrap()
    }

    #[test]
    fn psd_examples() {
        let d = DenseSymMatrix::from_diagonal(&[1.0, -2.0]);
        let p = project_psd(&d).unwrap();
        assert!(p.sub(&DenseSymMatrix::from_diagonal(&[1.0, 0.0])).max_abs() < 1e-15);
        let lift = CliquePlan::from_sizes(&[2, 3], 1).unwrap().lift();
        assert!(project_psd(&lift).unwrap().sub(&lift).max_abs() < 1e-12);
    }

    #[test]
    fn polyhedral_keeps_feasible_points() {
        let p = clique_problem(6, 2);
        let lift = CliquePlan::from_sizes(&[2, 3], 1).unwrap().lift();
        assert!(project_polyhedral(&lift, &p).sub(&lift).max_abs() < 1e-9);
    }

    #[test]
    fn row_halfspace_example() {
        // n = 2, k = 1: the all-ones matrix lands on 0.5 everywhere.
        let p = clique_problem(2, 1);
        let out = project_polyhedral(&DenseSymMatrix::from_fn(2, |_, _| 1.0), &p);
        assert!(out.sub(&DenseSymMatrix::from_fn(2, |_, _| 0.5)).max_abs() < 1e-9);
    }

    #[test]
    fn output_is_feasible() {
        let p = clique_problem(5, 2);
        let m = DenseSymMatrix::from_fn(5, |i, j| ((i * 3 + j * 7) % 5) as f64 * 0.4 - 0.6);
        let out = project_polyhedral(&m, &p);
        let r = linear_residuals(&out, &p).unwrap();
        assert!(r.max() < 1e-8, "{r:?}");
    }

    #[test]
    fn warm_start_matches_cold_start() {
        let p = clique_problem(6, 2);
        let a = DenseSymMatrix::from_fn(6, |i, j| ((i * 5 + j * 3) % 7) as f64 * 0.2 - 0.3);
        let b = a.add(&DenseSymMatrix::from_fn(6, |i, j| 0.01 * (i as f64 - j as f64).abs()));
        let mut warm = PolyhedralProjector::new(&p);
        warm.project(&a, 1e-13, 100_000);
        let (wb, _) = warm.project(&b, 1e-13, 100_000);
        let cold = PolyhedralProjector::new(&p).project(&b, 1e-13, 100_000).0;
        assert!(wb.sub(&cold).max_abs() < 1e-8);
    }
}
