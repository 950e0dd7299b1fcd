//! The two relaxations as data: a cost matrix, a trace budget and the index
//! blocks on which the trace and row-sum constraints act.

use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{BipartiteWeights, SymmetricWeights};
use crate::linalg::DenseSymMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    Clique,
    Biclique,
}

/// `max ⟨C, X⟩` over `X ⪰ 0, X ≥ 0` with, on every index block `B`,
/// `Tr X_BB = k` and `X_BB e ≤ e`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SdpProblem {
    variant: Variant,
    k: usize,
    cost: DenseSymMatrix,
    blocks: Vec<Range<usize>>,
}

impl SdpProblem {
    pub fn variant(&self) -> Variant {
        self.variant
    }

    /// Side length of the matrix variable.
    pub fn dim(&self) -> usize {
        self.cost.n()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// `W` for cliques, `½ [[0, W], [Wᵀ, 0]]` for bicliques.
    pub fn cost(&self) -> &DenseSymMatrix {
        &self.cost
    }

    /// Index blocks carrying a trace and a row-sum constraint.
    pub fn blocks(&self) -> &[Range<usize>] {
        &self.blocks
    }

    /// Number of index blocks; always 1 or 2.
    pub fn n_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn objective(&self, x: &DenseSymMatrix) -> f64 {
        self.cost.dot(x)
    }

    /// `(k/|B|) I` on every block: a strictly feasible point.
    pub fn scaled_identity(&self) -> DenseSymMatrix {
        let mut diag = vec![0.0; self.dim()];
        for b in &self.blocks {
            let v = self.k as f64 / b.len() as f64;
            diag[b.clone()].iter_mut().for_each(|d| *d = v);
        }
        DenseSymMatrix::from_diagonal(&diag)
    }
}

/// `max Tr(WX)` s.t. `Xe ≤ e`, `Tr X = k`, `X ≥ 0`, `X ⪰ 0`.
pub fn assemble_clique_sdp(w: &SymmetricWeights, k: usize) -> Result<SdpProblem> {
    let n = w.n();
    if k == 0 || k > n {
        return Err(Error::Domain(format!("k = {k} must lie in 1..={n}")));
    }
    Ok(SdpProblem { variant: Variant::Clique, k, cost: w.matrix().clone(), blocks: vec![0..n] })
}

/// `max ½ Tr(W̃ Z)` with per-side trace and row-sum constraints on the
/// diagonal blocks only.
pub fn assemble_biclique_sdp(w: &BipartiteWeights, k: usize) -> Result<SdpProblem> {
    let (m, n) = (w.m(), w.n());
    if k == 0 || k > m.min(n) {
        return Err(Error::Domain(format!("k = {k} must lie in 1..={}", m.min(n))));
    }
    Ok(SdpProblem {
        variant: Variant::Biclique,
        k,
        cost: w.symmetrized().scaled(0.5),
        blocks: vec![0..m, m..m + n],
    })
}

/// Constraint violations of a candidate matrix.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Residuals {
    /// `max(0, -λ_min)`.
    pub psd: f64,
    /// `max(0, -min entry)`.
    pub nonneg: f64,
    /// `|Tr X_BB - k|`, worst block.
    pub trace: f64,
    /// `max(0, max row sum within a block - 1)`.
    pub rowsum: f64,
}

impl Residuals {
    pub fn max(&self) -> f64 {
        self.psd.max(self.nonneg).max(self.trace).max(self.rowsum)
    }
}

/// Measures all four residuals, including an eigendecomposition for the PSD part.
pub fn residuals(x: &DenseSymMatrix, problem: &SdpProblem) -> Result<Residuals> {
    let min_eig = x.min_eigenvalue()?;
    Ok(Residuals { psd: (-min_eig).max(0.0), ..linear_residuals(x, problem)? })
}

/// Residuals of the polyhedral constraints only (`psd` left at zero).
pub fn linear_residuals(x: &DenseSymMatrix, problem: &SdpProblem) -> Result<Residuals> {
    if x.n() != problem.dim() {
        return Err(Error::Shape(format!("matrix is {0}x{0}, problem has dimension {1}", x.n(), problem.dim())));
    }
    let nonneg = (-x.min_entry()).max(0.0);
    let mut trace = 0.0f64;
    let mut rowsum = 0.0f64;
    for b in &problem.blocks {
        let t: f64 = b.clone().map(|i| x[(i, i)]).sum();
        trace = trace.max((t - problem.k as f64).abs());
        for i in b.clone() {
            let s: f64 = x.row(i)[b.clone()].iter().sum();
            rowsum = rowsum.max(s - 1.0);
        }
    }
    Ok(Residuals { psd: 0.0, nonneg, trace, rowsum })
}
