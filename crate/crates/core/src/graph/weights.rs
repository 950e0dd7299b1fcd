//! Edge-weight matrices of the complete graph and the complete bipartite graph.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{DenseSymMatrix, Matrix};

fn check_range(values: &[f64]) -> Result<()> {
    match values.iter().position(|x| !(0.0..=1.0).contains(x)) {
        Some(i) => Err(Error::Domain(format!("weight #{i} = {} lies outside [0, 1]", values[i]))),
        None => Ok(()),
    }
}

/// Symmetric weights on the complete graph with loops; entries in `[0, 1]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SymmetricWeights {
    w: DenseSymMatrix,
}

impl SymmetricWeights {
    pub fn new(w: DenseSymMatrix) -> Result<Self> {
        check_range(w.as_slice())?;
        Ok(Self { w })
    }

    /// Parses a row-major buffer, rejecting anything that is not exactly symmetric.
    pub fn from_row_major(n: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::Shape(format!("expected {} weights for n = {n}, got {}", n * n, data.len())));
        }
        check_range(&data)?;
        for i in 0..n {
            for j in (i + 1)..n {
                if data[i * n + j] != data[j * n + i] {
                    return Err(Error::Domain(format!("weights are not symmetric at ({i}, {j})")));
                }
            }
        }
        Ok(Self { w: DenseSymMatrix::from_symmetric_unchecked(n, data) })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.w.n()
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.w[(i, j)]
    }

    pub fn matrix(&self) -> &DenseSymMatrix {
        &self.w
    }
}

/// Weights on the complete bipartite graph `U × V`, an `m × n` matrix in `[0, 1]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BipartiteWeights {
    w: Matrix,
}

impl BipartiteWeights {
    pub fn new(w: Matrix) -> Result<Self> {
        check_range(w.as_slice())?;
        Ok(Self { w })
    }

    pub fn from_row_major(m: usize, n: usize, data: Vec<f64>) -> Result<Self> {
        Self::new(Matrix::from_row_major(m, n, data)?)
    }

    /// Left side size `|U|`.
    #[inline]
    pub fn m(&self) -> usize {
        self.w.rows()
    }

    /// Right side size `|V|`.
    #[inline]
    pub fn n(&self) -> usize {
        self.w.cols()
    }

    #[inline]
    pub fn get(&self, u: usize, v: usize) -> f64 {
        self.w[(u, v)]
    }

    pub fn matrix(&self) -> &Matrix {
        &self.w
    }

    /// The symmetric `(m+n)`-square matrix `[[0, W], [Wᵀ, 0]]`.
    pub fn symmetrized(&self) -> DenseSymMatrix {
        let (m, n) = (self.m(), self.n());
        let mut out = DenseSymMatrix::zeros(m + n);
        for u in 0..m {
            for v in 0..n {
                out.set_pair(u, m + v, self.w[(u, v)]);
            }
        }
        out
    }
}
