//! Dense row-major matrices and the handful of kernels the rest of the crate
//! needs: products, norms and symmetric eigendecomposition.
//!
//! Eigendecompositions go through `faer`, built without its thread pool so
//! every result is reproducible bit for bit on a given machine.

use std::ops::{Index, IndexMut};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// General rectangular matrix stored row-major.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn filled(rows: usize, cols: usize, value: f64) -> Self {
        Self { rows, cols, data: vec![value; rows * cols] }
    }

    /// Wraps a row-major buffer; fails if the length does not match.
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Shape(format!(
                "expected {} entries for a {rows}x{cols} matrix, got {}",
                rows * cols,
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    #[inline]
    pub fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    /// Matrix product `self * rhs`.
    pub fn matmul(&self, rhs: &Matrix) -> Result<Matrix> {
        if self.cols != rhs.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            let out_row = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
            for (l, &a) in self.row(i).iter().enumerate() {
                if a == 0.0 {
                    continue;
                }
                for (o, &b) in out_row.iter_mut().zip(rhs.row(l)) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn matvec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.cols, "matvec dimension mismatch");
        (0..self.rows).map(|i| dot(self.row(i), v)).collect()
    }

    /// Row sums `M e`.
    pub fn row_sums(&self) -> Vec<f64> {
        (0..self.rows).map(|i| self.row(i).iter().sum()).collect()
    }

    /// Column sums `Mᵀ e`.
    pub fn col_sums(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.cols];
        for i in 0..self.rows {
            for (o, &x) in out.iter_mut().zip(self.row(i)) {
                *o += x;
            }
        }
        out
    }

    pub fn sum(&self) -> f64 {
        self.data.iter().sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn min_entry(&self) -> f64 {
        self.data.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Largest singular value, via the eigenvalues of the smaller Gram matrix.
    pub fn spectral_norm(&self) -> Result<f64> {
        if self.rows == 0 || self.cols == 0 {
            return Ok(0.0);
        }
        let gram = if self.rows <= self.cols {
            self.matmul(&self.transpose())?
        } else {
            self.transpose().matmul(self)?
        };
        let gram = DenseSymMatrix::from_matrix(gram)?;
        let top = gram.eigenvalues()?.last().copied().unwrap_or(0.0);
        Ok(top.max(0.0).sqrt())
    }

    /// Copies the sub-block with the given row and column index lists.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        Matrix::from_fn(rows.len(), cols.len(), |a, b| self[(rows[a], cols[b])])
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

/// Square symmetric matrix. Every constructor symmetrizes its input, so the
/// stored entries satisfy `a[i][j] == a[j][i]` exactly.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSym", into = "RawSym")]
pub struct DenseSymMatrix {
    n: usize,
    data: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct RawSym {
    n: usize,
    entries: Vec<f64>,
}

impl TryFrom<RawSym> for DenseSymMatrix {
    type Error = Error;
    fn try_from(raw: RawSym) -> Result<Self> {
        DenseSymMatrix::from_row_major(raw.n, raw.entries)
    }
}

impl From<DenseSymMatrix> for RawSym {
    fn from(m: DenseSymMatrix) -> Self {
        RawSym { n: m.n, entries: m.data }
    }
}

/// Eigenvalues in ascending order with matching unit eigenvectors stored as
/// the columns of `vectors`.
#[derive(Clone, Debug)]
pub struct SymEigen {
    pub values: Vec<f64>,
    pub vectors: Matrix,
}

impl DenseSymMatrix {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![0.0; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n);
        for (i, &d) in diag.iter().enumerate() {
            m.data[i * n + i] = d;
        }
        m
    }

    /// Builds from a row-major buffer, replacing it by `(A + Aᵀ)/2`.
    pub fn from_row_major(n: usize, data: Vec<f64>) -> Result<Self> {
        Self::from_matrix(Matrix::from_row_major(n, n, data)?)
    }

    /// Symmetrizes a square matrix.
    pub fn from_matrix(m: Matrix) -> Result<Self> {
        if m.rows != m.cols {
            return Err(Error::Shape(format!("expected a square matrix, got {}x{}", m.rows, m.cols)));
        }
        let mut out = Self { n: m.rows, data: m.data };
        out.symmetrize();
        Ok(out)
    }

    /// Builds from `f(i, j)`, evaluated on every entry and then symmetrized.
    pub fn from_fn(n: usize, f: impl FnMut(usize, usize) -> f64) -> Self {
        let m = Matrix::from_fn(n, n, f);
        let mut out = Self { n, data: m.data };
        out.symmetrize();
        out
    }

    /// Wraps a buffer the caller guarantees to be exactly symmetric.
    pub(crate) fn from_symmetric_unchecked(n: usize, data: Vec<f64>) -> Self {
        debug_assert_eq!(data.len(), n * n);
        Self { n, data }
    }

    fn symmetrize(&mut self) {
        let n = self.n;
        for i in 0..n {
            for j in (i + 1)..n {
                let v = 0.5 * (self.data[i * n + j] + self.data[j * n + i]);
                self.data[i * n + j] = v;
                self.data[j * n + i] = v;
            }
        }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    /// Sets `a[i][j]` and `a[j][i]` together.
    pub fn set_pair(&mut self, i: usize, j: usize, value: f64) {
        let n = self.n;
        self.data[i * n + j] = value;
        self.data[j * n + i] = value;
    }

    pub fn to_matrix(&self) -> Matrix {
        Matrix { rows: self.n, cols: self.n, data: self.data.clone() }
    }

    pub fn into_matrix(self) -> Matrix {
        Matrix { rows: self.n, cols: self.n, data: self.data }
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.data[i * self.n + i]).sum()
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.data[i * self.n + i]).collect()
    }

    pub fn row_sums(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.row(i).iter().sum()).collect()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn min_entry(&self) -> f64 {
        self.data.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Frobenius inner product `Tr(AB)`.
    pub fn dot(&self, other: &DenseSymMatrix) -> f64 {
        assert_eq!(self.n, other.n, "dimension mismatch");
        dot(&self.data, &other.data)
    }

    pub fn add(&self, other: &DenseSymMatrix) -> DenseSymMatrix {
        assert_eq!(self.n, other.n, "dimension mismatch");
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Self { n: self.n, data }
    }

    pub fn sub(&self, other: &DenseSymMatrix) -> DenseSymMatrix {
        assert_eq!(self.n, other.n, "dimension mismatch");
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Self { n: self.n, data }
    }

    pub fn scaled(&self, factor: f64) -> DenseSymMatrix {
        Self { n: self.n, data: self.data.iter().map(|x| x * factor).collect() }
    }

    pub fn matmul(&self, rhs: &DenseSymMatrix) -> Matrix {
        self.to_matrix().matmul(&rhs.to_matrix()).expect("square matrices of equal size")
    }

    pub fn matvec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.n, "matvec dimension mismatch");
        (0..self.n).map(|i| dot(self.row(i), v)).collect()
    }

    fn to_faer(&self) -> faer::Mat<f64> {
        let n = self.n;
        faer::Mat::from_fn(n, n, |i, j| self.data[i * n + j])
    }

    /// Full eigendecomposition, eigenvalues ascending.
    pub fn eigen(&self) -> Result<SymEigen> {
        if self.n == 0 {
            return Ok(SymEigen { values: vec![], vectors: Matrix::zeros(0, 0) });
        }
        let evd = self
            .to_faer()
            .self_adjoint_eigen(faer::Side::Lower)
            .map_err(|e| Error::Eigen(format!("{e:?}")))?;
        let s = evd.S().column_vector();
        let u = evd.U();
        let n = self.n;
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| s[a].total_cmp(&s[b]));
        let values = order.iter().map(|&i| s[i]).collect();
        let vectors = Matrix::from_fn(n, n, |i, j| u[(i, order[j])]);
        Ok(SymEigen { values, vectors })
    }

    /// Eigenvalues only, ascending.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        if self.n == 0 {
            return Ok(vec![]);
        }
        let mut vals = self
            .to_faer()
            .self_adjoint_eigenvalues(faer::Side::Lower)
            .map_err(|e| Error::Eigen(format!("{e:?}")))?;
        vals.sort_by(f64::total_cmp);
        Ok(vals)
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        Ok(self.eigenvalues()?.first().copied().unwrap_or(0.0))
    }

    /// Spectral norm `max |λ|`.
    pub fn spectral_norm(&self) -> Result<f64> {
        let vals = self.eigenvalues()?;
        Ok(vals.iter().fold(0.0f64, |m, v| m.max(v.abs())))
    }
}

impl Index<(usize, usize)> for DenseSymMatrix {
    type Output = f64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        debug_assert!(i < self.n && j < self.n);
        &self.data[i * self.n + j]
    }
}

#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Solves a small dense system by Gaussian elimination with partial
/// pivoting. Used as a reference oracle, not in hot paths.
pub fn dense_solve(a: &Matrix, b: &[f64]) -> Result<Vec<f64>> {
    let n = a.rows();
    if a.cols() != n || b.len() != n {
        return Err(Error::Shape("dense_solve needs a square system".into()));
    }
    let mut m = a.clone();
    let mut x = b.to_vec();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| m[(i, col)].abs().total_cmp(&m[(j, col)].abs()))
            .expect("nonempty range");
        if m[(pivot, col)].abs() < 1e-300 {
            return Err(Error::Domain("singular system".into()));
        }
        if pivot != col {
            for j in 0..n {
                let tmp = m[(col, j)];
                m[(col, j)] = m[(pivot, j)];
                m[(pivot, j)] = tmp;
            }
            x.swap(col, pivot);
        }
        for i in (col + 1)..n {
            let f = m[(i, col)] / m[(col, col)];
            if f == 0.0 {
                continue;
            }
            for j in col..n {
                m[(i, j)] -= f * m[(col, j)];
            }
            x[i] -= f * x[col];
        }
    }
    for i in (0..n).rev() {
        let s: f64 = ((i + 1)..n).map(|j| m[(i, j)] * x[j]).sum();
        x[i] = (x[i] - s) / m[(i, i)];
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constructor_symmetrizes() {
        let m = DenseSymMatrix::from_row_major(2, vec![1.0, 2.0, 4.0, 3.0]).unwrap();
        assert_eq!(m[(0, 1)], 3.0);
        assert_eq!(m[(1, 0)], 3.0);
    }

    #[test]
    fn eigen_reconstructs() {
        let m = DenseSymMatrix::from_fn(5, |i, j| ((i * 7 + j * 3) % 5) as f64 - 2.0);
        let e = m.eigen().unwrap();
        assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
        let back = DenseSymMatrix::from_fn(5, |i, j| {
            (0..5).map(|l| e.vectors[(i, l)] * e.values[l] * e.vectors[(j, l)]).sum()
        });
        assert!(back.sub(&m).max_abs() < 1e-12);
    }

    #[test]
    fn spectral_norm_of_rank_one() {
        // e eᵀ in 3x4 has a single singular value sqrt(12).
        let m = Matrix::filled(3, 4, 1.0);
        assert!((m.spectral_norm().unwrap() - 12f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn dense_solve_small() {
        let a = Matrix::from_row_major(2, 2, vec![2.0, 1.0, 1.0, 3.0]).unwrap();
        let x = dense_solve(&a, &[3.0, 5.0]).unwrap();
        assert!((x[0] - 0.8).abs() < 1e-14 && (x[1] - 1.4).abs() < 1e-14);
    }
}
