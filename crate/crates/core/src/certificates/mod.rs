//! Explicit dual certificates for the lifted planted solution and their
//! verification.
//!
//! A certificate is a set of multipliers `(μ, λ, [φ,] η)` and the dual slack
//! `S` they induce through the gradient equation. The planted lift is optimal
//! when `S ⪰ 0`, the multipliers are nonnegative and complementary slackness
//! holds; uniqueness additionally needs `S` to be positive on the complement
//! of the lift's column space. Multipliers are set in closed form, and
//! verification measures every condition numerically instead of trusting it.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{DenseSymMatrix, Matrix};

pub mod biclique;
pub mod clique;

pub use biclique::{
    biclique_uniqueness_holds, build_biclique_certificate, build_biclique_certificate_with_means,
    verify_biclique_kkt, BicliqueCertificate,
};
pub use clique::{
    build_clique_certificate, build_clique_certificate_with_means, clique_uniqueness_holds, verify_clique_kkt,
    CliqueCertificate,
};

/// Default scale of `μ` relative to `γ r̂`.
pub const DEFAULT_EPSILON: f64 = 0.1;
/// Default share of the available slack given to `π₄`.
pub const DEFAULT_KAPPA: f64 = 0.9;
/// Default `ρ₁`.
pub const DEFAULT_RHO1: f64 = 1.0;

/// `(aI + uuᵀ)⁻¹ rhs = (rhs − u (uᵀrhs)/(a + uᵀu)) / a`.
pub fn smw_solve(a: f64, u: &[f64], rhs: &[f64]) -> Result<Vec<f64>> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::Domain(format!("smw_solve needs a > 0, got {a}")));
    }
    if u.len() != rhs.len() {
        return Err(Error::Shape(format!("u has length {}, rhs has length {}", u.len(), rhs.len())));
    }
    let uu: f64 = u.iter().map(|x| x * x).sum();
    let ur: f64 = u.iter().zip(rhs).map(|(x, y)| x * y).sum();
    let c = ur / (a + uu);
    Ok(rhs.iter().zip(u).map(|(r, x)| (r - c * x) / a).collect())
}

/// `(aI + eeᵀ)⁻¹ rhs` without allocating `e`.
pub(crate) fn smw_solve_ones(a: f64, rhs: &[f64]) -> Vec<f64> {
    let sum: f64 = rhs.iter().sum();
    let c = sum / (a + rhs.len() as f64);
    rhs.iter().map(|r| (r - c) / a).collect()
}

/// Outcome of checking the optimality conditions against the planted lift.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KktReport {
    /// Largest entrywise gap between `S` and its defining gradient equation.
    pub stationarity_resid: f64,
    /// `|λᵀ(X*e − e)|` (plus the `φ` term for bicliques).
    pub cs_rowsum_resid: f64,
    /// `|⟨X*, η⟩|`.
    pub cs_nonneg_resid: f64,
    /// `‖S X*‖_F / (1 + ‖S‖_F)`.
    pub cs_sdp_resid: f64,
    /// Smallest `λ` over block vertices.
    pub min_lambda: f64,
    pub min_phi: Option<f64>,
    /// Smallest `η` entry over off-diagonal block pairs (0 when there are none).
    pub min_eta: f64,
    pub min_eig_s: f64,
    pub s_spectral_norm: f64,
    pub s_frobenius_norm: f64,
    pub tol: f64,
    pub passed: bool,
    /// `‖S̃‖` (cliques) or `‖S₁‖` (bicliques).
    pub gate_norm: f64,
    /// What is left of `μ` (or `min(μ₁, μ₂)`) after the gate terms.
    pub gate_margin: f64,
    pub sufficiency_gate_holds: bool,
    /// `ĉ √(n_noise N)`; zero for cliques.
    pub gate_noise_term: f64,
    pub mu_min: f64,
}

impl KktReport {
    /// Residuals at most `tol`, multipliers at least `−tol`, and
    /// `λ_min(S) ≥ −tol (1 + ‖S‖₂)`.
    pub fn evaluate_passed(&self) -> bool {
        let t = self.tol;
        self.stationarity_resid <= t
            && self.cs_rowsum_resid <= t
            && self.cs_nonneg_resid <= t
            && self.cs_sdp_resid <= t
            && self.min_lambda >= -t
            && self.min_phi.map_or(true, |v| v >= -t)
            && self.min_eta >= -t
            && self.min_eig_s >= -t * (1.0 + self.s_spectral_norm)
    }
}

/// Multiplier constants in the norm bounds; their values are not known.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct NormBoundConstants {
    pub first: f64,
    pub second: f64,
}

impl Default for NormBoundConstants {
    fn default() -> Self {
        Self { first: 1.0, second: 1.0 }
    }
}

/// Spectral norms of the decomposition parts against the bound expression.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralNormReport {
    /// `(name, ‖part‖₂)` in decomposition order.
    pub parts: Vec<(String, f64)>,
    /// Norm of the decomposed matrix (`S̃` or `S₁`).
    pub total: f64,
    pub bound: f64,
    /// `total / bound`.
    pub ratio: f64,
    pub min_lambda: f64,
    pub min_phi: Option<f64>,
    /// Largest `‖y‖∞ + ‖z‖∞` over block pairs.
    pub max_yz_inf: f64,
}

impl SpectralNormReport {
    /// `total ≤ Σ parts`, up to rounding.
    pub fn triangle_inequality_holds(&self) -> bool {
        let sum: f64 = self.parts.iter().map(|(_, v)| v).sum();
        self.total <= sum * (1.0 + 1e-12) + 1e-12
    }
}

/// Scalar digest of a certificate and its verification.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateSummary {
    pub kind: String,
    /// `planted` or `recovered`.
    pub plan_source: String,
    pub gamma: f64,
    pub epsilon: f64,
    pub mu: Vec<f64>,
    pub alpha: f64,
    pub beta: f64,
    pub kkt: KktReport,
    pub uniqueness_holds: bool,
    pub norms: SpectralNormReport,
}

fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |a, x| a.max(x.abs()))
}

pub(crate) fn max_yz_inf<'a>(pairs: impl Iterator<Item = &'a (Vec<f64>, Vec<f64>)>) -> f64 {
    pairs.fold(0.0f64, |acc, (y, z)| acc.max(inf_norm(y) + inf_norm(z)))
}

/// Writes a matrix as headerless CSV, one row per line.
pub fn write_matrix_csv<W: Write>(m: &Matrix, out: W) -> Result<()> {
    let mut wtr = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    for i in 0..m.rows() {
        wtr.write_record(m.row(i).iter().map(|v| format!("{v}")))?;
    }
    wtr.flush()?;
    Ok(())
}

/// Entries of `S X*` combined into `‖S X*‖_F`, plus `‖S‖_F` and `‖S‖₂`.
pub(crate) fn slack_measurements(s: &DenseSymMatrix, lift: &DenseSymMatrix) -> Result<(f64, f64, f64, f64)> {
    let sx = s.matmul(lift).frobenius_norm();
    let eig = s.eigenvalues()?;
    let min_eig = eig.first().copied().unwrap_or(0.0);
    let spectral = eig.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    Ok((sx, s.frobenius_norm(), spectral, min_eig))
}
