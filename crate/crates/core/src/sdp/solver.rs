//! Consensus ADMM between the PSD cone and the polyhedral set.
//!
//! With scaled dual `U` and penalty `ρ` each iteration is
//!
//! ```text
//! X ← Π_psd(Y − U + C/ρ)
//! Y ← Π_poly(X + U)
//! U ← U + X − Y
//! ```
//!
//! The returned matrix is the polyhedral iterate `Y`, so nonnegativity and
//! symmetry hold exactly and its PSD violation is at most `‖X − Y‖`.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::DenseSymMatrix;
use crate::sdp::problem::{residuals, Residuals, SdpProblem};
use crate::sdp::projection::{project_psd_with_spectrum, PolyhedralProjector, DYKSTRA_MAX_CYCLES, DYKSTRA_TOL};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverOptions {
    /// Bound on every reported residual at convergence.
    pub tol_feas: f64,
    /// Relative objective change allowed over the stationarity window.
    pub tol_obj_rel: f64,
    pub max_iter: usize,
    /// Initial ADMM penalty in units of `‖Ĉ‖_F / √k`, with `Ĉ` the cost
    /// scaled to unit max-abs entry.
    pub penalty: f64,
    /// Rebalance `ρ` every `window` iterations from the residual ratio.
    pub adaptive_penalty: bool,
    /// Length of the objective stationarity window.
    pub window: usize,
    /// Record one trace row per iteration.
    pub record_trace: bool,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            tol_feas: 1e-6,
            tol_obj_rel: 1e-6,
            max_iter: 50_000,
            penalty: 1.0,
            adaptive_penalty: true,
            window: 100,
            record_trace: false,
        }
    }
}

impl SolverOptions {
    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::Domain(format!("{name} = {v} must be positive")))
            }
        };
        positive("tol_feas", self.tol_feas)?;
        positive("tol_obj_rel", self.tol_obj_rel)?;
        positive("penalty", self.penalty)?;
        if self.max_iter == 0 || self.window == 0 {
            return Err(Error::Domain("max_iter and window must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolverStatus {
    Converged,
    IterLimit,
}

/// One row of the optional solver trace.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub iteration: usize,
    pub objective: f64,
    /// `‖X − Y‖_F`.
    pub primal_residual: f64,
    /// `ρ ‖Y − Y_prev‖_F` in units of the normalized cost.
    pub dual_residual: f64,
    pub penalty: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverResult {
    pub x: DenseSymMatrix,
    pub objective: f64,
    pub residual_psd: f64,
    pub residual_nonneg: f64,
    pub residual_trace: f64,
    pub residual_rowsum: f64,
    pub iterations: usize,
    pub status: SolverStatus,
    /// Largest eigenvalue of `x`; feasible points of the clique relaxation have norm at most 1.
    pub spectral_norm: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub trace: Vec<TraceRow>,
}

impl SolverResult {
    pub fn residuals(&self) -> Residuals {
        Residuals {
            psd: self.residual_psd,
            nonneg: self.residual_nonneg,
            trace: self.residual_trace,
            rowsum: self.residual_rowsum,
        }
    }

    /// Writes the trace as CSV with a header row.
    pub fn write_trace_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(out);
        for row in &self.trace {
            wtr.serialize(row)?;
        }
        wtr.flush()?;
        Ok(())
    }
}

fn frob_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

fn finish(
    problem: &SdpProblem,
    y: DenseSymMatrix,
    iterations: usize,
    status: SolverStatus,
    trace: Vec<TraceRow>,
) -> Result<SolverResult> {
    let res = residuals(&y, problem)?;
    let spectral_norm = y.eigenvalues()?.last().copied().unwrap_or(0.0);
    Ok(SolverResult {
        objective: problem.objective(&y),
        residual_psd: res.psd,
        residual_nonneg: res.nonneg,
        residual_trace: res.trace,
        residual_rowsum: res.rowsum,
        x: y,
        iterations,
        status,
        spectral_norm,
        trace,
    })
}

/// Solves the relaxation. Deterministic for fixed `(problem, opts)`.
///
/// Returns `IterLimit` (not an error) when the budget runs out; the result
/// then holds the iterate with the smallest primal/dual residual seen.
pub fn solve(problem: &SdpProblem, opts: &SolverOptions) -> Result<SolverResult> {
    opts.validate()?;
    let n = problem.dim();
    let scale = problem.cost().max_abs().max(f64::MIN_POSITIVE);
    let cost = problem.cost().scaled(1.0 / scale);

    let reference = cost.frobenius_norm() / (problem.k() as f64).sqrt();
    let mut rho = opts.penalty * reference.max(1.0);
    let mut y = problem.scaled_identity();
    let mut u = vec![0.0; n * n];
    let mut projector = PolyhedralProjector::new(problem);
    let mut history: Vec<f64> = Vec::new();
    let mut trace = Vec::new();
    let mut best: Option<(f64, DenseSymMatrix)> = None;
    let mut inner_tol = 1e-7;
    let mut sum_r = 0.0;
    let mut sum_s = 0.0;

    for it in 1..=opts.max_iter {
        let v: Vec<f64> = y
            .as_slice()
            .iter()
            .zip(&u)
            .zip(cost.as_slice())
            .map(|((yy, uu), c)| yy - uu + c / rho)
            .collect();
        let (x, _) = project_psd_with_spectrum(&DenseSymMatrix::from_symmetric_unchecked(n, v))?;
        let w: Vec<f64> = x.as_slice().iter().zip(&u).map(|(a, b)| a + b).collect();
        let (y_next, _) =
            projector.project(&DenseSymMatrix::from_symmetric_unchecked(n, w), inner_tol, DYKSTRA_MAX_CYCLES / 5);
        for ((uu, a), b) in u.iter_mut().zip(x.as_slice()).zip(y_next.as_slice()) {
            *uu += a - b;
        }
        let r = frob_diff(x.as_slice(), y_next.as_slice());
        let s = rho * frob_diff(y_next.as_slice(), y.as_slice());
        y = y_next;
        inner_tol = (0.01 * r).clamp(DYKSTRA_TOL, 1e-7);

        let objective = problem.objective(&y);
        history.push(objective);
        if opts.record_trace {
            trace.push(TraceRow { iteration: it, objective, primal_residual: r, dual_residual: s, penalty: rho });
        }
        let merit = r.max(s);
        if best.as_ref().map_or(true, |(m, _)| merit < *m) {
            best = Some((merit, y.clone()));
        }

        sum_r += r;
        sum_s += s;
        if opts.adaptive_penalty && it % opts.window == 0 {
            let factor = if sum_r > 10.0 * sum_s {
                2.0
            } else if sum_s > 10.0 * sum_r {
                0.5
            } else {
                1.0
            };
            if factor != 1.0 {
                rho *= factor;
                u.iter_mut().for_each(|x| *x /= factor);
            }
            sum_r = 0.0;
            sum_s = 0.0;
        }

        if it > opts.window && r <= opts.tol_feas && s <= opts.tol_feas {
            let then = history[it - 1 - opts.window];
            if (objective - then).abs() <= opts.tol_obj_rel * objective.abs().max(1.0) {
                let polished = projector.project(&y, DYKSTRA_TOL, DYKSTRA_MAX_CYCLES).0;
                let res = residuals(&polished, problem)?;
                if res.max() <= opts.tol_feas {
                    return finish(problem, polished, it, SolverStatus::Converged, trace);
                }
            }
        }
    }
    let (_, best_y) = best.expect("at least one iteration");
    let polished = projector.project(&best_y, DYKSTRA_TOL, DYKSTRA_MAX_CYCLES).0;
    finish(problem, polished, opts.max_iter, SolverStatus::IterLimit, trace)
}
