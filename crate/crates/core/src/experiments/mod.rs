//! Monte-Carlo recovery trials, parameter sweeps and random-matrix norm suites.
//!
//! A trial samples a planted instance, solves its relaxation, rounds the
//! solution, compares it with the planted plan and builds the dual
//! certificate for the planted plan. Everything except the optional wall
//! time is a function of the cell parameters and the seed.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::certificates::{
    biclique_uniqueness_holds, build_biclique_certificate, build_clique_certificate, clique_uniqueness_holds,
    verify_biclique_kkt, verify_clique_kkt, KktReport, DEFAULT_EPSILON, DEFAULT_KAPPA, DEFAULT_RHO1,
};
use crate::error::{Error, Result};
use crate::graph::{BicliquePlan, CliquePlan};
use crate::planted::{
    check_biclique_guarantee, check_clique_guarantee, sample_planted_bicluster, sample_planted_cluster,
    DistributionSpec, GuaranteeParams, GuaranteeReport, PlantedBicliqueSpec, PlantedCliqueSpec,
};
use crate::recovery::{biclique_recovery_report, clique_recovery_report, RoundingFailure};
use crate::sdp::{assemble_biclique_sdp, assemble_clique_sdp, solve, SolverOptions, SolverResult, SolverStatus};

pub mod norms;
pub mod sweep;

pub use norms::{empirical_norm_suite, hoeffding_suite, HoeffdingReport, HoeffdingRow, MatrixShape, NormSuiteReport};
pub use sweep::{
    calibrate_guarantee_scale, read_records_csv, recovery_rates, run_sweep, worker_count, write_records_csv,
    CalibrationReport, CellRate, SweepSpec, WORKERS_ENV,
};

/// Version of the [`TrialRecord`] column layout.
pub const RECORD_SCHEMA_VERSION: u32 = 1;
/// Default tolerance for the certificate pass flag.
pub const DEFAULT_CERT_TOL: f64 = 1e-8;

/// SplitMix64 finalizer.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of trial `trial` in cell `cell`; independent of execution order.
pub fn trial_seed(base_seed: u64, cell: usize, trial: usize) -> u64 {
    splitmix64(splitmix64(splitmix64(base_seed) ^ cell as u64) ^ trial as u64)
}

/// Block layout of one sweep cell.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum CellShape {
    Clique {
        blocks: Vec<usize>,
        #[serde(default)]
        noise: usize,
    },
    Biclique {
        left_blocks: Vec<usize>,
        right_blocks: Vec<usize>,
        #[serde(default)]
        left_noise: usize,
        #[serde(default)]
        right_noise: usize,
    },
}

impl CellShape {
    pub fn kind(&self) -> &'static str {
        match self {
            CellShape::Clique { .. } => "clique",
            CellShape::Biclique { .. } => "biclique",
        }
    }

    pub fn k(&self) -> usize {
        match self {
            CellShape::Clique { blocks, .. } => blocks.len(),
            CellShape::Biclique { left_blocks, .. } => left_blocks.len(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            CellShape::Clique { blocks, noise } => CliquePlan::from_sizes(blocks, *noise).map(|_| ()),
            CellShape::Biclique { left_blocks, right_blocks, left_noise, right_noise } => {
                if left_blocks.len() != right_blocks.len() {
                    return Err(Error::InvalidPlan("left and right block lists differ in length".into()));
                }
                BicliquePlan::from_sizes(left_blocks, right_blocks, *left_noise, *right_noise).map(|_| ())
            }
        }
    }
}

/// Distribution family shared by `Ω₁` and `Ω₂`; the means come from the cell.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum DistributionFamily {
    Bernoulli,
    /// Uniform with half width `spread · min(mean, 1 − mean)`, `spread ∈ [0, 1]`.
    Uniform { spread: f64 },
}

impl DistributionFamily {
    pub fn with_mean(&self, mean: f64) -> Result<DistributionSpec> {
        match *self {
            DistributionFamily::Bernoulli => DistributionSpec::bernoulli(mean),
            DistributionFamily::Uniform { spread } => {
                if !(0.0..=1.0).contains(&spread) {
                    return Err(Error::Domain(format!("uniform spread {spread} outside [0, 1]")));
                }
                DistributionSpec::uniform(mean, spread * mean.min(1.0 - mean))
            }
        }
    }

    pub fn label(&self) -> String {
        match self {
            DistributionFamily::Bernoulli => "bernoulli".into(),
            DistributionFamily::Uniform { spread } => format!("uniform:{spread}"),
        }
    }
}

/// Parameters of one sweep cell.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub shape: CellShape,
    pub alpha: f64,
    pub beta: f64,
    pub distribution: DistributionFamily,
}

/// Settings shared by every trial of a sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TrialConfig {
    pub solver: SolverOptions,
    pub epsilon: f64,
    pub kappa: f64,
    pub rho1: f64,
    pub guarantee: GuaranteeParams,
    pub cert_tol: f64,
    /// Record wall time; off by default so repeated runs are byte-identical.
    pub record_timing: bool,
}

impl Default for TrialConfig {
    fn default() -> Self {
        Self {
            solver: SolverOptions::default(),
            epsilon: DEFAULT_EPSILON,
            kappa: DEFAULT_KAPPA,
            rho1: DEFAULT_RHO1,
            guarantee: GuaranteeParams::default(),
            cert_tol: DEFAULT_CERT_TOL,
            record_timing: false,
        }
    }
}

/// One row of a sweep CSV.
///
/// Optional columns are empty when the value does not apply: `m` and the
/// right-side fields for cliques, `min_phi` for cliques, and every
/// certificate measurement when the certificate was refused.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub schema_version: u32,
    pub cell: usize,
    pub trial: usize,
    pub seed: u64,
    pub kind: String,
    pub k: usize,
    /// Left side size (bicliques only).
    pub m: Option<usize>,
    /// Vertex count (cliques) or right side size (bicliques).
    pub n: usize,
    /// Block sizes joined with `;` (left blocks for bicliques).
    pub blocks: String,
    pub right_blocks: String,
    pub noise: usize,
    pub right_noise: Option<usize>,
    pub alpha: f64,
    pub beta: f64,
    pub distribution: String,
    pub gamma: f64,
    pub guarantee_lhs: f64,
    pub guarantee_rhs: f64,
    pub guarantee_holds: bool,
    pub tau_condition_holds: bool,
    /// Largest uniform scale of the bound constants (`c1..c3`, or `b1` with
    /// `b2 = 1`) at which the guarantee still holds; 0 when it never does.
    pub guarantee_scale_limit: f64,
    pub solver_status: SolverStatus,
    pub objective: f64,
    pub iterations: usize,
    pub wall_time_s: f64,
    pub residual_max: f64,
    pub exact: bool,
    pub rounding_failure: String,
    pub certificate_built: bool,
    pub certificate_passed: bool,
    pub certificate_error: String,
    pub stationarity_resid: Option<f64>,
    pub cs_rowsum_resid: Option<f64>,
    pub cs_nonneg_resid: Option<f64>,
    /// `‖S X*‖_F / (1 + ‖S‖_F)`.
    pub cs_sdp_resid: Option<f64>,
    pub min_lambda: Option<f64>,
    pub min_phi: Option<f64>,
    pub min_eta: Option<f64>,
    pub min_eig_s: Option<f64>,
    pub s_spectral_norm: Option<f64>,
    /// `‖S̃‖₂` (cliques) or `‖S₁‖₂` (bicliques).
    pub gate_norm: Option<f64>,
    pub gate_margin: Option<f64>,
    pub uniqueness_holds: bool,
}

fn join_sizes(sizes: &[usize]) -> String {
    sizes.iter().map(usize::to_string).collect::<Vec<_>>().join(";")
}

fn clique_scale_limit(report: &GuaranteeReport, n: usize, k: usize, r_noise: usize, r_min: usize) -> f64 {
    let unit = (n as f64).sqrt() + ((k * r_noise) as f64).sqrt() + r_noise as f64;
    if report.gamma <= 0.0 {
        return 0.0;
    }
    report.gamma * r_min as f64 / unit
}

fn biclique_scale_limit(report: &GuaranteeReport, beta: f64, plan: &BicliquePlan) -> f64 {
    let (m_noise, n_noise) = (plan.left_noise().len(), plan.right_noise().len());
    if report.gamma <= 0.0 || !report.tau_condition_holds {
        return 0.0;
    }
    let k = plan.left_blocks().len() as f64;
    let unit = (k.sqrt() + (n_noise as f64).sqrt() + 1.0) * (plan.n() as f64).sqrt();
    let room = report.gamma * plan.min_right() as f64 - beta * ((m_noise * n_noise) as f64).sqrt();
    (room / unit).max(0.0)
}

struct Outcome {
    result: SolverResult,
    exact: bool,
    failure: Option<RoundingFailure>,
    kkt: std::result::Result<KktReport, String>,
    uniqueness: bool,
}

fn fill(record: &mut TrialRecord, outcome: Outcome, elapsed: f64, config: &TrialConfig) {
    let r = &outcome.result;
    record.solver_status = r.status;
    record.objective = r.objective;
    record.iterations = r.iterations;
    record.wall_time_s = if config.record_timing { elapsed } else { 0.0 };
    record.residual_max = r.residuals().max();
    record.exact = outcome.exact;
    record.rounding_failure = outcome.failure.map(|f| f.to_string()).unwrap_or_default();
    record.uniqueness_holds = outcome.uniqueness;
    match outcome.kkt {
        Ok(kkt) => {
            record.certificate_built = true;
            record.certificate_passed = kkt.passed;
            record.stationarity_resid = Some(kkt.stationarity_resid);
            record.cs_rowsum_resid = Some(kkt.cs_rowsum_resid);
            record.cs_nonneg_resid = Some(kkt.cs_nonneg_resid);
            record.cs_sdp_resid = Some(kkt.cs_sdp_resid);
            record.min_lambda = Some(kkt.min_lambda);
            record.min_phi = kkt.min_phi;
            record.min_eta = Some(kkt.min_eta);
            record.min_eig_s = Some(kkt.min_eig_s);
            record.s_spectral_norm = Some(kkt.s_spectral_norm);
            record.gate_norm = Some(kkt.gate_norm);
            record.gate_margin = Some(kkt.gate_margin);
        }
        Err(e) => record.certificate_error = e,
    }
}

/// Runs one trial of `cell` with the given instance seed.
///
/// Solver iteration limits and certificate refusals are recorded in the row;
/// only invalid parameters produce an error.
pub fn run_trial(cell: &Cell, seed: u64, config: &TrialConfig) -> Result<TrialRecord> {
    cell.shape.validate()?;
    let omega_in = cell.distribution.with_mean(cell.alpha)?;
    let omega_out = cell.distribution.with_mean(cell.beta)?;
    let mut record = TrialRecord {
        schema_version: RECORD_SCHEMA_VERSION,
        cell: 0,
        trial: 0,
        seed,
        kind: cell.shape.kind().into(),
        k: cell.shape.k(),
        m: None,
        n: 0,
        blocks: String::new(),
        right_blocks: String::new(),
        noise: 0,
        right_noise: None,
        alpha: cell.alpha,
        beta: cell.beta,
        distribution: cell.distribution.label(),
        gamma: 0.0,
        guarantee_lhs: 0.0,
        guarantee_rhs: 0.0,
        guarantee_holds: false,
        tau_condition_holds: true,
        guarantee_scale_limit: 0.0,
        solver_status: SolverStatus::IterLimit,
        objective: 0.0,
        iterations: 0,
        wall_time_s: 0.0,
        residual_max: 0.0,
        exact: false,
        rounding_failure: String::new(),
        certificate_built: false,
        certificate_passed: false,
        certificate_error: String::new(),
        stationarity_resid: None,
        cs_rowsum_resid: None,
        cs_nonneg_resid: None,
        cs_sdp_resid: None,
        min_lambda: None,
        min_phi: None,
        min_eta: None,
        min_eig_s: None,
        s_spectral_norm: None,
        gate_norm: None,
        gate_margin: None,
        uniqueness_holds: false,
    };
    let start = Instant::now();
    match &cell.shape {
        CellShape::Clique { blocks, noise } => {
            let spec = PlantedCliqueSpec { plan: CliquePlan::from_sizes(blocks, *noise)?, omega_in, omega_out };
            let plan = &spec.plan;
            let report = check_clique_guarantee(&spec, &config.guarantee);
            record.n = plan.n();
            record.blocks = join_sizes(blocks);
            record.noise = *noise;
            record.gamma = report.gamma;
            record.guarantee_lhs = report.lhs;
            record.guarantee_rhs = report.rhs;
            record.guarantee_holds = report.holds;
            record.guarantee_scale_limit = clique_scale_limit(&report, plan.n(), blocks.len(), *noise, plan.min_size());

            let w = sample_planted_cluster(&spec, seed);
            let result = solve(&assemble_clique_sdp(&w, blocks.len())?, &config.solver)?;
            let rec = clique_recovery_report(&result.x, plan, None);
            let kkt = build_clique_certificate(&w, plan, config.epsilon)
                .map(|cert| verify_clique_kkt(&w, plan, &cert, config.cert_tol))
                .map_err(|e| e.to_string());
            let outcome =
                Outcome { result, exact: rec.exact, failure: rec.failure, kkt, uniqueness: clique_uniqueness_holds(&w, plan) };
            fill(&mut record, outcome, start.elapsed().as_secs_f64(), config);
        }
        CellShape::Biclique { left_blocks, right_blocks, left_noise, right_noise } => {
            let plan = BicliquePlan::from_sizes(left_blocks, right_blocks, *left_noise, *right_noise)?;
            let spec = PlantedBicliqueSpec { plan, omega_in, omega_out };
            let plan = &spec.plan;
            let report = check_biclique_guarantee(&spec, &config.guarantee);
            record.m = Some(plan.m());
            record.n = plan.n();
            record.blocks = join_sizes(left_blocks);
            record.right_blocks = join_sizes(right_blocks);
            record.noise = *left_noise;
            record.right_noise = Some(*right_noise);
            record.gamma = report.gamma;
            record.guarantee_lhs = report.lhs;
            record.guarantee_rhs = report.rhs;
            record.guarantee_holds = report.holds;
            record.tau_condition_holds = report.tau_condition_holds;
            record.guarantee_scale_limit = biclique_scale_limit(&report, cell.beta, plan);

            let w = sample_planted_bicluster(&spec, seed);
            let result = solve(&assemble_biclique_sdp(&w, left_blocks.len())?, &config.solver)?;
            let rec = biclique_recovery_report(&result.x, plan, None);
            let kkt = build_biclique_certificate(&w, plan, config.epsilon, config.kappa, config.rho1)
                .map(|cert| verify_biclique_kkt(&w, plan, &cert, config.cert_tol))
                .map_err(|e| e.to_string());
            let outcome = Outcome {
                result,
                exact: rec.exact,
                failure: rec.failure,
                kkt,
                uniqueness: biclique_uniqueness_holds(&w, plan),
            };
            fill(&mut record, outcome, start.elapsed().as_secs_f64(), config);
        }
    }
    Ok(record)
}
