//! `densest`: generate planted instances, solve the relaxations, run the
//! exhaustive oracles, build certificates and run sweeps.
//!
//! Exit codes: 0 on success, 1 on domain or I/O errors, 2 on usage errors.

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use densest_core::certificates::{
    biclique_uniqueness_holds, build_biclique_certificate, build_clique_certificate, clique_uniqueness_holds,
    write_matrix_csv, NormBoundConstants, DEFAULT_EPSILON, DEFAULT_KAPPA, DEFAULT_RHO1,
};
use densest_core::experiments::{
    calibrate_guarantee_scale, empirical_norm_suite, hoeffding_suite, read_records_csv, recovery_rates, run_sweep,
    worker_count, write_records_csv, MatrixShape, SweepSpec,
};
use densest_core::graph::{brute_force_densest_kdb, brute_force_densest_kdc, BicliquePlan, CliquePlan, PointCloud};
use densest_core::instance::{
    generate_biclique_instance, generate_clique_instance, instance_from_points, matrix_rows, BicliqueGenSpec,
    CliqueGenSpec, Instance,
};
use densest_core::planted::DistributionSpec;
use densest_core::recovery::{partitions_equal, round_biclique_solution, round_clique_solution};
use densest_core::sdp::{assemble_biclique_sdp, assemble_clique_sdp, export_sdpa, solve, SdpProblem, SolverOptions};
use densest_core::Error;
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "densest", version, about = "Densest k-disjoint-clique and biclique relaxations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a planted instance, or build one from a point cloud.
    Gen(GenArgs),
    /// Solve the relaxation of an instance and round the solution.
    Solve(SolveArgs),
    /// Exhaustive densest-subgraph search on a small instance.
    Oracle(OracleArgs),
    /// Build and verify the dual certificate for a plan.
    Certify(CertifyArgs),
    /// Run a parameter sweep from a JSON spec and write CSV rows.
    Sweep(SweepArgs),
    /// Fit the guarantee constants from a sweep CSV.
    Calibrate(CalibrateArgs),
    /// Empirical random-matrix norm and Hoeffding suites.
    Norms(NormsArgs),
    /// Write the relaxation of an instance in sparse SDPA format.
    ExportSdpa(ExportArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Clique,
    Biclique,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Bernoulli,
    Uniform,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long = "type", value_enum, default_value = "clique")]
    kind: Kind,
    /// Clique sizes, or left block sizes for bicliques.
    #[arg(long, value_delimiter = ',')]
    blocks: Vec<usize>,
    /// Right block sizes (bicliques; defaults to `--blocks`).
    #[arg(long, value_delimiter = ',')]
    right_blocks: Vec<usize>,
    /// Noise vertices (left side for bicliques).
    #[arg(long, default_value_t = 0)]
    noise: usize,
    #[arg(long, default_value_t = 0)]
    right_noise: usize,
    #[arg(long, default_value_t = 0.9)]
    alpha: f64,
    #[arg(long, default_value_t = 0.1)]
    beta: f64,
    #[arg(long, value_enum, default_value = "bernoulli")]
    dist: Family,
    /// Half width of the in-block uniform distribution.
    #[arg(long, default_value_t = 0.0)]
    in_half_width: f64,
    /// Half width of the out-of-block uniform distribution.
    #[arg(long, default_value_t = 0.0)]
    out_half_width: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Build a clique instance from a headerless point CSV instead of sampling.
    #[arg(long, conflicts_with = "blocks")]
    points: Option<PathBuf>,
    /// Number of cliques for `--points`.
    #[arg(long, requires = "points")]
    k: Option<usize>,
    /// Divide coordinates by the largest pairwise distance first.
    #[arg(long, requires = "points")]
    rescale: bool,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct SolverArgs {
    #[arg(long)]
    tol_feas: Option<f64>,
    #[arg(long)]
    tol_obj_rel: Option<f64>,
    #[arg(long)]
    max_iter: Option<usize>,
    #[arg(long)]
    penalty: Option<f64>,
}

impl SolverArgs {
    fn options(&self) -> SolverOptions {
        let d = SolverOptions::default();
        SolverOptions {
            tol_feas: self.tol_feas.unwrap_or(d.tol_feas),
            tol_obj_rel: self.tol_obj_rel.unwrap_or(d.tol_obj_rel),
            max_iter: self.max_iter.unwrap_or(d.max_iter),
            penalty: self.penalty.unwrap_or(d.penalty),
            ..d
        }
    }
}

#[derive(Args)]
struct SolveArgs {
    instance: PathBuf,
    #[command(flatten)]
    solver: SolverArgs,
    /// Rounding threshold (defaults to half the smallest lift entry).
    #[arg(long)]
    threshold: Option<f64>,
    /// Leave the solution matrix out of the JSON.
    #[arg(long)]
    no_matrix: bool,
    /// Write the per-iteration trace as CSV.
    #[arg(long)]
    trace: Option<PathBuf>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct OracleArgs {
    instance: PathBuf,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct CertifyArgs {
    instance: PathBuf,
    /// Plan JSON, or a `solve` output whose recovered plan is used.
    /// Defaults to the instance's ground truth.
    #[arg(long)]
    plan: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_EPSILON)]
    epsilon: f64,
    #[arg(long, default_value_t = DEFAULT_KAPPA)]
    kappa: f64,
    #[arg(long, default_value_t = DEFAULT_RHO1)]
    rho1: f64,
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    /// Write the dual slack `S` as CSV.
    #[arg(long)]
    slack_csv: Option<PathBuf>,
    /// Exit with status 1 when verification fails.
    #[arg(long)]
    require_pass: bool,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    spec: PathBuf,
    /// Output CSV (overrides the spec's `output`; stdout when neither is set).
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Worker threads (overrides the environment cap).
    #[arg(long)]
    workers: Option<usize>,
}

#[derive(Args)]
struct CalibrateArgs {
    records: PathBuf,
    #[arg(long, default_value_t = 0.95)]
    target: f64,
}

#[derive(Args)]
struct NormsArgs {
    #[arg(long, value_enum, default_value = "bernoulli")]
    dist: Family,
    #[arg(long, default_value_t = 0.5)]
    mean: f64,
    #[arg(long, default_value_t = 0.0)]
    half_width: f64,
    #[arg(long, default_value_t = 400)]
    n: usize,
    /// Row count for a rectangular suite; symmetric when absent.
    #[arg(long)]
    rows: Option<usize>,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    /// Also run the Hoeffding suite with sums of this many draws.
    #[arg(long)]
    hoeffding_m: Option<usize>,
    #[arg(long, default_value_t = 1000)]
    hoeffding_trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ExportArgs {
    instance: PathBuf,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

fn read_text(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn sink(path: Option<&Path>) -> Result<Box<dyn Write>, Error> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout())),
    })
}

fn emit_json<T: Serialize>(value: &T, path: Option<&Path>) -> Result<(), Error> {
    let mut out = sink(path)?;
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}

fn load_instance(path: &Path) -> Result<Instance, Error> {
    Instance::from_json_str(&read_text(path)?)
}

fn distribution(family: Family, mean: f64, half_width: f64) -> Result<DistributionSpec, Error> {
    match family {
        Family::Bernoulli => DistributionSpec::bernoulli(mean),
        Family::Uniform => DistributionSpec::uniform(mean, half_width),
    }
}

fn cmd_gen(a: GenArgs) -> Result<(), Error> {
    let instance = if let Some(path) = &a.points {
        let k = a.k.ok_or_else(|| Error::Domain("--points needs --k".into()))?;
        let cloud = PointCloud::from_csv(BufReader::new(File::open(path)?))?;
        Instance::Clique(instance_from_points(&cloud, k, a.rescale)?)
    } else {
        if a.blocks.is_empty() {
            return Err(Error::Domain("--blocks is required unless --points is given".into()));
        }
        let omega_in = distribution(a.dist, a.alpha, a.in_half_width)?;
        let omega_out = distribution(a.dist, a.beta, a.out_half_width)?;
        match a.kind {
            Kind::Clique => Instance::Clique(generate_clique_instance(&CliqueGenSpec {
                blocks: a.blocks,
                noise: a.noise,
                omega_in,
                omega_out,
                seed: a.seed,
            })?),
            Kind::Biclique => {
                let right_blocks = if a.right_blocks.is_empty() { a.blocks.clone() } else { a.right_blocks };
                Instance::Biclique(generate_biclique_instance(&BicliqueGenSpec {
                    left_blocks: a.blocks,
                    right_blocks,
                    left_noise: a.noise,
                    right_noise: a.right_noise,
                    omega_in,
                    omega_out,
                    seed: a.seed,
                })?)
            }
        }
    };
    emit_json(&instance, a.output.as_deref())
}

fn problem_of(instance: &Instance) -> Result<SdpProblem, Error> {
    match instance {
        Instance::Clique(c) => assemble_clique_sdp(&c.weights()?, c.k),
        Instance::Biclique(b) => assemble_biclique_sdp(&b.weights()?, b.k),
    }
}

fn cmd_solve(a: SolveArgs) -> Result<(), Error> {
    let instance = load_instance(&a.instance)?;
    let opts = SolverOptions { record_trace: a.trace.is_some(), ..a.solver.options() };
    opts.validate()?;
    let result = solve(&problem_of(&instance)?, &opts)?;
    if let Some(path) = &a.trace {
        result.write_trace_csv(BufWriter::new(File::create(path)?))?;
    }
    let (recovered, failure, exact) = match &instance {
        Instance::Clique(c) => match round_clique_solution(&result.x, c.k, a.threshold) {
            Ok(p) => {
                let exact = c.ground_truth.as_ref().map(|t| partitions_equal(&p, t)).transpose()?;
                (Some(serde_json::to_value(&p)?), None, exact)
            }
            Err(f) => (None, Some(f.to_string()), c.ground_truth.as_ref().map(|_| false)),
        },
        Instance::Biclique(b) => match round_biclique_solution(&result.x, b.m, b.n, b.k, a.threshold) {
            Ok(p) => {
                let exact = b.ground_truth.as_ref().map(|t| partitions_equal(&p, t)).transpose()?;
                (Some(serde_json::to_value(&p)?), None, exact)
            }
            Err(f) => (None, Some(f.to_string()), b.ground_truth.as_ref().map(|_| false)),
        },
    };
    let doc = json!({
        "status": result.status,
        "objective": result.objective,
        "iterations": result.iterations,
        "residuals": result.residuals(),
        "spectral_norm": result.spectral_norm,
        "recovered": recovered,
        "rounding_failure": failure,
        "exact": exact,
        "x": if a.no_matrix { Value::Null } else { serde_json::to_value(matrix_rows(&result.x))? },
    });
    emit_json(&doc, a.output.as_deref())
}

fn cmd_oracle(a: OracleArgs) -> Result<(), Error> {
    let doc = match load_instance(&a.instance)? {
        Instance::Clique(c) => {
            let (plan, value) = brute_force_densest_kdc(&c.weights()?, c.k)?;
            json!({ "plan": plan, "value": value })
        }
        Instance::Biclique(b) => {
            let (plan, value) = brute_force_densest_kdb(&b.weights()?, b.k)?;
            json!({ "plan": plan, "value": value })
        }
    };
    emit_json(&doc, a.output.as_deref())
}

/// Plan from a plan file or from the `recovered` field of a solve output.
fn plan_value(path: &Path) -> Result<Value, Error> {
    let v: Value = serde_json::from_str(&read_text(path)?)?;
    match v.get("recovered") {
        Some(Value::Null) => Err(Error::Domain("solution has no recovered plan".into())),
        Some(p) => Ok(p.clone()),
        None => Ok(v),
    }
}

fn cmd_certify(a: CertifyArgs) -> Result<bool, Error> {
    let instance = load_instance(&a.instance)?;
    let given = a.plan.as_deref().map(plan_value).transpose()?;
    let constants = NormBoundConstants::default();
    let missing = || Error::Domain("no --plan given and the instance has no ground truth".into());
    let (summary, slack) = match &instance {
        Instance::Clique(c) => {
            let w = c.weights()?;
            let plan: CliquePlan = match &given {
                Some(v) => serde_json::from_value(v.clone())?,
                None => c.ground_truth.clone().ok_or_else(missing)?,
            };
            let mut cert = build_clique_certificate(&w, &plan, a.epsilon)?;
            cert.from_recovered_plan = given.is_some();
            let mut summary = serde_json::to_value(cert.summary(&w, a.tol, &constants))?;
            summary["uniqueness_holds"] = clique_uniqueness_holds(&w, &plan).into();
            (summary, cert.s.to_matrix())
        }
        Instance::Biclique(b) => {
            let w = b.weights()?;
            let plan: BicliquePlan = match &given {
                Some(v) => serde_json::from_value(v.clone())?,
                None => b.ground_truth.clone().ok_or_else(missing)?,
            };
            let mut cert = build_biclique_certificate(&w, &plan, a.epsilon, a.kappa, a.rho1)?;
            cert.from_recovered_plan = given.is_some();
            let mut summary = serde_json::to_value(cert.summary(&w, a.tol, &constants))?;
            summary["uniqueness_holds"] = biclique_uniqueness_holds(&w, &plan).into();
            (summary, cert.s.to_matrix())
        }
    };
    if let Some(path) = &a.slack_csv {
        write_matrix_csv(&slack, BufWriter::new(File::create(path)?))?;
    }
    emit_json(&summary, a.output.as_deref())?;
    let passed = summary["kkt"]["passed"].as_bool().unwrap_or(false);
    Ok(passed || !a.require_pass)
}

fn cmd_sweep(a: SweepArgs) -> Result<(), Error> {
    let spec = SweepSpec::from_json_str(&read_text(&a.spec)?)?;
    let records = run_sweep(&spec, a.workers.unwrap_or_else(worker_count))?;
    let dest = a.output.or_else(|| spec.output.clone());
    write_records_csv(&records, sink(dest.as_deref())?)?;
    for rate in recovery_rates(&records) {
        eprintln!(
            "cell {:>3} {:<8} blocks {:<12} alpha {:.3} beta {:.3} {:<12} exact {}/{}",
            rate.cell, rate.kind, rate.blocks, rate.alpha, rate.beta, rate.distribution, rate.exact, rate.trials
        );
    }
    Ok(())
}

fn cmd_calibrate(a: CalibrateArgs) -> Result<(), Error> {
    let records = read_records_csv(BufReader::new(File::open(&a.records)?))?;
    emit_json(&calibrate_guarantee_scale(&records, a.target), None)
}

fn cmd_norms(a: NormsArgs) -> Result<(), Error> {
    let dist = distribution(a.dist, a.mean, a.half_width)?;
    let shape = match a.rows {
        Some(rows) => MatrixShape::Rectangular { rows },
        None => MatrixShape::Symmetric,
    };
    let report = empirical_norm_suite(&dist, a.n, shape, a.trials, a.seed)?;
    let hoeffding = a.hoeffding_m.map(|m| hoeffding_suite(&dist, m, a.hoeffding_trials, a.seed)).transpose()?;
    emit_json(&json!({ "norms": report, "hoeffding": hoeffding }), a.output.as_deref())
}

fn cmd_export(a: ExportArgs) -> Result<(), Error> {
    let problem = problem_of(&load_instance(&a.instance)?)?;
    let mut out = sink(a.output.as_deref())?;
    export_sdpa(&problem, &mut out)?;
    out.flush()?;
    Ok(())
}

fn run(command: Command) -> Result<bool, Error> {
    match command {
        Command::Gen(a) => cmd_gen(a).map(|_| true),
        Command::Solve(a) => cmd_solve(a).map(|_| true),
        Command::Oracle(a) => cmd_oracle(a).map(|_| true),
        Command::Certify(a) => cmd_certify(a),
        Command::Sweep(a) => cmd_sweep(a).map(|_| true),
        Command::Calibrate(a) => cmd_calibrate(a).map(|_| true),
        Command::Norms(a) => cmd_norms(a).map(|_| true),
        Command::ExportSdpa(a) => cmd_export(a).map(|_| true),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("error: certificate verification failed");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
