//! Parameter grids run over a worker pool, CSV output and aggregation.

use std::io::{Read, Write};
use std::path::PathBuf;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{run_trial, trial_seed, Cell, CellShape, DistributionFamily, TrialConfig, TrialRecord};
use crate::error::{Error, Result};

/// Environment variable capping the number of sweep workers.
pub const WORKERS_ENV: &str = "DENSEST_WORKERS";

fn default_distributions() -> Vec<DistributionFamily> {
    vec![DistributionFamily::Bernoulli]
}

/// A grid of cells, each run for `trials` seeds.
///
/// Cells enumerate `shapes × alpha × beta × distributions` with the shape
/// varying slowest.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub shapes: Vec<CellShape>,
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
    #[serde(default = "default_distributions")]
    pub distributions: Vec<DistributionFamily>,
    pub trials: usize,
    #[serde(default)]
    pub base_seed: u64,
    #[serde(default)]
    pub config: TrialConfig,
    /// Destination CSV; the CLI can override it.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
}

impl SweepSpec {
    pub fn from_json_str(text: &str) -> Result<Self> {
        let spec: SweepSpec = serde_json::from_str(text)?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.shapes.is_empty() || self.alpha.is_empty() || self.beta.is_empty() || self.distributions.is_empty() {
            return Err(Error::Domain("every sweep grid must be nonempty".into()));
        }
        if self.trials == 0 {
            return Err(Error::Domain("trials must be at least 1".into()));
        }
        for shape in &self.shapes {
            shape.validate()?;
        }
        for cell in self.cells() {
            cell.distribution.with_mean(cell.alpha)?;
            cell.distribution.with_mean(cell.beta)?;
        }
        self.config.solver.validate()?;
        for (name, v) in [("epsilon", self.config.epsilon), ("kappa", self.config.kappa)] {
            if !(v > 0.0 && v < 1.0) {
                return Err(Error::Domain(format!("{name} = {v} must lie in (0, 1)")));
            }
        }
        self.config.guarantee.validate()
    }

    pub fn cells(&self) -> Vec<Cell> {
        let mut out = Vec::new();
        for shape in &self.shapes {
            for &alpha in &self.alpha {
                for &beta in &self.beta {
                    for &distribution in &self.distributions {
                        out.push(Cell { shape: shape.clone(), alpha, beta, distribution });
                    }
                }
            }
        }
        out
    }
}

/// Worker count from [`WORKERS_ENV`], or 0 to let the pool decide.
pub fn worker_count() -> usize {
    std::env::var(WORKERS_ENV).ok().and_then(|v| v.trim().parse().ok()).unwrap_or(0)
}

/// Runs every trial of `spec` on a pool of `workers` threads (0 = default).
/// Rows come back ordered by `(cell, trial)`.
pub fn run_sweep(spec: &SweepSpec, workers: usize) -> Result<Vec<TrialRecord>> {
    spec.validate()?;
    let cells = spec.cells();
    let jobs: Vec<(usize, usize)> =
        (0..cells.len()).flat_map(|c| (0..spec.trials).map(move |t| (c, t))).collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Domain(format!("cannot start worker pool: {e}")))?;
    pool.install(|| {
        jobs.par_iter()
            .map(|&(c, t)| {
                let mut record = run_trial(&cells[c], trial_seed(spec.base_seed, c, t), &spec.config)?;
                record.cell = c;
                record.trial = t;
                Ok(record)
            })
            .collect()
    })
}

/// Writes records as CSV with a header row.
pub fn write_records_csv<W: Write>(records: &[TrialRecord], out: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(out);
    for r in records {
        wtr.serialize(r)?;
    }
    wtr.flush()?;
    Ok(())
}

/// Reads records written by [`write_records_csv`].
pub fn read_records_csv<R: Read>(input: R) -> Result<Vec<TrialRecord>> {
    let mut rdr = csv::Reader::from_reader(input);
    let records: Vec<TrialRecord> = rdr.deserialize().collect::<std::result::Result<_, _>>()?;
    if let Some(r) = records.iter().find(|r| r.schema_version != super::RECORD_SCHEMA_VERSION) {
        return Err(Error::Parse(format!("unsupported record schema version {}", r.schema_version)));
    }
    Ok(records)
}

/// Exact-recovery rate of one cell.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellRate {
    pub cell: usize,
    pub kind: String,
    pub blocks: String,
    pub alpha: f64,
    pub beta: f64,
    pub distribution: String,
    pub trials: usize,
    pub exact: usize,
    pub rate: f64,
    pub guarantee_holds: bool,
    pub guarantee_scale_limit: f64,
}

/// Groups records by cell, in order of first appearance.
pub fn recovery_rates(records: &[TrialRecord]) -> Vec<CellRate> {
    let mut out: Vec<CellRate> = Vec::new();
    for r in records {
        let idx = match out.iter().position(|c| c.cell == r.cell) {
            Some(i) => i,
            None => {
                out.push(CellRate {
                    cell: r.cell,
                    kind: r.kind.clone(),
                    blocks: r.blocks.clone(),
                    alpha: r.alpha,
                    beta: r.beta,
                    distribution: r.distribution.clone(),
                    trials: 0,
                    exact: 0,
                    rate: 0.0,
                    guarantee_holds: r.guarantee_holds,
                    guarantee_scale_limit: r.guarantee_scale_limit,
                });
                out.len() - 1
            }
        };
        let c = &mut out[idx];
        c.trials += 1;
        c.exact += r.exact as usize;
        c.rate = c.exact as f64 / c.trials as f64;
    }
    out
}

/// Calibrated scale of the bound constants, per problem kind.
///
/// With every constant set to `s`, the guarantee holds on a cell iff
/// `s ≤ guarantee_scale_limit`. The threshold is the largest limit among
/// cells whose recovery rate is below target: any `s` strictly above it
/// makes "guarantee holds ⇒ rate ≥ target" true on the sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CalibrationReport {
    pub target_rate: f64,
    pub clique_threshold: Option<f64>,
    pub biclique_threshold: Option<f64>,
    pub cells: usize,
}

pub fn calibrate_guarantee_scale(records: &[TrialRecord], target_rate: f64) -> CalibrationReport {
    let rates = recovery_rates(records);
    let threshold = |kind: &str| -> Option<f64> {
        let cells: Vec<&CellRate> = rates.iter().filter(|c| c.kind == kind).collect();
        if cells.is_empty() {
            return None;
        }
        Some(
            cells
                .iter()
                .filter(|c| c.rate < target_rate)
                .map(|c| c.guarantee_scale_limit)
                .fold(0.0, f64::max),
        )
    };
    CalibrationReport {
        target_rate,
        clique_threshold: threshold("clique"),
        biclique_threshold: threshold("biclique"),
        cells: rates.len(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_spec() -> SweepSpec {
        SweepSpec::from_json_str(
            r#"{
                "shapes": [{"kind": "clique", "blocks": [4, 4], "noise": 1}],
                "alpha": [0.9],
                "beta": [0.1, 0.3],
                "trials": 2,
                "base_seed": 9
            }"#,
        )
        .unwrap()
    }

    #[test]
    fn two_cells_two_trials() {
        let records = run_sweep(&small_spec(), 2).unwrap();
        assert_eq!(records.len(), 4);
        let order: Vec<(usize, usize)> = records.iter().map(|r| (r.cell, r.trial)).collect();
        assert_eq!(order, vec![(0, 0), (0, 1), (1, 0), (1, 1)]);
        let mut buf = Vec::new();
        write_records_csv(&records, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert_eq!(text.lines().count(), 5);
        assert!(text.starts_with("schema_version,cell,trial,seed,kind,"));
        assert_eq!(read_records_csv(&buf[..]).unwrap(), records);
    }

    #[test]
    fn worker_count_does_not_change_rows() {
        let spec = small_spec();
        assert_eq!(run_sweep(&spec, 1).unwrap(), run_sweep(&spec, 3).unwrap());
    }

    #[test]
    fn rejects_bad_specs() {
        let empty = r#"{"shapes": [], "alpha": [0.9], "beta": [0.1], "trials": 1}"#;
        assert!(SweepSpec::from_json_str(empty).is_err());
        let zero = r#"{"shapes": [{"kind": "clique", "blocks": [2]}], "alpha": [0.9], "beta": [0.1], "trials": 0}"#;
        assert!(SweepSpec::from_json_str(zero).is_err());
        let mean = r#"{"shapes": [{"kind": "clique", "blocks": [2]}], "alpha": [1.5], "beta": [0.1], "trials": 1}"#;
        assert!(SweepSpec::from_json_str(mean).is_err());
        let ragged = r#"{"shapes": [{"kind": "biclique", "left_blocks": [2], "right_blocks": [2, 2]}],
                         "alpha": [0.9], "beta": [0.1], "trials": 1}"#;
        assert!(SweepSpec::from_json_str(ragged).is_err());
    }

    #[test]
    fn rates_and_calibration() {
        let mk = |cell: usize, exact: bool, limit: f64| {
            let mut r = run_trial(
                &Cell {
                    shape: CellShape::Clique { blocks: vec![2], noise: 0 },
                    alpha: 1.0,
                    beta: 0.0,
                    distribution: DistributionFamily::Bernoulli,
                },
                0,
                &TrialConfig::default(),
            )
            .unwrap();
            r.cell = cell;
            r.exact = exact;
            r.guarantee_scale_limit = limit;
            r
        };
        let records = vec![mk(0, true, 3.0), mk(0, true, 3.0), mk(1, true, 1.0), mk(1, false, 1.0), mk(2, false, 0.2)];
        let rates = recovery_rates(&records);
        assert_eq!(rates.len(), 3);
        assert_eq!((rates[0].exact, rates[0].trials), (2, 2));
        assert_eq!(rates[1].rate, 0.5);
        let cal = calibrate_guarantee_scale(&records, 0.95);
        assert_eq!(cal.clique_threshold, Some(1.0));
        assert_eq!(cal.biclique_threshold, None);
    }
}
