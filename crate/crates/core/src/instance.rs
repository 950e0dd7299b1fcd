//! Instance files: weights, optional ground truth and the generator spec,
//! serialized as JSON tagged by `type`.
//!
//! ```json
//! {"type": "clique", "n": 3, "k": 1,
//!  "weights": [[1, 0.5, 0], [0.5, 1, 0], [0, 0, 1]],
//!  "ground_truth": {"n": 3, "cliques": [[0, 1]], "noise": [2]}}
//! ```
//!
//! Biclique files carry `m`, `n` and an `m × n` weight table instead.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{similarity_from_points, BicliquePlan, BipartiteWeights, CliquePlan, PointCloud, SymmetricWeights};
use crate::linalg::{DenseSymMatrix, Matrix};
use crate::planted::{
    sample_planted_bicluster, sample_planted_cluster, DistributionSpec, PlantedBicliqueSpec, PlantedCliqueSpec,
};

/// Parameters that regenerate a planted clique instance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CliqueGenSpec {
    pub blocks: Vec<usize>,
    #[serde(default)]
    pub noise: usize,
    pub omega_in: DistributionSpec,
    pub omega_out: DistributionSpec,
    pub seed: u64,
}

/// Parameters that regenerate a planted biclique instance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BicliqueGenSpec {
    pub left_blocks: Vec<usize>,
    pub right_blocks: Vec<usize>,
    #[serde(default)]
    pub left_noise: usize,
    #[serde(default)]
    pub right_noise: usize,
    pub omega_in: DistributionSpec,
    pub omega_out: DistributionSpec,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CliqueInstance {
    pub n: usize,
    pub k: usize,
    pub weights: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ground_truth: Option<CliquePlan>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gen: Option<CliqueGenSpec>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BicliqueInstance {
    pub m: usize,
    pub n: usize,
    pub k: usize,
    pub weights: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ground_truth: Option<BicliquePlan>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gen: Option<BicliqueGenSpec>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Instance {
    Clique(CliqueInstance),
    Biclique(BicliqueInstance),
}

fn table(m: &Matrix) -> Vec<Vec<f64>> {
    (0..m.rows()).map(|i| m.row(i).to_vec()).collect()
}

fn flatten(rows: &[Vec<f64>], expect_rows: usize, expect_cols: usize) -> Result<Vec<f64>> {
    if rows.len() != expect_rows || rows.iter().any(|r| r.len() != expect_cols) {
        return Err(Error::Shape(format!("weights must be {expect_rows} rows of {expect_cols} entries")));
    }
    Ok(rows.iter().flatten().copied().collect())
}

impl CliqueInstance {
    pub fn new(w: &SymmetricWeights, k: usize, ground_truth: Option<CliquePlan>) -> Result<Self> {
        let inst = Self { n: w.n(), k, weights: table(&w.matrix().to_matrix()), ground_truth, gen: None };
        inst.validate()?;
        Ok(inst)
    }

    pub fn weights(&self) -> Result<SymmetricWeights> {
        SymmetricWeights::from_row_major(self.n, flatten(&self.weights, self.n, self.n)?)
    }

    /// Checks shape, symmetry, range, `k` and the ground truth.
    pub fn validate(&self) -> Result<()> {
        self.weights()?;
        if self.k == 0 || self.k > self.n {
            return Err(Error::Domain(format!("k = {} must lie in 1..={}", self.k, self.n)));
        }
        if let Some(plan) = &self.ground_truth {
            if plan.n() != self.n || plan.cliques().len() != self.k {
                return Err(Error::InvalidPlan("ground truth does not match n and k".into()));
            }
        }
        Ok(())
    }
}

impl BicliqueInstance {
    pub fn new(w: &BipartiteWeights, k: usize, ground_truth: Option<BicliquePlan>) -> Result<Self> {
        let inst = Self { m: w.m(), n: w.n(), k, weights: table(w.matrix()), ground_truth, gen: None };
        inst.validate()?;
        Ok(inst)
    }

    pub fn weights(&self) -> Result<BipartiteWeights> {
        BipartiteWeights::from_row_major(self.m, self.n, flatten(&self.weights, self.m, self.n)?)
    }

    pub fn validate(&self) -> Result<()> {
        self.weights()?;
        if self.k == 0 || self.k > self.m.min(self.n) {
            return Err(Error::Domain(format!("k = {} must lie in 1..={}", self.k, self.m.min(self.n))));
        }
        if let Some(plan) = &self.ground_truth {
            if plan.m() != self.m || plan.n() != self.n || plan.left_blocks().len() != self.k {
                return Err(Error::InvalidPlan("ground truth does not match m, n and k".into()));
            }
        }
        Ok(())
    }
}

impl Instance {
    /// Parses and validates an instance document.
    pub fn from_json_str(text: &str) -> Result<Self> {
        let inst: Instance = serde_json::from_str(text)?;
        inst.validate()?;
        Ok(inst)
    }

    pub fn to_json_string(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Instance::Clique(c) => c.validate(),
            Instance::Biclique(b) => b.validate(),
        }
    }

    pub fn k(&self) -> usize {
        match self {
            Instance::Clique(c) => c.k,
            Instance::Biclique(b) => b.k,
        }
    }
}

/// Samples the planted clique instance described by `gen`.
pub fn generate_clique_instance(gen: &CliqueGenSpec) -> Result<CliqueInstance> {
    let spec = PlantedCliqueSpec {
        plan: CliquePlan::from_sizes(&gen.blocks, gen.noise)?,
        omega_in: gen.omega_in,
        omega_out: gen.omega_out,
    };
    let w = sample_planted_cluster(&spec, gen.seed);
    let mut inst = CliqueInstance::new(&w, gen.blocks.len(), Some(spec.plan))?;
    inst.gen = Some(gen.clone());
    Ok(inst)
}

/// Samples the planted biclique instance described by `gen`.
pub fn generate_biclique_instance(gen: &BicliqueGenSpec) -> Result<BicliqueInstance> {
    if gen.left_blocks.len() != gen.right_blocks.len() {
        return Err(Error::InvalidPlan("left and right block lists differ in length".into()));
    }
    let spec = PlantedBicliqueSpec {
        plan: BicliquePlan::from_sizes(&gen.left_blocks, &gen.right_blocks, gen.left_noise, gen.right_noise)?,
        omega_in: gen.omega_in,
        omega_out: gen.omega_out,
    };
    let w = sample_planted_bicluster(&spec, gen.seed);
    let mut inst = BicliqueInstance::new(&w, gen.left_blocks.len(), Some(spec.plan))?;
    inst.gen = Some(gen.clone());
    Ok(inst)
}

/// Clique instance with similarity weights `1 − ‖x_i − x_j‖²` of a point cloud.
pub fn instance_from_points(cloud: &PointCloud, k: usize, rescale: bool) -> Result<CliqueInstance> {
    CliqueInstance::new(&similarity_from_points(cloud, rescale)?, k, None)
}

/// `n × n` matrix rows for JSON output.
pub fn matrix_rows(m: &DenseSymMatrix) -> Vec<Vec<f64>> {
    (0..m.n()).map(|i| m.row(i).to_vec()).collect()
}
