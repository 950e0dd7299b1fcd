//! Planted partitions: k disjoint cliques plus a noise set, or k disjoint
//! bicliques plus noise on each side.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::DenseSymMatrix;

/// Behaviour shared by clique and biclique plans.
pub trait Partition: Clone {
    /// Side length of the lifted matrix.
    fn lift_dim(&self) -> usize;
    /// The rank-k feasible point encoding this partition.
    fn lift(&self) -> DenseSymMatrix;
    /// Same partition with blocks ordered by their smallest member.
    fn canonical(&self) -> Self;
    /// Whether both plans live on the same vertex sets.
    fn same_universe(&self, other: &Self) -> bool;
    fn k(&self) -> usize;
}

fn check_subsets(universe: usize, blocks: &[Vec<usize>], side: &str) -> Result<Vec<usize>> {
    let mut owner = vec![false; universe];
    for (q, block) in blocks.iter().enumerate() {
        if block.is_empty() {
            return Err(Error::InvalidPlan(format!("{side} block {q} is empty")));
        }
        for &v in block {
            if v >= universe {
                return Err(Error::InvalidPlan(format!("{side} vertex {v} out of range 0..{universe}")));
            }
            if owner[v] {
                return Err(Error::InvalidPlan(format!("{side} vertex {v} appears twice")));
            }
            owner[v] = true;
        }
    }
    Ok((0..universe).filter(|&v| !owner[v]).collect())
}

fn sorted_blocks(blocks: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
    blocks
        .into_iter()
        .map(|mut b| {
            b.sort_unstable();
            b
        })
        .collect()
}

fn contiguous(sizes: &[usize]) -> Vec<Vec<usize>> {
    let mut start = 0;
    sizes
        .iter()
        .map(|&s| {
            let block = (start..start + s).collect();
            start += s;
            block
        })
        .collect()
}

/// `k` disjoint nonempty cliques in `{0, .., n-1}`; uncovered vertices form the noise set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "CliquePlanRepr", into = "CliquePlanRepr")]
pub struct CliquePlan {
    n: usize,
    cliques: Vec<Vec<usize>>,
    noise: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct CliquePlanRepr {
    n: usize,
    cliques: Vec<Vec<usize>>,
    #[serde(default)]
    noise: Option<Vec<usize>>,
}

impl TryFrom<CliquePlanRepr> for CliquePlan {
    type Error = Error;
    fn try_from(r: CliquePlanRepr) -> Result<Self> {
        let plan = CliquePlan::new(r.n, r.cliques)?;
        if let Some(mut noise) = r.noise {
            noise.sort_unstable();
            if noise != plan.noise {
                return Err(Error::InvalidPlan("noise set is not the complement of the cliques".into()));
            }
        }
        Ok(plan)
    }
}

impl From<CliquePlan> for CliquePlanRepr {
    fn from(p: CliquePlan) -> Self {
        CliquePlanRepr { n: p.n, cliques: p.cliques, noise: Some(p.noise) }
    }
}

impl CliquePlan {
    /// Validates disjointness and nonemptiness; members are stored sorted.
    pub fn new(n: usize, cliques: Vec<Vec<usize>>) -> Result<Self> {
        if cliques.is_empty() {
            return Err(Error::InvalidPlan("a plan needs at least one clique".into()));
        }
        let noise = check_subsets(n, &cliques, "clique")?;
        Ok(Self { n, cliques: sorted_blocks(cliques), noise })
    }

    /// Consecutive index blocks of the given sizes followed by `noise` noise vertices.
    pub fn from_sizes(sizes: &[usize], noise: usize) -> Result<Self> {
        let n = sizes.iter().sum::<usize>() + noise;
        Self::new(n, contiguous(sizes))
    }

    /// Builds from per-vertex labels (`None` = noise, `Some(q)` with `q < k`).
    pub fn from_labels(labels: &[Option<usize>], k: usize) -> Result<Self> {
        let mut cliques = vec![Vec::new(); k];
        for (v, l) in labels.iter().enumerate() {
            if let Some(q) = *l {
                if q >= k {
                    return Err(Error::InvalidPlan(format!("label {q} out of range for k = {k}")));
                }
                cliques[q].push(v);
            }
        }
        Self::new(labels.len(), cliques)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn cliques(&self) -> &[Vec<usize>] {
        &self.cliques
    }

    pub fn noise(&self) -> &[usize] {
        &self.noise
    }

    /// Block `q` for `q < k`, or the noise set for `q == k`.
    pub fn block(&self, q: usize) -> &[usize] {
        if q == self.cliques.len() {
            &self.noise
        } else {
            &self.cliques[q]
        }
    }

    /// Clique sizes `r_1..r_k`.
    pub fn sizes(&self) -> Vec<usize> {
        self.cliques.iter().map(Vec::len).collect()
    }

    /// Smallest clique size.
    pub fn min_size(&self) -> usize {
        self.cliques.iter().map(Vec::len).min().unwrap_or(0)
    }

    pub fn noise_size(&self) -> usize {
        self.noise.len()
    }

    /// Per-vertex labels, `None` on noise.
    pub fn labels(&self) -> Vec<Option<usize>> {
        let mut out = vec![None; self.n];
        for (q, c) in self.cliques.iter().enumerate() {
            for &v in c {
                out[v] = Some(q);
            }
        }
        out
    }
}

impl Partition for CliquePlan {
    fn lift_dim(&self) -> usize {
        self.n
    }

    fn lift(&self) -> DenseSymMatrix {
        let n = self.n;
        let mut data = vec![0.0; n * n];
        for c in &self.cliques {
            let value = 1.0 / c.len() as f64;
            for &i in c {
                for &j in c {
                    data[i * n + j] = value;
                }
            }
        }
        DenseSymMatrix::from_symmetric_unchecked(n, data)
    }

    fn canonical(&self) -> Self {
        let mut cliques = self.cliques.clone();
        cliques.sort_by_key(|c| c[0]);
        Self { n: self.n, cliques, noise: self.noise.clone() }
    }

    fn same_universe(&self, other: &Self) -> bool {
        self.n == other.n
    }

    fn k(&self) -> usize {
        self.cliques.len()
    }
}

/// `k` disjoint bicliques `(U_q, V_q)` of `U × V` with `|U| = m`, `|V| = n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "BicliquePlanRepr", into = "BicliquePlanRepr")]
pub struct BicliquePlan {
    m: usize,
    n: usize,
    left_blocks: Vec<Vec<usize>>,
    right_blocks: Vec<Vec<usize>>,
    left_noise: Vec<usize>,
    right_noise: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct BicliquePlanRepr {
    m: usize,
    n: usize,
    left_blocks: Vec<Vec<usize>>,
    right_blocks: Vec<Vec<usize>>,
    #[serde(default)]
    left_noise: Option<Vec<usize>>,
    #[serde(default)]
    right_noise: Option<Vec<usize>>,
}

impl TryFrom<BicliquePlanRepr> for BicliquePlan {
    type Error = Error;
    fn try_from(r: BicliquePlanRepr) -> Result<Self> {
        let plan = BicliquePlan::new(r.m, r.n, r.left_blocks, r.right_blocks)?;
        for (given, derived) in [(r.left_noise, &plan.left_noise), (r.right_noise, &plan.right_noise)] {
            if let Some(mut given) = given {
                given.sort_unstable();
                if &given != derived {
                    return Err(Error::InvalidPlan("noise set is not the complement of the blocks".into()));
                }
            }
        }
        Ok(plan)
    }
}

impl From<BicliquePlan> for BicliquePlanRepr {
    fn from(p: BicliquePlan) -> Self {
        BicliquePlanRepr {
            m: p.m,
            n: p.n,
            left_blocks: p.left_blocks,
            right_blocks: p.right_blocks,
            left_noise: Some(p.left_noise),
            right_noise: Some(p.right_noise),
        }
    }
}

impl BicliquePlan {
    pub fn new(m: usize, n: usize, left_blocks: Vec<Vec<usize>>, right_blocks: Vec<Vec<usize>>) -> Result<Self> {
        if left_blocks.len() != right_blocks.len() {
            return Err(Error::InvalidPlan(format!(
                "{} left blocks but {} right blocks",
                left_blocks.len(),
                right_blocks.len()
            )));
        }
        if left_blocks.is_empty() {
            return Err(Error::InvalidPlan("a plan needs at least one biclique".into()));
        }
        let left_noise = check_subsets(m, &left_blocks, "left")?;
        let right_noise = check_subsets(n, &right_blocks, "right")?;
        Ok(Self {
            m,
            n,
            left_blocks: sorted_blocks(left_blocks),
            right_blocks: sorted_blocks(right_blocks),
            left_noise,
            right_noise,
        })
    }

    /// Consecutive blocks on each side followed by the noise vertices.
    pub fn from_sizes(left: &[usize], right: &[usize], left_noise: usize, right_noise: usize) -> Result<Self> {
        let m = left.iter().sum::<usize>() + left_noise;
        let n = right.iter().sum::<usize>() + right_noise;
        Self::new(m, n, contiguous(left), contiguous(right))
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn left_blocks(&self) -> &[Vec<usize>] {
        &self.left_blocks
    }

    pub fn right_blocks(&self) -> &[Vec<usize>] {
        &self.right_blocks
    }

    pub fn left_noise(&self) -> &[usize] {
        &self.left_noise
    }

    pub fn right_noise(&self) -> &[usize] {
        &self.right_noise
    }

    /// Left block `q`, or the left noise set for `q == k`.
    pub fn left(&self, q: usize) -> &[usize] {
        if q == self.left_blocks.len() {
            &self.left_noise
        } else {
            &self.left_blocks[q]
        }
    }

    /// Right block `q`, or the right noise set for `q == k`.
    pub fn right(&self, q: usize) -> &[usize] {
        if q == self.right_blocks.len() {
            &self.right_noise
        } else {
            &self.right_blocks[q]
        }
    }

    pub fn left_sizes(&self) -> Vec<usize> {
        self.left_blocks.iter().map(Vec::len).collect()
    }

    pub fn right_sizes(&self) -> Vec<usize> {
        self.right_blocks.iter().map(Vec::len).collect()
    }

    /// Smallest left block size.
    pub fn min_left(&self) -> usize {
        self.left_blocks.iter().map(Vec::len).min().unwrap_or(0)
    }

    /// Smallest right block size.
    pub fn min_right(&self) -> usize {
        self.right_blocks.iter().map(Vec::len).min().unwrap_or(0)
    }

    /// Side ratio `sqrt(m_q / n_q)` of block `q < k`.
    pub fn tau(&self, q: usize) -> f64 {
        (self.left_blocks[q].len() as f64 / self.right_blocks[q].len() as f64).sqrt()
    }

    /// Side ratio of the noise pair; undefined when the right noise set is empty.
    pub fn tau_noise(&self) -> Option<f64> {
        if self.right_noise.is_empty() {
            None
        } else {
            Some((self.left_noise.len() as f64 / self.right_noise.len() as f64).sqrt())
        }
    }

    /// Per-vertex labels on each side, `None` on noise.
    pub fn labels(&self) -> (Vec<Option<usize>>, Vec<Option<usize>>) {
        let mut left = vec![None; self.m];
        let mut right = vec![None; self.n];
        for q in 0..self.left_blocks.len() {
            for &u in &self.left_blocks[q] {
                left[u] = Some(q);
            }
            for &v in &self.right_blocks[q] {
                right[v] = Some(q);
            }
        }
        (left, right)
    }
}

impl Partition for BicliquePlan {
    fn lift_dim(&self) -> usize {
        self.m + self.n
    }

    fn lift(&self) -> DenseSymMatrix {
        let d = self.m + self.n;
        let mut data = vec![0.0; d * d];
        for (us, vs) in self.left_blocks.iter().zip(&self.right_blocks) {
            let members: Vec<(usize, f64)> = us
                .iter()
                .map(|&u| (u, 1.0 / (us.len() as f64).sqrt()))
                .chain(vs.iter().map(|&v| (self.m + v, 1.0 / (vs.len() as f64).sqrt())))
                .collect();
            for &(i, a) in &members {
                for &(j, b) in &members {
                    data[i * d + j] = a * b;
                }
            }
        }
        DenseSymMatrix::from_symmetric_unchecked(d, data)
    }

    fn canonical(&self) -> Self {
        let mut pairs: Vec<(Vec<usize>, Vec<usize>)> =
            self.left_blocks.iter().cloned().zip(self.right_blocks.iter().cloned()).collect();
        pairs.sort_by(|a, b| (a.0[0], a.1[0]).cmp(&(b.0[0], b.1[0])));
        let (left_blocks, right_blocks) = pairs.into_iter().unzip();
        Self { left_blocks, right_blocks, ..self.clone() }
    }

    fn same_universe(&self, other: &Self) -> bool {
        self.m == other.m && self.n == other.n
    }

    fn k(&self) -> usize {
        self.left_blocks.len()
    }
}
