//! Point clouds and the similarity weights `W_ij = 1 - ‖x_i - x_j‖²`.

use std::io::Read;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::plan::CliquePlan;
use crate::graph::weights::SymmetricWeights;
use crate::linalg::DenseSymMatrix;

/// Nonempty list of points sharing one dimension.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointCloud {
    points: Vec<Vec<f64>>,
}

impl PointCloud {
    pub fn new(points: Vec<Vec<f64>>) -> Result<Self> {
        let first = points.first().ok_or_else(|| Error::Domain("point cloud is empty".into()))?;
        let dim = first.len();
        if dim == 0 {
            return Err(Error::Domain("points must have at least one coordinate".into()));
        }
        for (i, p) in points.iter().enumerate() {
            if p.len() != dim {
                return Err(Error::Domain(format!("point {i} has dimension {}, expected {dim}", p.len())));
            }
            if p.iter().any(|x| !x.is_finite()) {
                return Err(Error::Domain(format!("point {i} has a non-finite coordinate")));
            }
        }
        Ok(Self { points })
    }

    /// Reads headerless CSV, one point per row. Lines starting with `#` are skipped.
    pub fn from_csv<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(false)
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .flexible(true)
            .from_reader(reader);
        let mut points = Vec::new();
        for (line, record) in rdr.records().enumerate() {
            let record = record?;
            let point = record
                .iter()
                .map(|field| {
                    field
                        .parse::<f64>()
                        .map_err(|_| Error::Parse(format!("row {}: cannot parse {field:?} as a number", line + 1)))
                })
                .collect::<Result<Vec<f64>>>()?;
            points.push(point);
        }
        Self::new(points)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.points[0].len()
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn max_pairwise_distance(&self) -> f64 {
        let mut best = 0.0f64;
        for i in 0..self.len() {
            for j in (i + 1)..self.len() {
                best = best.max(squared_distance(&self.points[i], &self.points[j]));
            }
        }
        best.sqrt()
    }
}

fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Similarity weights `1 - ‖x_i - x_j‖²`.
///
/// With `rescale`, coordinates are first divided by the largest pairwise
/// distance so that it becomes exactly one; otherwise a largest distance
/// above one is an error.
pub fn similarity_from_points(cloud: &PointCloud, rescale: bool) -> Result<SymmetricWeights> {
    let max_dist = cloud.max_pairwise_distance();
    let scale = if rescale {
        if max_dist > 0.0 { 1.0 / max_dist } else { 1.0 }
    } else {
        if max_dist * max_dist > 1.0 + 1e-12 {
            return Err(Error::Domain(format!(
                "largest pairwise distance {max_dist} exceeds 1; enable rescaling"
            )));
        }
        1.0
    };
    let pts: Vec<Vec<f64>> = cloud.points.iter().map(|p| p.iter().map(|x| x * scale).collect()).collect();
    let n = pts.len();
    let mut w = DenseSymMatrix::zeros(n);
    for i in 0..n {
        w.set_pair(i, i, 1.0);
        for j in (i + 1)..n {
            // Rescaled extremes can land a rounding error below zero.
            let value = (1.0 - squared_distance(&pts[i], &pts[j])).clamp(0.0, 1.0);
            w.set_pair(i, j, value);
        }
    }
    SymmetricWeights::new(w)
}

/// k-means cost `Σ_q Σ_{i ∈ C_q} ‖x_i - c_q‖²` with `c_q` the centroid of clique `q`.
pub fn kmeans_cost(cloud: &PointCloud, plan: &CliquePlan) -> Result<f64> {
    if plan.n() != cloud.len() {
        return Err(Error::Shape(format!("plan covers {} points, cloud has {}", plan.n(), cloud.len())));
    }
    let dim = cloud.dim();
    let mut cost = 0.0;
    for c in plan.cliques() {
        let mut center = vec![0.0; dim];
        for &i in c {
            for (m, x) in center.iter_mut().zip(&cloud.points[i]) {
                *m += x;
            }
        }
        center.iter_mut().for_each(|m| *m /= c.len() as f64);
        cost += c.iter().map(|&i| squared_distance(&cloud.points[i], &center)).sum::<f64>();
    }
    Ok(cost)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_points_give_all_ones() {
        let cloud = PointCloud::new(vec![vec![0.3, 0.1]; 4]).unwrap();
        let w = similarity_from_points(&cloud, false).unwrap();
        assert!(w.matrix().as_slice().iter().all(|&x| x == 1.0));
        let w = similarity_from_points(&cloud, true).unwrap();
        assert!(w.matrix().as_slice().iter().all(|&x| x == 1.0));
    }

    #[test]
    fn unit_distance_gives_zero_weight() {
        let cloud = PointCloud::new(vec![vec![0.0], vec![1.0]]).unwrap();
        let w = similarity_from_points(&cloud, false).unwrap();
        assert_eq!(w.get(0, 1), 0.0);
    }

    #[test]
    fn large_spread_needs_rescale() {
        let cloud = PointCloud::new(vec![vec![0.0, 0.0], vec![3.0, 4.0], vec![1.0, 1.0]]).unwrap();
        assert!(similarity_from_points(&cloud, false).is_err());
        let w = similarity_from_points(&cloud, true).unwrap();
        assert!(w.get(0, 1).abs() < 1e-12);
    }

    #[test]
    fn csv_parsing() {
        let text = "# x,y\n0.1, 0.2\n0.3,0.4\n";
        let cloud = PointCloud::from_csv(text.as_bytes()).unwrap();
        assert_eq!(cloud.len(), 2);
        assert_eq!(cloud.points()[1], vec![0.3, 0.4]);
        assert!(PointCloud::from_csv("1,2\n3\n".as_bytes()).is_err());
        assert!(PointCloud::from_csv("1,abc\n".as_bytes()).is_err());
        assert!(PointCloud::from_csv("".as_bytes()).is_err());
    }
}
