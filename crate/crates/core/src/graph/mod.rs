//! Weighted complete and bipartite graphs, planted partitions, densities,
//! lifted feasible points, point-cloud similarities and exhaustive oracles.

pub mod density;
pub mod oracle;
pub mod plan;
pub mod points;
pub mod weights;

pub use density::{biclique_density, biclique_sum_density, clique_density, clique_sum_density};
pub use oracle::{
    brute_force_densest_kdb, brute_force_densest_kdb_capped, brute_force_densest_kdc,
    brute_force_densest_kdc_capped, BICLIQUE_ENUMERATION_CAP, CLIQUE_ENUMERATION_CAP,
};
pub use plan::{BicliquePlan, CliquePlan, Partition};
pub use points::{kmeans_cost, similarity_from_points, PointCloud};
pub use weights::{BipartiteWeights, SymmetricWeights};

use crate::linalg::DenseSymMatrix;

/// `lift_clique(plan) = Σ_q v_q v_qᵀ / r_q`.
pub fn lift_clique(plan: &CliquePlan) -> DenseSymMatrix {
    plan.lift()
}

/// `lift_biclique(plan) = Σ_q (u_q/‖u_q‖; v_q/‖v_q‖)(u_q/‖u_q‖; v_q/‖v_q‖)ᵀ`.
pub fn lift_biclique(plan: &BicliquePlan) -> DenseSymMatrix {
    plan.lift()
}
