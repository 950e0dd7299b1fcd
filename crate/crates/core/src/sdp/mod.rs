//! The clique and biclique relaxations, their projections, a first-order
//! solver and an SDPA exporter.

pub mod problem;
pub mod projection;
pub mod sdpa;
pub mod solver;

pub use problem::{
    assemble_biclique_sdp, assemble_clique_sdp, linear_residuals, residuals, Residuals, SdpProblem, Variant,
};
pub use projection::{project_polyhedral, project_psd, PolyhedralProjector};
pub use sdpa::{export_sdpa, to_sdpa_string};
pub use solver::{solve, SolverOptions, SolverResult, SolverStatus, TraceRow};
