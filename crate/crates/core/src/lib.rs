//! Semidefinite relaxations for the densest k-disjoint-clique and densest
//! k-disjoint-biclique problems.
//!
//! The crate covers the full experimental pipeline: planted random instances
//! ([`planted`]), the two relaxations and a dense first-order solver
//! ([`sdp`]), rounding back to partitions ([`recovery`]), explicit dual
//! certificates for the planted solution ([`certificates`]) and Monte-Carlo
//! sweeps ([`experiments`]).

pub mod error;
pub mod graph;
pub mod linalg;

pub use error::{Error, Result};
pub mod planted;
pub mod sdp;
pub mod recovery;
pub mod certificates;
pub mod instance;
pub mod experiments;
