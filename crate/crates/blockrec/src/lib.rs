//! Community detection in partially observed undirected networks.
//!
//! The adjacency matrix of a network whose nodes fall into disjoint,
//! densely connected groups is approximately a block diagonal matrix of
//! ones (BDO) plus a sparse matrix of disagreements (missing in-group
//! edges and spurious cross-group edges). This crate recovers that
//! structure by solving a trace-penalized convex decomposition with an
//! increasing-penalty ADMM solver ([`admipc`]), and ships the pieces
//! around it:
//!
//! - [`mat`]: dense symmetric matrices, observation masks, masked
//!   projections and norms;
//! - [`spectral`]: eigenvalue-thresholded PSD projection and the
//!   pluggable spectral backend it runs on;
//! - [`netgen`]: synthetic benchmark networks with planted clusters,
//!   partial observation sampling, and text-file I/O;
//! - [`rpca`]: robust-PCA baselines (M-IALM and its trace-bisection
//!   wrapper RPCAB);
//! - [`louvain`]: greedy modularity maximization baseline;
//! - [`eval`]: block-residual statistics, cluster extraction, and
//!   partition similarity measures;
//! - [`bench`]: the experiment grid harness behind the `blockrec` CLI.

pub mod admipc;
pub mod bench;
pub mod eval;
pub mod louvain;
pub mod mat;
pub mod netgen;
pub mod rpca;
pub mod spectral;

pub use admipc::{SolveResult, SolveStatus, SolverConfig};
pub use eval::{BlockStats, ExtractOutcome, SimilarityScores};
pub use mat::{DenseSymMatrix, ObservationMask};
pub use netgen::{GeneratorConfig, ObservedGraph, Partition};
pub use spectral::SpectralBackend;

/// Errors shared across the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("validation failed: {0}")]
    Validation(String),

    /// Spectral backend failed to converge; carries the residual it reached.
    #[error("spectral backend error: {message} (residual {residual:.3e})")]
    Spectral { message: String, residual: f64 },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
