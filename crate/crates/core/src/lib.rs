//! # persym
//!
//! 0-dimensional persistence diagrams of vertex-filtered graphs, compared in
//! two ways:
//!
//! * the exact bottleneck distance ([`bottleneck::bottleneck_distance`]);
//! * a fast surrogate that warps each cornerpoint into the complex plane
//!   ([`warp`]), takes the first `k` elementary symmetric functions of the
//!   warped points and rescales them ([`symfun`]), then compares the resulting
//!   vectors with an `l1`-type distance.
//!
//! The [`retrieval`] module turns either comparison into distance matrices and
//! evaluates leave-one-out nearest-neighbor classification on them.
//!
//! ```
//! use persym::{vectorize, vector_distance, bottleneck_distance, PersistenceDiagram, Transform};
//!
//! let a = PersistenceDiagram::from_pairs(&[(0.0, 1.0), (0.2, 0.3)]).unwrap();
//! let b = PersistenceDiagram::from_pairs(&[(0.0, 0.8)]).unwrap();
//!
//! let exact = bottleneck_distance(&a, &b).unwrap();
//! assert!((exact - 0.2).abs() < 1e-12);
//!
//! let va = vectorize(&a, Transform::R, 10).unwrap();
//! let vb = vectorize(&b, Transform::R, 10).unwrap();
//! assert!(vector_distance(&va, &vb).unwrap() > 0.0);
//! ```

// `!(a < b)` deliberately rejects NaN as well
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bottleneck;
pub mod diagram;
pub mod error;
pub mod exec;
pub mod ph;
pub mod retrieval;
pub mod symfun;
pub mod synthetic;
pub mod warp;

pub use bottleneck::{bottleneck_distance, brute_force_bottleneck, point_cost, MatchingInstance};
pub use diagram::{Cornerpoint, PersistenceDiagram};
pub use error::{Error, Result};
pub use exec::Execution;
pub use ph::{
    downsample_blocks, grid_to_graph, multiplicity_oracle, persistent_betti_0, zero_dim_persistence, Connectivity,
    FilteredGraph, Grid,
};
pub use retrieval::{
    combine_matrices, compute_distance_matrix, evaluate, leave_one_out_knn, leave_one_out_nn, optimize_weights,
    retrieval_accuracy, DistanceMatrix, DistanceMethod, EvaluationReport, Items, Prediction,
};
pub use symfun::{elementary_symmetric, renormalize, vector_distance, vectorize, SymVector, DEFAULT_K};
pub use warp::{warp_diagram, warp_r, warp_t, Transform, WarpedMultiset};

/// Vectorizes a batch of diagrams; output order follows input order.
pub fn vectorize_all(
    diagrams: &[PersistenceDiagram],
    transform: Transform,
    k: usize,
    exec: Execution,
) -> Result<Vec<SymVector>> {
    exec.try_map(diagrams, |d| vectorize(d, transform, k))
}
