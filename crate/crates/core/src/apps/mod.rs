//! Application drivers written against the public tensor interface: a
//! Jacobi solver, single-source and all-pairs shortest paths over min-plus
//! structures, and a third-order perturbation energy.
//!
//! Every driver takes an [`Engine`](crate::Engine), so the same code runs on
//! the reference executor or the planned one on any virtual world.

mod graphs;
mod jacobi;
mod mp3;

pub use graphs::{
    apsp_dense_doubling, apsp_tiskin, bellman_ford, floyd_warshall_oracle, random_digraph,
    TiskinOutcome,
};
pub use jacobi::{jacobi, JacobiOutcome};
pub use mp3::{mp3_energy, Mp3Inputs};
