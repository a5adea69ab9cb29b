//! Simulated process grids.
//!
//! Nothing here moves data between real processes. A [`VirtualWorld`] only
//! records how many processes a computation pretends to use; ownership and
//! communication are derived combinatorially from index residues.

mod assign;
mod replay;

use serde::{Deserialize, Serialize};

pub use assign::{
    balance_report, balls_into_bins_bound, column_load_prediction, cyclic_assign, randomize_indices,
    Assignment, BalanceStats, GridMap, IndexPermutation,
};
pub use replay::{replay_summa, PhaseWords, SummaInput};

use crate::planner::Grid;
use crate::{Error, Result};

/// A set of virtual processes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VirtualWorld {
    procs: usize,
    grid: Grid,
    seed: u64,
}

impl VirtualWorld {
    /// Single-process world.
    pub fn local() -> Self {
        VirtualWorld {
            procs: 1,
            grid: [1, 1, 1],
            seed: 0,
        }
    }

    pub fn new(procs: usize) -> Result<Self> {
        if procs == 0 {
            return Err(Error::PlanMismatch("a world needs at least one process".into()));
        }
        Ok(VirtualWorld {
            procs,
            grid: [1, 1, procs],
            seed: 0,
        })
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn procs(&self) -> usize {
        self.procs
    }

    /// Grid used by the most recent planned operation.
    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn set_grid(&mut self, grid: Grid) -> Result<()> {
        if grid.iter().product::<usize>() != self.procs {
            return Err(Error::PlanMismatch(format!(
                "grid {grid:?} does not multiply to {} processes",
                self.procs
            )));
        }
        self.grid = grid;
        Ok(())
    }
}

impl Default for VirtualWorld {
    fn default() -> Self {
        Self::local()
    }
}

/// Per-process outcome of a replayed multiplication.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimReport {
    pub grid: Grid,
    /// Stored entries of the sparse operand each process multiplies with.
    pub nnz: Vec<usize>,
    pub sent: Vec<u64>,
    pub received: Vec<u64>,
    /// Per-process cost: for each phase the larger of sent and received,
    /// summed over phases.
    pub words: Vec<u64>,
    pub max_nnz: usize,
    pub mean_nnz: f64,
    pub balance_ratio: f64,
    /// Sum of received words over all processes.
    pub total_words: u64,
    /// Largest per-process cost, the measured counterpart of the model's `W`.
    pub max_words: u64,
    pub phases: PhaseWords,
    /// Copied from the plan when one was used.
    pub predicted_w: Option<f64>,
}

impl SimReport {
    pub fn procs(&self) -> usize {
        self.nnz.len()
    }
}
