//! Processor-grid selection for sparse-times-dense matrix multiplication.
//!
//! Every contraction handled by the planned executor folds into
//! `C (m x n) = A (m x k, z stored entries) * B (k x n)`. A grid
//! `[p1, p2, p3]` splits `k` over `p1`, `m` over `p2` and `n` over `p3`:
//!
//! * the `A` block `(x1, x2)` is replicated along `p3`,
//! * the `B` block `(x1, x3)` is replicated along `p2`,
//! * the `C` block `(x2, x3)` is reduced along `p1`.
//!
//! A tensor only moves when its replication dimension exceeds one, so the
//! layout cost of a grid is the sum of the per-block sizes of the tensors
//! that move. With two unit dimensions this is the full replication of one
//! tensor, with one unit dimension it is a two-tensor SUMMA variant, and
//! otherwise it is the three-term replicated cost.

mod bound;

use serde::{Deserialize, Serialize};

pub use bound::{lower_bound, BoundCase, BoundInputs};

use crate::{Error, Result};

/// Processor grid `[p1, p2, p3]`.
pub type Grid = [usize; 3];

/// Matrix multiplication a contraction reduces to.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProblemShape {
    pub m: usize,
    pub k: usize,
    pub n: usize,
    /// Stored entries of the sparse operand.
    pub z: usize,
    /// Virtual process count.
    pub p: usize,
    /// Per-process memory in elements; `None` is unbounded.
    pub memory: Option<f64>,
}

impl ProblemShape {
    pub fn new(m: usize, k: usize, n: usize, z: usize, p: usize) -> Self {
        ProblemShape {
            m,
            k,
            n,
            z,
            p,
            memory: None,
        }
    }

    pub fn with_memory(mut self, memory: Option<f64>) -> Self {
        self.memory = memory;
        self
    }

    fn memory_limit(&self) -> f64 {
        self.memory.unwrap_or(f64::INFINITY)
    }
}

/// Constant prefactors applied to the cost terms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Prefactors {
    pub sparse: f64,
    pub operand: f64,
    pub output: f64,
    pub redistribution: f64,
}

impl Default for Prefactors {
    fn default() -> Self {
        Prefactors {
            sparse: 1.0,
            operand: 1.0,
            output: 1.0,
            redistribution: 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlannerConfig {
    /// Load-imbalance factor `h` in the memory constraint.
    pub balance: f64,
    /// Charge the cost of redistributing every tensor before the multiply.
    pub charge_redistribution: bool,
    pub prefactors: Prefactors,
}

impl Default for PlannerConfig {
    fn default() -> Self {
        PlannerConfig {
            balance: 2.0,
            charge_redistribution: true,
            prefactors: Prefactors::default(),
        }
    }
}

/// Predicted costs of one grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CostRecord {
    pub grid: Grid,
    #[serde(rename = "F")]
    pub flops: f64,
    #[serde(rename = "W_redist")]
    pub w_redist: f64,
    /// Set when two grid dimensions are one.
    #[serde(rename = "W_1D")]
    pub w_1d: Option<f64>,
    /// Set when exactly one grid dimension is one.
    #[serde(rename = "W_2D")]
    pub w_2d: Option<f64>,
    /// Three-term replicated cost, defined for every grid.
    #[serde(rename = "W_3D")]
    pub w_3d: f64,
    /// Cost of the tensors that actually move on this grid.
    #[serde(rename = "W_layout")]
    pub w_layout: f64,
    #[serde(rename = "W_total")]
    pub w_total: f64,
    pub feasible: bool,
    /// Per-process block sizes `[A, B, C]` before prefactors.
    pub blocks: [f64; 3],
}

/// All ordered factorizations of `p` into three factors, lexicographic.
pub fn enumerate_grids(p: usize) -> Vec<Grid> {
    let divisors: Vec<usize> = (1..=p).filter(|d| p.is_multiple_of(*d)).collect();
    let mut out = Vec::new();
    for &p1 in &divisors {
        for &p2 in &divisors {
            if (p / p1).is_multiple_of(p2) {
                out.push([p1, p2, p / (p1 * p2)]);
            }
        }
    }
    out
}

fn ceil_div(a: usize, b: usize) -> usize {
    a.div_ceil(b)
}

/// Per-process block sizes `[A, B, C]` on `grid`: the expected share of
/// `z` for the sparse operand, and ceil-based block extents for the dense
/// ones.
pub fn block_sizes(shape: &ProblemShape, grid: Grid) -> [f64; 3] {
    let [p1, p2, p3] = grid;
    let a = (shape.z as f64 / (p1 * p2) as f64).ceil();
    let b = (ceil_div(shape.k, p1) * ceil_div(shape.n, p3)) as f64;
    let c = (ceil_div(shape.m, p2) * ceil_div(shape.n, p3)) as f64;
    [a, b, c]
}

pub fn predict_costs(shape: &ProblemShape, grid: Grid, config: &PlannerConfig) -> CostRecord {
    let [p1, p2, p3] = grid;
    let pre = config.prefactors;
    let [a, b, c] = block_sizes(shape, grid);
    let (sa, sb, sc) = (pre.sparse * a, pre.operand * b, pre.output * c);
    let w_3d = sa + sb + sc;
    let moving = |on: bool, w: f64| if on { w } else { 0.0 };
    let w_layout = moving(p3 > 1, sa) + moving(p2 > 1, sb) + moving(p1 > 1, sc);
    let unit_dims = grid.iter().filter(|&&d| d == 1).count();
    let p = shape.p as f64;
    let (m, k, n, z) = (
        shape.m as f64,
        shape.k as f64,
        shape.n as f64,
        shape.z as f64,
    );
    let w_redist = pre.redistribution * (z + k * n + m * n) / p;
    let charged = if config.charge_redistribution {
        w_redist
    } else {
        0.0
    };
    let needed = (config.balance * a).min(b).min(c);
    CostRecord {
        grid,
        flops: n * z / p,
        w_redist,
        w_1d: (unit_dims >= 2).then_some(w_layout),
        w_2d: (unit_dims == 1).then_some(w_layout),
        w_3d,
        w_layout,
        w_total: charged + w_layout,
        feasible: shape.memory_limit() >= needed,
        blocks: [a, b, c],
    }
}

/// The selected grid with its predicted costs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContractionPlan {
    pub shape: ProblemShape,
    #[serde(flatten)]
    pub cost: CostRecord,
    pub lower_bound: f64,
    /// Minimum of the three-term cost over feasible grids.
    #[serde(rename = "W_simplified")]
    pub w_simplified: f64,
    pub simplified_grid: Grid,
}

impl ContractionPlan {
    pub fn grid(&self) -> Grid {
        self.cost.grid
    }

    /// Plan on a caller-chosen grid, bypassing selection.
    pub fn fixed(shape: &ProblemShape, grid: Grid, config: &PlannerConfig) -> Result<Self> {
        if grid.iter().product::<usize>() != shape.p || grid.contains(&0) {
            return Err(Error::PlanMismatch(format!(
                "grid {grid:?} does not multiply to {} processes",
                shape.p
            )));
        }
        let cost = predict_costs(shape, grid, config);
        Ok(ContractionPlan {
            shape: *shape,
            cost,
            lower_bound: lower_bound(shape),
            w_simplified: cost.w_3d,
            simplified_grid: grid,
        })
    }
}

/// Pick the feasible grid with the smallest total cost. Ties go to the
/// lexicographically smallest grid.
pub fn choose_plan(shape: &ProblemShape, config: &PlannerConfig) -> Result<ContractionPlan> {
    let mut best: Option<CostRecord> = None;
    let mut simplified: Option<(f64, Grid)> = None;
    for grid in enumerate_grids(shape.p.max(1)) {
        let cost = predict_costs(shape, grid, config);
        if !cost.feasible {
            continue;
        }
        if best.is_none_or(|b| cost.w_total < b.w_total) {
            best = Some(cost);
        }
        if simplified.is_none_or(|(w, _)| cost.w_3d < w) {
            simplified = Some((cost.w_3d, grid));
        }
    }
    let cost = best.ok_or(Error::NoFeasibleGrid {
        memory: shape.memory_limit(),
    })?;
    let (w_simplified, simplified_grid) = simplified.expect("set together with best");
    Ok(ContractionPlan {
        shape: *shape,
        cost,
        lower_bound: lower_bound(shape),
        w_simplified,
        simplified_grid,
    })
}
