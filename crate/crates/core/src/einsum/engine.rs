use serde::{Deserialize, Serialize};

use super::expr::{Expr, Update};
use super::planned::{execute_planned, ContractionReport, GridChoice, PlanRequest};
use super::reference::execute_reference;
use crate::algebra::Element;
use crate::planner::{Grid, PlannerConfig};
use crate::simgrid::VirtualWorld;
use crate::tensor::Tensor;
use crate::Result;

/// Execution path of an [`Engine`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Mode {
    Reference,
    Planned,
}

/// Runs expressions on a virtual world and keeps a report per planned
/// execution.
#[derive(Debug, Clone)]
pub struct Engine {
    world: VirtualWorld,
    config: PlannerConfig,
    memory: Option<f64>,
    mode: Mode,
    grid: Option<Grid>,
    reports: Vec<ContractionReport>,
}

impl Engine {
    pub fn new(world: VirtualWorld) -> Self {
        Engine {
            world,
            config: PlannerConfig::default(),
            memory: None,
            mode: Mode::Planned,
            grid: None,
            reports: Vec::new(),
        }
    }

    /// Planned execution on one process.
    pub fn local() -> Self {
        Self::new(VirtualWorld::local())
    }

    pub fn with_mode(mut self, mode: Mode) -> Self {
        self.mode = mode;
        self
    }

    pub fn with_config(mut self, config: PlannerConfig) -> Self {
        self.config = config;
        self
    }

    /// Per-process memory in elements.
    pub fn with_memory(mut self, memory: Option<f64>) -> Self {
        self.memory = memory;
        self
    }

    /// Force every planned execution onto `grid`.
    pub fn with_grid(mut self, grid: Option<Grid>) -> Self {
        self.grid = grid;
        self
    }

    pub fn world(&self) -> &VirtualWorld {
        &self.world
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn reports(&self) -> &[ContractionReport] {
        &self.reports
    }

    pub fn take_reports(&mut self) -> Vec<ContractionReport> {
        std::mem::take(&mut self.reports)
    }

    /// `out[indices] = expr`.
    pub fn assign<A: Element, B: Element, C: Element>(
        &mut self,
        out: &mut Tensor<C>,
        indices: &str,
        expr: Expr<'_, A, B, C>,
    ) -> Result<()> {
        self.execute(out, indices, Update::Assign, &expr)
    }

    /// `out[indices] += expr`.
    pub fn accumulate<A: Element, B: Element, C: Element>(
        &mut self,
        out: &mut Tensor<C>,
        indices: &str,
        expr: Expr<'_, A, B, C>,
    ) -> Result<()> {
        self.execute(out, indices, Update::Accumulate, &expr)
    }

    pub fn execute<A: Element, B: Element, C: Element>(
        &mut self,
        out: &mut Tensor<C>,
        indices: &str,
        update: Update,
        expr: &Expr<'_, A, B, C>,
    ) -> Result<()> {
        match self.mode {
            Mode::Reference => execute_reference(out, indices, update, expr),
            Mode::Planned => {
                let request = PlanRequest {
                    procs: self.world.procs(),
                    config: self.config,
                    memory: self.memory,
                    grid: self.grid.map_or(GridChoice::Auto, GridChoice::Fixed),
                };
                let report = execute_planned(out, indices, update, expr, &request)?;
                self.world.set_grid(report.plan.grid())?;
                self.reports.push(report);
                Ok(())
            }
        }
    }
}
