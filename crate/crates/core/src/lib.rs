//! Sparse and dense tensor algebra over user-defined algebraic structures.
//!
//! * [`algebra`]: structures (monoid, group, semiring, ring), element
//!   functions and transforms.
//! * [`tensor`]: dense and coordinate-sparse tensors with symmetry tags.
//! * [`einsum`]: index-notation expressions with a nested-loop reference
//!   executor and a matrix-multiplication based planned executor.
//! * [`planner`]: processor-grid enumeration and communication cost model.
//! * [`simgrid`]: virtual processor grids, cyclic ownership and replay of the
//!   block schedule with word counting.
//! * [`apps`]: Jacobi, Bellman-Ford, path doubling, MP3 energy.

pub mod algebra;
pub mod apps;
pub mod einsum;
mod error;
pub mod planner;
pub mod simgrid;
pub mod tensor;

pub use algebra::{
    integer_ring, path_semiring, standard_ring, tropical_i32, tropical_semiring, Algebra,
    BinaryFunction, BinaryTransform, Element, PathElement, StructureKind, TernaryTransform,
    UnaryFunction, UnaryTransform,
};
pub use einsum::{Engine, Expr, Update};
pub use error::{Error, Result};
pub use planner::{ContractionPlan, CostRecord, PlannerConfig, ProblemShape};
pub use simgrid::{SimReport, VirtualWorld};
pub use tensor::{Layout, Symmetry, Tensor};
