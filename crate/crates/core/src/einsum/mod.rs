//! Einstein-notation expressions over tensors of any structure.
//!
//! An expression assigns or accumulates into an indexed output:
//!
//! ```
//! use semitensor::{standard_ring, Engine, Expr, Tensor};
//!
//! let r = standard_ring();
//! let mut a = Tensor::dense(&[2, 2], &r)?;
//! a.write(&[(0, 1.0), (3, 1.0)], false)?;
//! let mut b = Tensor::dense(&[2, 2], &r)?;
//! b.write(&[(0, 1.0), (1, 2.0), (2, 3.0), (3, 4.0)], false)?;
//! let mut c = Tensor::dense(&[2, 2], &r)?;
//! Engine::local().assign(&mut c, "ij", Expr::mul(&a, "ik", &b, "kj")?)?;
//! assert_eq!(c.to_values()?, b.to_values()?);
//! # Ok::<(), semitensor::Error>(())
//! ```
//!
//! Indices absent from the output are summed with the output structure's
//! addition, output indices absent from every operand replicate the result,
//! and a character repeated within one tensor selects its diagonal.
//!
//! [`execute_reference`] runs the literal nested loops. [`execute_planned`]
//! folds the expression into a sparse-times-dense matrix product, runs it on
//! the blocks of a virtual processor grid and replays the schedule to count
//! communicated words. Both produce the same output.

mod engine;
mod expr;
mod planned;
mod reference;
mod roles;
mod transform;

pub use engine::{Engine, Mode};
pub use expr::{Expr, Update};
pub use planned::{execute_planned, ContractionReport, GridChoice, PlanRequest};
pub use reference::execute_reference;
pub use roles::{classify_indices, IndexInfo, IndexRole, Signature};
pub use transform::{transform1, transform2, transform3};

use crate::algebra::{Algebra, BinOp, Element};
use crate::tensor::{Reset, Tensor};
use crate::{Error, Result};

/// Output-side scalar operations: coefficient scaling and term combination.
pub(crate) struct Combiner<C: Element> {
    add: Option<BinOp<C>>,
    mul: Option<BinOp<C>>,
    coefficient: Option<C>,
    missing_add: Error,
}

impl<C: Element> Combiner<C> {
    pub(crate) fn new(algebra: &Algebra<C>, coefficient: Option<C>) -> Result<Self> {
        let mul = match coefficient {
            Some(_) => Some(algebra.mul_op()?),
            None => None,
        };
        Ok(Combiner {
            add: algebra.add_op().ok(),
            mul,
            coefficient,
            missing_add: algebra.missing("addition"),
        })
    }

    pub(crate) fn scale(&self, v: C) -> C {
        match (&self.mul, self.coefficient) {
            (Some(mul), Some(c)) => mul(c, v),
            _ => v,
        }
    }

    pub(crate) fn combine(&self, acc: Option<C>, v: C) -> Result<C> {
        match acc {
            None => Ok(v),
            Some(a) => match &self.add {
                Some(add) => Ok(add(a, v)),
                None => Err(self.missing_add.clone()),
            },
        }
    }
}

fn has_repeat(chars: &[char]) -> bool {
    chars
        .iter()
        .enumerate()
        .any(|(i, c)| chars[i + 1..].contains(c))
}

/// Write combined per-position results into the output. `contributions` is
/// sorted by linear index with one entry per position.
pub(crate) fn finish<C: Element>(
    out: &mut Tensor<C>,
    out_chars: &[char],
    update: Update,
    contributions: Vec<(usize, C)>,
) -> Result<()> {
    match update {
        Update::Accumulate => {
            let add = out.algebra().add_op()?;
            let merged = contributions
                .into_iter()
                .map(|(i, v)| (i, out.stored_at(i).map_or(v, |old| add(old, v))))
                .collect();
            out.commit(Reset::Nothing, merged)
        }
        Update::Assign if has_repeat(out_chars) => {
            let groups: Vec<Vec<usize>> = {
                let mut seen: Vec<char> = Vec::new();
                let mut groups = Vec::new();
                for &c in out_chars {
                    if !seen.contains(&c) {
                        seen.push(c);
                        let positions: Vec<usize> = out_chars
                            .iter()
                            .enumerate()
                            .filter(|(_, &x)| x == c)
                            .map(|(i, _)| i)
                            .collect();
                        if positions.len() > 1 {
                            groups.push(positions);
                        }
                    }
                }
                groups
            };
            let on_diagonal = move |tuple: &[usize]| {
                groups
                    .iter()
                    .all(|g| g.iter().all(|&p| tuple[p] == tuple[g[0]]))
            };
            out.commit(Reset::Where(&on_diagonal), contributions)
        }
        Update::Assign => out.commit(Reset::Everything, contributions),
    }
}


#[cfg(test)]
mod tests;
