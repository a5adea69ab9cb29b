//! Literal nested-loop semantics, the oracle for every other execution path.

use super::expr::{Expr, Source, Update};
use super::{finish, roles, Combiner};
use crate::algebra::Element;
use crate::tensor::{Storage, Tensor};
use crate::Result;

/// Positions of one tensor's indices inside the loop variable vector.
struct Bound<'t, T: Element> {
    tensor: &'t Tensor<T>,
    slots: Vec<usize>,
}

impl<T: Element> Bound<'_, T> {
    fn linear(&self, vals: &[usize]) -> usize {
        self.slots
            .iter()
            .zip(self.tensor.strides())
            .map(|(&s, st)| vals[s] * st)
            .sum()
    }

    /// Element at the current loop position; `None` for an absent sparse
    /// entry, which contributes no term.
    fn lookup(&self, vals: &[usize]) -> Option<T> {
        self.tensor.stored_at(self.linear(vals))
    }

    /// Bind loop variables from a stored entry. Returns false when the entry
    /// is off the diagonal its repeated indices select.
    fn bind(&self, index: usize, vals: &mut [usize], set: &mut [bool]) -> bool {
        let mut rest = index;
        for (&slot, &stride) in self.slots.iter().zip(self.tensor.strides()) {
            let i = rest / stride;
            rest %= stride;
            if set[slot] && vals[slot] != i {
                return false;
            }
            vals[slot] = i;
            set[slot] = true;
        }
        true
    }
}

fn bind_source<'t, T: Element>(src: &'t Source<'_, T>, order: &[char]) -> Option<Bound<'t, T>> {
    src.tensor().map(|tensor| Bound {
        tensor,
        slots: src
            .indices()
            .chars()
            .map(|c| order.iter().position(|&u| u == c).expect("index collected"))
            .collect(),
    })
}

/// Visit every assignment of the variables not yet set.
fn odometer(
    sizes: &[usize],
    set: &[bool],
    vals: &mut [usize],
    body: &mut dyn FnMut(&[usize]) -> Result<()>,
) -> Result<()> {
    let free: Vec<usize> = (0..sizes.len()).filter(|&i| !set[i]).collect();
    for &f in &free {
        vals[f] = 0;
    }
    loop {
        body(vals)?;
        let mut carried = true;
        for &f in free.iter().rev() {
            vals[f] += 1;
            if vals[f] < sizes[f] {
                carried = false;
                break;
            }
            vals[f] = 0;
        }
        if carried {
            return Ok(());
        }
    }
}

/// Execute `out[indices] (=|+=) expr` by looping over every unique index.
///
/// Stored entries of a sparse operand drive the outer loop; absent sparse
/// entries contribute nothing. Each term is `coefficient * f(a, b)` and terms
/// meeting at one output position are combined with the output structure's
/// addition.
pub fn execute_reference<A: Element, B: Element, C: Element>(
    out: &mut Tensor<C>,
    indices: &str,
    update: Update,
    expr: &Expr<'_, A, B, C>,
) -> Result<()> {
    let out_chars = roles::parse_indices(indices)?;
    let left_chars = roles::parse_indices(expr.left.indices())?;
    let right_chars = roles::parse_indices(expr.right.indices())?;
    let mut labelled: Vec<(&[char], &[usize])> = vec![(&out_chars, out.dims())];
    if let Some(t) = expr.left.tensor() {
        labelled.push((&left_chars, t.dims()));
    }
    if let Some(t) = expr.right.tensor() {
        labelled.push((&right_chars, t.dims()));
    }
    let sizes_by_char = roles::index_sizes(&labelled)?;
    let order = roles::unique(&[&out_chars, &left_chars, &right_chars]);
    let sizes: Vec<usize> = order.iter().map(|c| sizes_by_char[c]).collect();

    let left = bind_source(&expr.left, &order);
    let right = bind_source(&expr.right, &order);
    let out_slots: Vec<usize> = out_chars
        .iter()
        .map(|c| order.iter().position(|u| u == c).expect("index collected"))
        .collect();
    let out_strides = out.strides().to_vec();

    let combiner = Combiner::new(out.algebra(), expr.coefficient)?;
    let mut acc: Vec<Option<C>> = vec![None; out.len()];
    let unit_left = match &expr.left {
        Source::Unit(v) => Some(*v),
        Source::Tensor { .. } => None,
    };
    let unit_right = match &expr.right {
        Source::Unit(v) => Some(*v),
        Source::Tensor { .. } => None,
    };

    let mut body = |vals: &[usize]| -> Result<()> {
        let a = match (&left, unit_left) {
            (Some(b), _) => b.lookup(vals),
            (None, v) => v,
        };
        let b = match (&right, unit_right) {
            (Some(b), _) => b.lookup(vals),
            (None, v) => v,
        };
        if let (Some(a), Some(b)) = (a, b) {
            let term = combiner.scale((expr.kernel)(a, b));
            let pos: usize = out_slots
                .iter()
                .zip(&out_strides)
                .map(|(&s, st)| vals[s] * st)
                .sum();
            acc[pos] = Some(combiner.combine(acc[pos], term)?);
        }
        Ok(())
    };

    let mut vals = vec![0usize; order.len()];
    if let Some((entries, bound)) = sparse_entries(&left) {
        drive(entries, bound, &sizes, &mut vals, &mut body)?;
    } else if let Some((entries, bound)) = sparse_entries(&right) {
        drive(entries, bound, &sizes, &mut vals, &mut body)?;
    } else {
        let set = vec![false; order.len()];
        odometer(&sizes, &set, &mut vals, &mut body)?;
    }

    let contributions: Vec<(usize, C)> = acc
        .into_iter()
        .enumerate()
        .filter_map(|(i, v)| v.map(|v| (i, v)))
        .collect();
    finish(out, &out_chars, update, contributions)
}

fn sparse_entries<'b, 't, T: Element>(
    bound: &'b Option<Bound<'t, T>>,
) -> Option<(&'t [(usize, T)], &'b Bound<'t, T>)> {
    let b = bound.as_ref()?;
    match b.tensor.storage() {
        Storage::Sparse(entries) => Some((entries.as_slice(), b)),
        Storage::Dense(_) => None,
    }
}

fn drive<T: Element>(
    entries: &[(usize, T)],
    bound: &Bound<'_, T>,
    sizes: &[usize],
    vals: &mut [usize],
    body: &mut dyn FnMut(&[usize]) -> Result<()>,
) -> Result<()> {
    for &(index, _) in entries {
        let mut set = vec![false; sizes.len()];
        if bound.bind(index, vals, &mut set) {
            odometer(sizes, &set, vals, body)?;
        }
    }
    Ok(())
}
