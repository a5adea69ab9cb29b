use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use super::expr::{Expr, Source, Update};
use super::{finish, roles, Combiner};
use crate::algebra::{BinOp, Element};
use crate::planner::{choose_plan, ContractionPlan, Grid, PlannerConfig, ProblemShape};
use crate::simgrid::{replay_summa, SimReport, SummaInput};
use crate::tensor::Storage;
use crate::tensor::Tensor;
use crate::{Error, Result};

/// How the planned executor picks its processor grid.
#[derive(Debug, Clone, PartialEq)]
pub enum GridChoice {
    /// Minimize the predicted cost.
    Auto,
    /// Use this grid; its product must equal the process count.
    Fixed(Grid),
    /// Use a precomputed plan; its shape must match the folded problem.
    Plan(ContractionPlan),
}

/// Settings of one planned execution.
#[derive(Debug, Clone, PartialEq)]
pub struct PlanRequest {
    pub procs: usize,
    pub config: PlannerConfig,
    /// Per-process memory in elements; `None` is unbounded.
    pub memory: Option<f64>,
    pub grid: GridChoice,
}

impl Default for PlanRequest {
    fn default() -> Self {
        PlanRequest {
            procs: 1,
            config: PlannerConfig::default(),
            memory: None,
            grid: GridChoice::Auto,
        }
    }
}

/// What the planned executor did for one expression.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContractionReport {
    /// Index signature such as `"ik,kj->ij"`.
    pub label: String,
    pub shape: ProblemShape,
    pub plan: ContractionPlan,
    pub sim: SimReport,
    /// The right operand played the sparse role.
    pub swapped: bool,
}

fn row_major_strides(dims: &[usize]) -> Vec<usize> {
    let mut strides = vec![1; dims.len()];
    for i in (0..dims.len().saturating_sub(1)).rev() {
        strides[i] = strides[i + 1] * dims[i + 1];
    }
    strides
}

/// Operand in the index space of its unique characters, entries sorted.
struct Operand<T: Element> {
    chars: Vec<char>,
    dims: Vec<usize>,
    entries: Vec<(usize, T)>,
    sparse: bool,
    zero: Option<T>,
    add: Option<BinOp<T>>,
}

impl<T: Element> Operand<T> {
    fn from_source(src: &Source<'_, T>) -> Result<Self> {
        let tensor = match src {
            Source::Unit(v) => {
                return Ok(Operand {
                    chars: Vec::new(),
                    dims: Vec::new(),
                    entries: vec![(0, *v)],
                    sparse: false,
                    zero: None,
                    add: None,
                })
            }
            Source::Tensor { tensor, .. } => *tensor,
        };
        let raw = roles::parse_indices(src.indices())?;
        let entries: Vec<(usize, T)> = match tensor.storage() {
            Storage::Dense(values) => values.iter().copied().enumerate().collect(),
            Storage::Sparse(entries) => entries.clone(),
        };
        let chars = roles::unique(&[&raw]);
        let mut op = Operand {
            dims: chars
                .iter()
                .map(|c| tensor.dims()[raw.iter().position(|x| x == c).expect("present")])
                .collect(),
            chars,
            entries,
            sparse: tensor.is_sparse(),
            zero: tensor.algebra().add_id(),
            add: tensor.algebra().add_op().ok(),
        };
        if op.chars.len() < raw.len() {
            op.gather_diagonal(&raw, tensor.strides());
        }
        Ok(op)
    }

    fn gather_diagonal(&mut self, raw: &[char], raw_strides: &[usize]) {
        let strides = row_major_strides(&self.dims);
        let slot: Vec<usize> = raw
            .iter()
            .map(|c| self.chars.iter().position(|x| x == c).expect("present"))
            .collect();
        let mut vals = vec![0usize; self.chars.len()];
        let mut kept = Vec::new();
        'entries: for &(index, v) in &self.entries {
            let mut rest = index;
            let mut set = vec![false; self.chars.len()];
            for (&s, &stride) in slot.iter().zip(raw_strides) {
                let i = rest / stride;
                rest %= stride;
                if set[s] && vals[s] != i {
                    continue 'entries;
                }
                vals[s] = i;
                set[s] = true;
            }
            let lin: usize = vals.iter().zip(&strides).map(|(v, s)| v * s).sum();
            kept.push((lin, v));
        }
        kept.sort_unstable_by_key(|e| e.0);
        self.entries = kept;
    }

    fn tuple_into(&self, strides: &[usize], mut index: usize, out: &mut [usize]) {
        for (o, &s) in out.iter_mut().zip(strides) {
            *o = index / s;
            index %= s;
        }
    }

    /// Sum away `drop` with this operand's own addition.
    fn reduce(self, drop: &[char]) -> Self {
        let add = self.add.clone().expect("caller checked addition");
        let keep: Vec<usize> = (0..self.chars.len())
            .filter(|&i| !drop.contains(&self.chars[i]))
            .collect();
        let dims: Vec<usize> = keep.iter().map(|&i| self.dims[i]).collect();
        let new_strides = row_major_strides(&dims);
        let strides = row_major_strides(&self.dims);
        let mut tuple = vec![0usize; self.chars.len()];
        let mut sums: BTreeMap<usize, T> = BTreeMap::new();
        for &(index, v) in &self.entries {
            self.tuple_into(&strides, index, &mut tuple);
            let lin: usize = keep
                .iter()
                .zip(&new_strides)
                .map(|(&i, s)| tuple[i] * s)
                .sum();
            sums.entry(lin)
                .and_modify(|acc| *acc = add(*acc, v))
                .or_insert(v);
        }
        Operand {
            chars: keep.iter().map(|&i| self.chars[i]).collect(),
            dims,
            entries: sums.into_iter().collect(),
            ..self
        }
    }

    /// Replicate along new trailing characters.
    fn broadcast(mut self, extra: &[(char, usize)]) -> Self {
        let span: usize = extra.iter().map(|e| e.1).product();
        let mut entries = Vec::with_capacity(self.entries.len() * span);
        for &(index, v) in &self.entries {
            entries.extend((0..span).map(|o| (index * span + o, v)));
        }
        self.entries = entries;
        for &(c, d) in extra {
            self.chars.push(c);
            self.dims.push(d);
        }
        self
    }

    /// `(row, col, value)` of every entry under the given folding.
    fn fold(&self, rows: &[char], cols: &[char], sizes: &BTreeMap<char, usize>) -> Vec<(usize, usize, T)> {
        let strides = row_major_strides(&self.dims);
        let weights = |group: &[char]| -> Vec<(usize, usize)> {
            let dims: Vec<usize> = group.iter().map(|c| sizes[c]).collect();
            let st = row_major_strides(&dims);
            group
                .iter()
                .zip(st)
                .map(|(c, s)| (self.chars.iter().position(|x| x == c).expect("present"), s))
                .collect()
        };
        let (rw, cw) = (weights(rows), weights(cols));
        let mut tuple = vec![0usize; self.chars.len()];
        self.entries
            .iter()
            .map(|&(index, v)| {
                self.tuple_into(&strides, index, &mut tuple);
                let r = rw.iter().map(|&(i, s)| tuple[i] * s).sum();
                let c = cw.iter().map(|&(i, s)| tuple[i] * s).sum();
                (r, c, v)
            })
            .collect()
    }
}

/// Execute `out[indices] (=|+=) expr` as a folded sparse-times-dense product
/// on the grid chosen by `request`, and replay the block schedule.
///
/// Diagonals are gathered first. Indices summed within one operand are
/// reduced with that operand's addition when both it and the output have
/// one. Otherwise they become contracted indices by replicating the other
/// operand. The remaining
/// indices fold into rows `(batch, left-only)`, inner `(batch, contracted)`
/// and columns `(right-only)`; output-only indices are replicated at the end.
/// The sparse operand (or the left one when both are dense) becomes the
/// compressed-row factor.
pub fn execute_planned<A: Element, B: Element, C: Element>(
    out: &mut Tensor<C>,
    indices: &str,
    update: Update,
    expr: &Expr<'_, A, B, C>,
    request: &PlanRequest,
) -> Result<ContractionReport> {
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
    let sizes = roles::index_sizes(&labelled)?;

    let mut x = Operand::from_source(&expr.left)?;
    let mut y = Operand::from_source(&expr.right)?;
    let summed = |a: &[char], b: &[char]| -> Vec<char> {
        a.iter()
            .filter(|c| !out_chars.contains(c) && !b.contains(c))
            .copied()
            .collect()
    };
    let with_sizes = |cs: &[char]| -> Vec<(char, usize)> { cs.iter().map(|&c| (c, sizes[&c])).collect() };
    let out_adds = out.algebra().has_add();
    let only_x = summed(&x.chars, &y.chars);
    if !only_x.is_empty() {
        if x.add.is_some() && out_adds {
            x = x.reduce(&only_x);
        } else {
            y = y.broadcast(&with_sizes(&only_x));
        }
    }
    let only_y = summed(&y.chars, &x.chars);
    if !only_y.is_empty() {
        if y.add.is_some() && out_adds {
            y = y.reduce(&only_y);
        } else {
            x = x.broadcast(&with_sizes(&only_y));
        }
    }

    let combiner = Combiner::new(out.algebra(), expr.coefficient)?;
    let ctx = Context {
        out_chars: &out_chars,
        out_strides: out.strides(),
        sizes: &sizes,
        combiner: &combiner,
        annihilating: expr.annihilating,
        request,
        label: expr.signature(indices),
    };
    let swapped = !x.sparse && y.sparse;
    let (contributions, mut report) = if swapped {
        let k = expr.kernel.clone();
        contract(y, x, move |b, a| k(a, b), &ctx)?
    } else {
        let k = expr.kernel.clone();
        contract(x, y, move |a, b| k(a, b), &ctx)?
    };
    report.swapped = swapped;
    finish(out, &out_chars, update, contributions)?;
    Ok(report)
}

struct Context<'c, C: Element> {
    out_chars: &'c [char],
    out_strides: &'c [usize],
    sizes: &'c BTreeMap<char, usize>,
    combiner: &'c Combiner<C>,
    annihilating: bool,
    request: &'c PlanRequest,
    label: String,
}

fn select_plan(shape: &ProblemShape, request: &PlanRequest) -> Result<ContractionPlan> {
    match &request.grid {
        GridChoice::Auto => choose_plan(shape, &request.config),
        GridChoice::Fixed(grid) => ContractionPlan::fixed(shape, *grid, &request.config),
        GridChoice::Plan(plan) => {
            let s = &plan.shape;
            if (s.m, s.k, s.n, s.z, s.p) != (shape.m, shape.k, shape.n, shape.z, shape.p) {
                return Err(Error::PlanMismatch(format!(
                    "plan is for {}x{}x{} with {} entries on {} processes, expression folds to {}x{}x{} with {} entries on {} processes",
                    s.m, s.k, s.n, s.z, s.p, shape.m, shape.k, shape.n, shape.z, shape.p
                )));
            }
            ContractionPlan::fixed(shape, plan.grid(), &request.config)
        }
    }
}

fn contract<X: Element, Y: Element, C: Element>(
    x: Operand<X>,
    y: Operand<Y>,
    kernel: impl Fn(X, Y) -> C + Send + Sync,
    ctx: &Context<'_, C>,
) -> Result<(Vec<(usize, C)>, ContractionReport)> {
    let out_unique = roles::unique(&[ctx.out_chars]);
    let in_x = |c: &char| x.chars.contains(c);
    let in_y = |c: &char| y.chars.contains(c);
    let batch: Vec<char> = x.chars.iter().filter(|c| in_y(c) && out_unique.contains(c)).copied().collect();
    let rows_only: Vec<char> = x.chars.iter().filter(|c| !in_y(c) && out_unique.contains(c)).copied().collect();
    let cols_only: Vec<char> = y.chars.iter().filter(|c| !in_x(c) && out_unique.contains(c)).copied().collect();
    let inner: Vec<char> = x.chars.iter().filter(|c| in_y(c) && !out_unique.contains(c)).copied().collect();
    let mapped: Vec<char> = out_unique.iter().filter(|c| !in_x(c) && !in_y(c)).copied().collect();

    let size_of = |cs: &[char]| -> usize { cs.iter().map(|c| ctx.sizes[c]).product() };
    let row_chars: Vec<char> = batch.iter().chain(&rows_only).copied().collect();
    let inner_chars: Vec<char> = batch.iter().chain(&inner).copied().collect();
    let (rows, depth, cols) = (size_of(&row_chars), size_of(&inner_chars), size_of(&cols_only));

    let mut x_triples = x.fold(&row_chars, &inner_chars, ctx.sizes);
    x_triples.sort_unstable_by_key(|t| (t.0, t.1));
    let mut row_ptr = vec![0usize; rows + 1];
    for t in &x_triples {
        row_ptr[t.0 + 1] += 1;
    }
    for r in 0..rows {
        row_ptr[r + 1] += row_ptr[r];
    }
    let x_pattern: Vec<(usize, usize)> = x_triples.iter().map(|t| (t.0, t.1)).collect();

    let mut y_dense: Vec<Option<Y>> = vec![None; depth * cols];
    let y_triples = y.fold(&inner_chars, &cols_only, ctx.sizes);
    for &(r, c, v) in &y_triples {
        y_dense[r * cols + c] = Some(v);
    }
    let y_pattern: Option<Vec<(usize, usize)>> =
        y.sparse.then(|| y_triples.iter().map(|t| (t.0, t.1)).collect());

    let shape = ProblemShape::new(rows, depth, cols, x_triples.len(), ctx.request.procs)
        .with_memory(ctx.request.memory);
    let plan = select_plan(&shape, ctx.request)?;
    let mut sim = replay_summa(
        &SummaInput {
            m: rows,
            k: depth,
            n: cols,
            a_entries: &x_pattern,
            b_entries: y_pattern.as_deref(),
        },
        plan.grid(),
    );
    sim.predicted_w = Some(plan.cost.w_layout);

    let p1 = plan.grid()[0];
    let (x_zero, y_zero) = (x.zero, y.zero);
    let skip_x = |v: &X| ctx.annihilating && x_zero == Some(*v);
    let skip_y = |v: &Y| ctx.annihilating && y_zero == Some(*v);
    let combiner = ctx.combiner;
    let products: Vec<Vec<(usize, C)>> = (0..rows)
        .into_par_iter()
        .map(|r| -> Result<Vec<(usize, C)>> {
            let span = row_ptr[r]..row_ptr[r + 1];
            if span.is_empty() {
                return Ok(Vec::new());
            }
            let mut partials: Vec<Vec<Option<C>>> = vec![vec![None; cols]; p1.min(span.len())];
            let mut owner: Vec<usize> = Vec::new();
            for &(_, col, xv) in &x_triples[span] {
                if skip_x(&xv) {
                    continue;
                }
                let x1 = col % p1;
                let slot = match owner.iter().position(|&o| o == x1) {
                    Some(s) => s,
                    None => {
                        owner.push(x1);
                        owner.len() - 1
                    }
                };
                let acc = &mut partials[slot];
                for (j, cell) in y_dense[col * cols..(col + 1) * cols].iter().enumerate() {
                    if let Some(yv) = cell {
                        if skip_y(yv) {
                            continue;
                        }
                        let term = combiner.scale(kernel(xv, *yv));
                        acc[j] = Some(combiner.combine(acc[j], term)?);
                    }
                }
            }
            let mut order: Vec<usize> = (0..owner.len()).collect();
            order.sort_unstable_by_key(|&s| owner[s]);
            let mut result = Vec::new();
            for j in 0..cols {
                let mut total = None;
                for &s in &order {
                    if let Some(v) = partials[s][j] {
                        total = Some(combiner.combine(total, v)?);
                    }
                }
                if let Some(v) = total {
                    result.push((j, v));
                }
            }
            Ok(result)
        })
        .collect::<Result<_>>()?;

    let weight = |c: char| -> usize {
        ctx.out_chars
            .iter()
            .zip(ctx.out_strides)
            .filter(|(&o, _)| o == c)
            .map(|(_, s)| *s)
            .sum()
    };
    let offsets = |group: &[char]| -> Vec<usize> {
        let mut acc = vec![0usize];
        for &c in group {
            let w = weight(c);
            acc = acc
                .iter()
                .flat_map(|&base| (0..ctx.sizes[&c]).map(move |i| base + i * w))
                .collect();
        }
        acc
    };
    let row_offsets = offsets(&row_chars);
    let col_offsets = offsets(&cols_only);
    let mapped_offsets = offsets(&mapped);
    let mut contributions: Vec<(usize, C)> = Vec::new();
    for (r, row) in products.into_iter().enumerate() {
        for (j, v) in row {
            let base = row_offsets[r] + col_offsets[j];
            contributions.extend(mapped_offsets.iter().map(|&o| (base + o, v)));
        }
    }
    contributions.sort_unstable_by_key(|e| e.0);

    let report = ContractionReport {
        label: ctx.label.clone(),
        shape,
        plan,
        sim,
        swapped: false,
    };
    Ok((contributions, report))
}
