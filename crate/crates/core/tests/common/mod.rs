//! Randomized expression generator and independent oracles shared by the
//! integration suites.

#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use semitensor::einsum::{execute_planned, execute_reference, PlanRequest};
use semitensor::{
    integer_ring, standard_ring, tropical_i32, Algebra, Element, Expr, Layout, Symmetry, Tensor,
    Update,
};

pub const REAL_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StructureChoice {
    Real,
    Integer,
    Tropical,
}

#[derive(Debug, Clone)]
pub struct Operand {
    pub indices: String,
    pub dims: Vec<usize>,
    pub layout: Layout,
    pub density: f64,
}

/// One randomized indexed expression.
#[derive(Debug, Clone)]
pub struct Case {
    pub structure: StructureChoice,
    pub left: Operand,
    pub right: Option<Operand>,
    pub output: Operand,
    pub accumulate: bool,
    pub scaled: bool,
    pub procs: usize,
    pub seed: u64,
}

const ALPHABET: [char; 5] = ['a', 'b', 'c', 'd', 'e'];

fn operand(rng: &mut ChaCha8Rng, chars: &[char], sizes: &[usize], min_order: usize) -> Operand {
    let order = rng.random_range(min_order..=4);
    let picks: Vec<usize> = (0..order).map(|_| rng.random_range(0..chars.len())).collect();
    let layout = if rng.random_bool(0.5) {
        Layout::Sparse
    } else {
        Layout::Dense
    };
    Operand {
        indices: picks.iter().map(|&i| chars[i]).collect(),
        dims: picks.iter().map(|&i| sizes[i]).collect(),
        layout,
        density: [0.2, 0.5, 1.0][rng.random_range(0..3)],
    }
}

/// Orders up to 4, sizes up to 6, at most 1296 loop iterations.
pub fn random_case(seed: u64) -> Case {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let unique = rng.random_range(1..=ALPHABET.len());
    let chars = &ALPHABET[..unique];
    let mut sizes: Vec<usize> = (0..unique).map(|_| rng.random_range(1..=6)).collect();
    while sizes.iter().product::<usize>() > 1296 {
        let biggest = (0..unique).max_by_key(|&i| sizes[i]).unwrap();
        sizes[biggest] -= 1;
    }
    let structure = match rng.random_range(0..3) {
        0 => StructureChoice::Real,
        1 => StructureChoice::Integer,
        _ => StructureChoice::Tropical,
    };
    let left = operand(&mut rng, chars, &sizes, 1);
    let right = rng
        .random_bool(0.75)
        .then(|| operand(&mut rng, chars, &sizes, 0));
    let output = operand(&mut rng, chars, &sizes, 0);
    Case {
        structure,
        left,
        right,
        output,
        accumulate: rng.random_bool(0.5),
        scaled: rng.random_bool(0.5),
        procs: [1, 2, 3, 4, 6, 8][rng.random_range(0..6)],
        seed,
    }
}

fn build<T: Element>(
    op: &Operand,
    alg: &Algebra<T>,
    seed: u64,
    sample: &impl Fn(&mut ChaCha8Rng) -> T,
) -> Tensor<T> {
    let mut t = Tensor::sparse(&op.dims, alg).unwrap();
    t.fill_random(op.density, seed, |r| sample(r)).unwrap();
    let sym = vec![Symmetry::NS; op.dims.len()];
    let mut out = Tensor::new(&op.dims, &sym, op.layout, alg).unwrap();
    out.write(&t.nonzeros(), false).unwrap();
    out
}

/// Run the case through both executors. Returns `(reference, planned)`
/// output values, or an error message when either fails.
pub fn run_case<T: Element>(
    case: &Case,
    alg: &Algebra<T>,
    coefficient: T,
    sample: impl Fn(&mut ChaCha8Rng) -> T,
) -> Result<(Vec<T>, Vec<T>), String> {
    let left = build(&case.left, alg, case.seed ^ 0x11, &sample);
    let right = case
        .right
        .as_ref()
        .map(|r| build(r, alg, case.seed ^ 0x22, &sample));
    let initial = build(&case.output, alg, case.seed ^ 0x33, &sample);
    let update = if case.accumulate {
        Update::Accumulate
    } else {
        Update::Assign
    };
    let request = PlanRequest {
        procs: case.procs,
        ..PlanRequest::default()
    };
    let mut reference = initial.clone();
    let mut planned = initial;
    match &right {
        Some(r) => {
            let ri = &case.right.as_ref().unwrap().indices;
            let make = || {
                let e = Expr::mul(&left, &case.left.indices, r, ri).unwrap();
                if case.scaled {
                    e.scale(coefficient)
                } else {
                    e
                }
            };
            execute_reference(&mut reference, &case.output.indices, update, &make())
                .map_err(|e| format!("reference: {e}"))?;
            execute_planned(&mut planned, &case.output.indices, update, &make(), &request)
                .map_err(|e| format!("planned: {e}"))?;
        }
        None => {
            let make = || {
                let e = Expr::copy(&left, &case.left.indices);
                if case.scaled {
                    e.scale(coefficient)
                } else {
                    e
                }
            };
            execute_reference(&mut reference, &case.output.indices, update, &make())
                .map_err(|e| format!("reference: {e}"))?;
            execute_planned(&mut planned, &case.output.indices, update, &make(), &request)
                .map_err(|e| format!("planned: {e}"))?;
        }
    }
    Ok((reference.to_values().unwrap(), planned.to_values().unwrap()))
}

pub fn reals_agree(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

/// Check the planned executor against the reference for one case.
pub fn check_case(case: &Case) -> Result<(), String> {
    let describe = |msg: String| {
        let right = case
            .right
            .as_ref()
            .map_or(String::new(), |r| format!(",{}{:?}", r.indices, r.dims));
        format!(
            "{:?} {}{:?}{right}->{}{:?} acc={} scaled={} p={}: {msg}",
            case.structure,
            case.left.indices,
            case.left.dims,
            case.output.indices,
            case.output.dims,
            case.accumulate,
            case.scaled,
            case.procs
        )
    };
    match case.structure {
        StructureChoice::Real => {
            let (r, p) = run_case(case, &standard_ring(), 0.5, |g| g.random_range(-1.0..1.0))
                .map_err(describe)?;
            match r.iter().zip(&p).position(|(a, b)| !reals_agree(*a, *b, REAL_TOLERANCE)) {
                Some(i) => Err(describe(format!("position {i}: {} vs {}", r[i], p[i]))),
                None => Ok(()),
            }
        }
        StructureChoice::Integer => {
            let (r, p) =
                run_case(case, &integer_ring(), 2, |g| g.random_range(-5..=5)).map_err(describe)?;
            (r == p).then_some(()).ok_or_else(|| describe(format!("{r:?} vs {p:?}")))
        }
        StructureChoice::Tropical => {
            let (r, p) =
                run_case(case, &tropical_i32(), 3, |g| g.random_range(0..=20)).map_err(describe)?;
            (r == p).then_some(()).ok_or_else(|| describe(format!("{r:?} vs {p:?}")))
        }
    }
}

/// Dijkstra from vertex 0 over `adjacency[to * n + from]`, `None` when
/// unreachable.
pub fn dijkstra(n: usize, adjacency: &[Option<i64>]) -> Vec<Option<i64>> {
    use std::cmp::Reverse;
    use std::collections::BinaryHeap;
    let mut dist: Vec<Option<i64>> = vec![None; n];
    let mut heap = BinaryHeap::new();
    dist[0] = Some(0);
    heap.push(Reverse((0i64, 0usize)));
    while let Some(Reverse((d, u))) = heap.pop() {
        if dist[u].is_some_and(|best| d > best) {
            continue;
        }
        for v in 0..n {
            if let Some(w) = adjacency[v * n + u] {
                let candidate = d + w;
                if dist[v].is_none_or(|best| candidate < best) {
                    dist[v] = Some(candidate);
                    heap.push(Reverse((candidate, v)));
                }
            }
        }
    }
    dist
}

/// Solve a dense system by Gaussian elimination with partial pivoting.
pub fn dense_solve(n: usize, a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut m: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            let mut row = a[i * n..(i + 1) * n].to_vec();
            row.push(b[i]);
            row
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&x, &y| m[x][col].abs().total_cmp(&m[y][col].abs()))
            .unwrap();
        m.swap(col, pivot);
        let (upper, lower) = m.split_at_mut(col + 1);
        let pivot_row = &upper[col];
        for row in lower {
            let f = row[col] / pivot_row[col];
            for (target, &p) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                *target -= f * p;
            }
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let s: f64 = (row + 1..n).map(|c| m[row][c] * x[c]).sum();
        x[row] = (m[row][n] - s) / m[row][row];
    }
    x
}

/// Random strictly diagonally dominant sparse system.
pub fn dominant_system(n: usize, density: f64, seed: u64) -> (Tensor<f64>, Tensor<f64>) {
    let r = standard_ring();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut entries = Vec::new();
    for i in 0..n {
        let mut row_sum = 0.0;
        for j in 0..n {
            if i != j && rng.random_bool(density) {
                let v: f64 = rng.random_range(-1.0..1.0);
                row_sum += v.abs();
                entries.push((i * n + j, v));
            }
        }
        entries.push((i * n + i, row_sum + rng.random_range(1.0..2.0)));
    }
    entries.sort_by_key(|e| e.0);
    let mut a = Tensor::sparse(&[n, n], &r).unwrap();
    a.write(&entries, false).unwrap();
    let mut b = Tensor::dense(&[n], &r).unwrap();
    let rhs: Vec<(usize, f64)> = (0..n).map(|i| (i, rng.random_range(-1.0..1.0))).collect();
    b.write(&rhs, false).unwrap();
    (a, b)
}
