use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{path_semiring, tropical_i32, Element, PathElement, UnaryFunction};
use crate::einsum::{Engine, Expr};
use crate::tensor::{Layout, Symmetry, Tensor};
use crate::Result;

/// Random digraph on `n` vertices as a min-plus adjacency matrix: each
/// off-diagonal edge is present with probability `edge_prob` and weighted
/// uniformly in `[1, max_weight]`; the diagonal is zero.
pub fn random_digraph(
    n: usize,
    edge_prob: f64,
    max_weight: i32,
    seed: u64,
    layout: Layout,
) -> Result<Tensor<i32>> {
    let t = tropical_i32();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut entries = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                entries.push((i * n + j, 0));
            } else if rng.random_bool(edge_prob) {
                entries.push((i * n + j, rng.random_range(1..=max_weight)));
            }
        }
    }
    let mut a = Tensor::new(&[n, n], &[Symmetry::NS; 2], layout, &t)?;
    a.write(&entries, false)?;
    Ok(a)
}

/// Single-source shortest paths by repeated relaxation `P += A·P`.
///
/// `p` holds the source distances on entry and the shortest distances on
/// return. Returns `false` when `n` relaxations do not reach a fixed point,
/// which happens exactly when a negative cycle is reachable.
pub fn bellman_ford<T: Element>(
    engine: &mut Engine,
    a: &Tensor<T>,
    p: &mut Tensor<T>,
    n: usize,
) -> Result<bool> {
    let mut rounds = 0;
    loop {
        if rounds == n {
            return Ok(false);
        }
        rounds += 1;
        let before = p.clone();
        engine.accumulate(p, "i", Expr::mul(a, "ij", &before, "j")?)?;
        if p.to_values()? == before.to_values()? {
            return Ok(true);
        }
    }
}

/// All-pairs distances by squaring: `A += A·A` for `l = 1, 2, 4, ... < n`.
pub fn apsp_dense_doubling<T: Element>(
    engine: &mut Engine,
    a: &mut Tensor<T>,
    n: usize,
) -> Result<()> {
    let mut l = 1;
    while l < n {
        let current = a.clone();
        engine.accumulate(a, "ij", Expr::mul(&current, "ik", &current, "kj")?)?;
        l <<= 1;
    }
    Ok(())
}

#[derive(Debug, Clone)]
pub struct TiskinOutcome {
    pub distances: Tensor<i32>,
    /// Stored entries of the exactly-`l`-hop matrix at each doubling step.
    pub hop_matrix_nnz: Vec<usize>,
}

/// All-pairs distances by hop-restricted doubling.
///
/// Weights are lifted to `(weight, hops)` pairs with one hop per edge and
/// zero hops on the diagonal. At step `l` only the shortest paths that use
/// exactly `l` hops are kept in a sparse matrix `Pl`, and `P += Pl·P`
/// extends every path by them.
pub fn apsp_tiskin(engine: &mut Engine, a: &Tensor<i32>) -> Result<TiskinOutcome> {
    let n = a.dims()[0];
    let paths = path_semiring();
    let infinity = a.algebra().add_id().unwrap_or(i32::MAX / 2);

    let lift = UnaryFunction::new(move |w: i32| {
        if w >= infinity {
            PathElement::INFINITY
        } else {
            PathElement::new(w, 1)
        }
    });
    let mut p = Tensor::dense(&[n, n], &paths)?;
    engine.assign(&mut p, "ij", Expr::map(&lift, a, "ij")?)?;
    engine.assign(&mut p, "ii", Expr::constant(PathElement::new(0, 0)))?;

    let mut pl = Tensor::sparse(&[n, n], &paths)?;
    let mut hop_matrix_nnz = Vec::new();
    let mut l: i32 = 1;
    while (l as usize) < n {
        engine.assign(&mut pl, "ij", Expr::copy(&p, "ij"))?;
        pl.sparsify(|e| e.h == l)?;
        hop_matrix_nnz.push(pl.nnz());
        let current = p.clone();
        engine.accumulate(&mut p, "ij", Expr::mul(&pl, "ik", &current, "kj")?)?;
        l <<= 1;
    }

    let project = UnaryFunction::new(move |e: PathElement| {
        if e.is_infinite() {
            infinity
        } else {
            e.w
        }
    });
    let mut distances = Tensor::dense(&[n, n], &tropical_i32())?;
    engine.assign(&mut distances, "ij", Expr::map(&project, &p, "ij")?)?;
    Ok(TiskinOutcome {
        distances,
        hop_matrix_nnz,
    })
}

/// Textbook triple loop `d[i][j] ← d[i][j] + d[i][k]·d[k][j]` under the
/// matrix's own structure. Returns a dense copy.
pub fn floyd_warshall_oracle<T: Element>(a: &Tensor<T>) -> Result<Tensor<T>> {
    let n = a.dims()[0];
    let alg = a.algebra().clone();
    let add = alg.add_op()?;
    let mul = alg.mul_op()?;
    let mut d = a.to_values()?;
    for k in 0..n {
        for i in 0..n {
            let dik = d[i * n + k];
            for j in 0..n {
                d[i * n + j] = add(d[i * n + j], mul(dik, d[k * n + j]));
            }
        }
    }
    let mut out = Tensor::dense(&[n, n], &alg)?;
    out.write(&d.into_iter().enumerate().collect::<Vec<_>>(), false)?;
    Ok(out)
}
