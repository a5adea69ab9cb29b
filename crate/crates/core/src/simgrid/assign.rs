use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::Element;
use crate::tensor::{Reset, Tensor};
use crate::{Error, Result};

/// Which grid axis, if any, each tensor dimension is distributed over.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridMap {
    /// Extent of every grid axis.
    pub grid: Vec<usize>,
    /// For each tensor dimension, the grid axis it is split over.
    pub dims: Vec<Option<usize>>,
}

impl GridMap {
    pub fn new(grid: &[usize], dims: &[Option<usize>]) -> Self {
        GridMap {
            grid: grid.to_vec(),
            dims: dims.to_vec(),
        }
    }

    pub fn procs(&self) -> usize {
        self.grid.iter().product()
    }

    fn validate(&self, order: usize) -> Result<()> {
        let bad = |msg: String| Err(Error::PlanMismatch(msg));
        if self.dims.len() != order {
            return bad(format!(
                "grid map has {} entries for an order-{order} tensor",
                self.dims.len()
            ));
        }
        if self.grid.contains(&0) {
            return bad("grid axes must be positive".into());
        }
        let mut used = vec![false; self.grid.len()];
        for axis in self.dims.iter().flatten() {
            match used.get_mut(*axis) {
                None => return bad(format!("grid axis {axis} does not exist")),
                Some(true) => return bad(format!("grid axis {axis} is mapped twice")),
                Some(slot) => *slot = true,
            }
        }
        Ok(())
    }
}

/// Ownership of tensor entries under a cyclic distribution. Processes are
/// numbered in row-major order of their grid coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Assignment {
    pub counts: Vec<usize>,
    /// Linear indices owned by each process; only built for sparse tensors.
    pub owned: Option<Vec<Vec<usize>>>,
}

/// Assign every entry to the processes whose coordinate on each mapped axis
/// equals the entry's index modulo that axis's extent. Entries are
/// replicated over axes no dimension maps to.
pub fn cyclic_assign<T: Element>(tensor: &Tensor<T>, map: &GridMap) -> Result<Assignment> {
    map.validate(tensor.order())?;
    let procs = map.procs();
    let mut radix = vec![1usize; map.grid.len()];
    for a in (0..map.grid.len().saturating_sub(1)).rev() {
        radix[a] = radix[a + 1] * map.grid[a + 1];
    }
    let coords = |p: usize| -> Vec<usize> {
        map.grid
            .iter()
            .zip(&radix)
            .map(|(q, r)| (p / r) % q)
            .collect()
    };

    if !tensor.is_sparse() {
        let counts = (0..procs)
            .map(|p| {
                let c = coords(p);
                tensor
                    .dims()
                    .iter()
                    .zip(&map.dims)
                    .map(|(&d, axis)| match axis {
                        Some(a) => residue_count(d, map.grid[*a], c[*a]),
                        None => d,
                    })
                    .product()
            })
            .collect();
        return Ok(Assignment {
            counts,
            owned: None,
        });
    }

    let free_axes: Vec<usize> = (0..map.grid.len())
        .filter(|a| !map.dims.contains(&Some(*a)))
        .collect();
    let replicas: usize = free_axes.iter().map(|&a| map.grid[a]).product();
    let mut owned = vec![Vec::new(); procs];
    for (index, _) in tensor.entries() {
        let tuple = tensor.delinearize(index);
        let mut base = 0;
        for (&i, axis) in tuple.iter().zip(&map.dims) {
            if let Some(a) = axis {
                base += (i % map.grid[*a]) * radix[*a];
            }
        }
        for mut r in 0..replicas {
            let mut p = base;
            for &a in free_axes.iter().rev() {
                p += (r % map.grid[a]) * radix[a];
                r /= map.grid[a];
            }
            owned[p].push(index);
        }
    }
    Ok(Assignment {
        counts: owned.iter().map(Vec::len).collect(),
        owned: Some(owned),
    })
}

fn residue_count(len: usize, q: usize, r: usize) -> usize {
    if r >= len {
        0
    } else {
        (len - r).div_ceil(q)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BalanceStats {
    pub counts: Vec<usize>,
    pub max: usize,
    pub mean: f64,
    /// `max / mean`, or 1 when every count is zero.
    pub ratio: f64,
}

pub(crate) fn stats(counts: &[usize]) -> BalanceStats {
    let max = counts.iter().copied().max().unwrap_or(0);
    let mean = if counts.is_empty() {
        0.0
    } else {
        counts.iter().sum::<usize>() as f64 / counts.len() as f64
    };
    let ratio = if mean > 0.0 { max as f64 / mean } else { 1.0 };
    BalanceStats {
        counts: counts.to_vec(),
        max,
        mean,
        ratio,
    }
}

pub fn balance_report(assignment: &Assignment) -> BalanceStats {
    stats(&assignment.counts)
}

/// High-probability maximum load when `balls` land uniformly in `bins`.
pub fn balls_into_bins_bound(balls: f64, bins: f64) -> f64 {
    if bins <= 1.0 || balls <= 0.0 {
        return balls.max(0.0);
    }
    let mean = balls / bins;
    let log_q = bins.ln();
    let estimate = if balls >= bins * log_q {
        mean + (2.0 * mean * log_q).sqrt()
    } else {
        log_q / (1.0 + bins * log_q / balls).ln()
    };
    estimate.max(mean.ceil()).max(1.0).min(balls)
}

/// Predicted maximum nonzeros per process for an `n1 x n2` matrix with
/// `z` nonzeros packed into dense columns of length `n1`, on a `q1 x q2`
/// grid.
pub fn column_load_prediction(n1: usize, n2: usize, q1: usize, q2: usize, z: usize) -> f64 {
    let q = (q1 * q2) as f64;
    let columns = (z / n1) as f64;
    let per_column_block = n1 as f64 / q1 as f64;
    (n1 as f64 * n2 as f64 / q)
        .min(z as f64)
        .min(per_column_block * balls_into_bins_bound(columns, q2 as f64))
}

/// One random permutation per distinct dimension length.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexPermutation {
    forward: BTreeMap<usize, Vec<usize>>,
    inverse: BTreeMap<usize, Vec<usize>>,
}

pub fn randomize_indices<T: Element>(tensor: &Tensor<T>, seed: u64) -> IndexPermutation {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut lengths: Vec<usize> = tensor.dims().to_vec();
    lengths.sort_unstable();
    lengths.dedup();
    let mut forward = BTreeMap::new();
    let mut inverse = BTreeMap::new();
    for len in lengths {
        let mut perm: Vec<usize> = (0..len).collect();
        perm.shuffle(&mut rng);
        let mut inv = vec![0; len];
        for (i, &p) in perm.iter().enumerate() {
            inv[p] = i;
        }
        forward.insert(len, perm);
        inverse.insert(len, inv);
    }
    IndexPermutation { forward, inverse }
}

impl IndexPermutation {
    /// Permutation used for dimensions of length `len`.
    pub fn permutation(&self, len: usize) -> Option<&[usize]> {
        self.forward.get(&len).map(Vec::as_slice)
    }

    pub fn map_tuple(&self, dims: &[usize], tuple: &[usize]) -> Vec<usize> {
        Self::map_with(&self.forward, dims, tuple)
    }

    pub fn unmap_tuple(&self, dims: &[usize], tuple: &[usize]) -> Vec<usize> {
        Self::map_with(&self.inverse, dims, tuple)
    }

    fn map_with(table: &BTreeMap<usize, Vec<usize>>, dims: &[usize], tuple: &[usize]) -> Vec<usize> {
        tuple
            .iter()
            .zip(dims)
            .map(|(&i, d)| table.get(d).map_or(i, |p| p[i]))
            .collect()
    }

    /// Copy of `tensor` with every index permuted.
    pub fn apply<T: Element>(&self, tensor: &Tensor<T>) -> Result<Tensor<T>> {
        self.relabel(tensor, &self.forward)
    }

    /// Undo [`IndexPermutation::apply`].
    pub fn restore<T: Element>(&self, tensor: &Tensor<T>) -> Result<Tensor<T>> {
        self.relabel(tensor, &self.inverse)
    }

    fn relabel<T: Element>(
        &self,
        tensor: &Tensor<T>,
        table: &BTreeMap<usize, Vec<usize>>,
    ) -> Result<Tensor<T>> {
        let mut out = tensor.clone();
        let mut updates: Vec<(usize, T)> = tensor
            .nonzeros()
            .into_iter()
            .map(|(index, v)| {
                let tuple = tensor.delinearize(index);
                let mapped = Self::map_with(table, tensor.dims(), &tuple);
                (tensor.lin(&mapped), v)
            })
            .collect();
        updates.sort_unstable_by_key(|u| u.0);
        out.commit(Reset::Everything, updates)?;
        Ok(out)
    }
}
