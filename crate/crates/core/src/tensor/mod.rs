//! Tensors of arbitrary order over an [`Algebra`].
//!
//! Storage is either a dense row-major array (last index fastest) or a sorted
//! list of `(linear index, value)` pairs. Sparse storage never holds the
//! additive identity; absent entries read as it.
//!
//! Symmetry tags relate dimension `i` to dimension `i + 1`. Writes are only
//! accepted at canonical (ascending within each symmetric group) index tuples
//! and every mirrored image is materialized immediately, so reads never need
//! to consult the tags.

pub mod io;
mod symmetry;

use std::collections::BTreeMap;

use rand::Rng;
use rand::SeedableRng;
use rand_distr::{Distribution, Geometric};

pub use rand_chacha::ChaCha8Rng;
pub use symmetry::Symmetry;

use self::symmetry::{Placement, SymGroup};
use crate::algebra::{Algebra, Element};
use crate::simgrid::VirtualWorld;
use crate::{Error, Result};

/// Storage layout of a tensor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Layout {
    Dense,
    Sparse,
}

#[derive(Debug, Clone)]
pub(crate) enum Storage<T> {
    Dense(Vec<T>),
    Sparse(Vec<(usize, T)>),
}

/// Which stored positions a commit clears before writing.
pub(crate) enum Reset<'a> {
    Nothing,
    Everything,
    Where(&'a dyn Fn(&[usize]) -> bool),
}

#[derive(Debug, Clone)]
pub struct Tensor<T: Element> {
    dims: Vec<usize>,
    strides: Vec<usize>,
    len: usize,
    sym: Vec<Symmetry>,
    groups: Vec<SymGroup>,
    algebra: Algebra<T>,
    world: VirtualWorld,
    storage: Storage<T>,
}

impl<T: Element> Tensor<T> {
    /// Construct a tensor. Dense tensors start filled with the additive
    /// identity, sparse tensors start empty.
    pub fn new(
        dims: &[usize],
        sym: &[Symmetry],
        layout: Layout,
        algebra: &Algebra<T>,
    ) -> Result<Self> {
        if let Some(index) = dims.iter().position(|&d| d == 0) {
            return Err(Error::ZeroDimension { index });
        }
        let groups = symmetry::groups(dims, sym)?;
        if groups.iter().any(|g| g.kind == Symmetry::AS) && !algebra.has_inverse() {
            return Err(algebra.missing("additive inverse"));
        }
        if groups.iter().any(|g| g.kind != Symmetry::SY) && algebra.add_id().is_none() {
            return Err(algebra.missing("additive identity"));
        }
        let len = dims
            .iter()
            .try_fold(1usize, |acc, &d| acc.checked_mul(d))
            .ok_or_else(|| Error::TooLarge {
                dims: dims.to_vec(),
            })?;
        let mut strides = vec![1usize; dims.len()];
        for i in (0..dims.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * dims[i + 1];
        }
        let storage = match layout {
            Layout::Dense => {
                let zero = algebra.add_id().ok_or(Error::DenseWithoutIdentity)?;
                Storage::Dense(vec![zero; len])
            }
            Layout::Sparse => Storage::Sparse(Vec::new()),
        };
        Ok(Tensor {
            dims: dims.to_vec(),
            strides,
            len,
            sym: sym.to_vec(),
            groups,
            algebra: algebra.clone(),
            world: VirtualWorld::local(),
            storage,
        })
    }

    /// Nonsymmetric dense tensor.
    pub fn dense(dims: &[usize], algebra: &Algebra<T>) -> Result<Self> {
        Self::new(dims, &vec![Symmetry::NS; dims.len()], Layout::Dense, algebra)
    }

    /// Nonsymmetric sparse tensor.
    pub fn sparse(dims: &[usize], algebra: &Algebra<T>) -> Result<Self> {
        Self::new(dims, &vec![Symmetry::NS; dims.len()], Layout::Sparse, algebra)
    }

    /// Order-0 dense tensor holding the additive identity.
    pub fn scalar(algebra: &Algebra<T>) -> Result<Self> {
        Self::dense(&[], algebra)
    }

    /// Attach the tensor to a virtual world.
    pub fn in_world(mut self, world: &VirtualWorld) -> Self {
        self.world = world.clone();
        self
    }

    pub fn order(&self) -> usize {
        self.dims.len()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn symmetry(&self) -> &[Symmetry] {
        &self.sym
    }

    pub fn is_symmetric(&self) -> bool {
        !self.groups.is_empty()
    }

    pub fn layout(&self) -> Layout {
        match self.storage {
            Storage::Dense(_) => Layout::Dense,
            Storage::Sparse(_) => Layout::Sparse,
        }
    }

    pub fn is_sparse(&self) -> bool {
        self.layout() == Layout::Sparse
    }

    pub fn algebra(&self) -> &Algebra<T> {
        &self.algebra
    }

    pub fn world(&self) -> &VirtualWorld {
        &self.world
    }

    /// Number of logical positions, the product of the dimensions.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.nnz() == 0
    }

    /// Number of logical entries different from the additive identity.
    pub fn nnz(&self) -> usize {
        match &self.storage {
            Storage::Sparse(entries) => entries.len(),
            Storage::Dense(values) => values
                .iter()
                .filter(|v| !self.algebra.is_add_id(v))
                .count(),
        }
    }

    /// Number of stored elements: all positions when dense, the coordinate
    /// list length when sparse.
    pub fn stored_len(&self) -> usize {
        match &self.storage {
            Storage::Dense(values) => values.len(),
            Storage::Sparse(entries) => entries.len(),
        }
    }

    pub fn linearize(&self, tuple: &[usize]) -> Result<usize> {
        if tuple.len() != self.dims.len() || tuple.iter().zip(&self.dims).any(|(i, d)| i >= d) {
            return Err(Error::BadIndexTuple {
                tuple: tuple.to_vec(),
                dims: self.dims.clone(),
            });
        }
        Ok(self.lin(tuple))
    }

    pub(crate) fn lin(&self, tuple: &[usize]) -> usize {
        tuple.iter().zip(&self.strides).map(|(i, s)| i * s).sum()
    }

    pub fn delinearize(&self, mut index: usize) -> Vec<usize> {
        let mut out = vec![0; self.dims.len()];
        self.unravel_into(&mut index, &mut out);
        out
    }

    pub(crate) fn unravel_into(&self, index: &mut usize, out: &mut [usize]) {
        for (slot, &s) in out.iter_mut().zip(&self.strides) {
            *slot = *index / s;
            *index %= s;
        }
    }

    pub(crate) fn strides(&self) -> &[usize] {
        &self.strides
    }

    pub(crate) fn storage(&self) -> &Storage<T> {
        &self.storage
    }

    fn check_range(&self, index: usize) -> Result<()> {
        if index >= self.len {
            return Err(Error::IndexOutOfRange {
                index,
                size: self.len,
            });
        }
        Ok(())
    }

    /// Value at a linear index; absent sparse entries read as the additive
    /// identity.
    pub(crate) fn value_at(&self, index: usize) -> Result<T> {
        match &self.storage {
            Storage::Dense(values) => Ok(values[index]),
            Storage::Sparse(entries) => match entries.binary_search_by_key(&index, |e| e.0) {
                Ok(pos) => Ok(entries[pos].1),
                Err(_) => self.algebra.require_add_id(),
            },
        }
    }

    /// Stored value at a linear index, `None` for absent sparse entries.
    pub(crate) fn stored_at(&self, index: usize) -> Option<T> {
        match &self.storage {
            Storage::Dense(values) => Some(values[index]),
            Storage::Sparse(entries) => entries
                .binary_search_by_key(&index, |e| e.0)
                .ok()
                .map(|pos| entries[pos].1),
        }
    }

    /// Bulk read by linear index.
    pub fn read(&self, indices: &[usize]) -> Result<Vec<T>> {
        indices
            .iter()
            .map(|&i| {
                self.check_range(i)?;
                self.value_at(i)
            })
            .collect()
    }

    /// Read one element by index tuple.
    pub fn get(&self, tuple: &[usize]) -> Result<T> {
        let i = self.linearize(tuple)?;
        self.value_at(i)
    }

    /// All logical values in row-major order.
    pub fn to_values(&self) -> Result<Vec<T>> {
        match &self.storage {
            Storage::Dense(values) => Ok(values.clone()),
            Storage::Sparse(entries) => {
                let mut out = vec![self.algebra.require_add_id()?; self.len];
                for &(i, v) in entries {
                    out[i] = v;
                }
                Ok(out)
            }
        }
    }

    /// Stored entries as `(linear index, value)` in ascending index order.
    /// Dense tensors yield every position.
    pub fn entries(&self) -> Box<dyn Iterator<Item = (usize, T)> + '_> {
        match &self.storage {
            Storage::Dense(values) => Box::new(values.iter().copied().enumerate()),
            Storage::Sparse(entries) => Box::new(entries.iter().copied()),
        }
    }

    /// Entries different from the additive identity, ascending.
    pub fn nonzeros(&self) -> Vec<(usize, T)> {
        self.entries()
            .filter(|(_, v)| !self.algebra.is_add_id(v))
            .collect()
    }

    /// Bulk write of `(linear index, value)` pairs. With `accumulate` the
    /// value is combined with the current one through the structure's
    /// addition. Pairs are applied in order.
    pub fn write(&mut self, pairs: &[(usize, T)], accumulate: bool) -> Result<()> {
        let add = if accumulate {
            Some(self.algebra.add_op()?)
        } else {
            None
        };
        let mut pending: BTreeMap<usize, T> = BTreeMap::new();
        let mut tuple = vec![0usize; self.dims.len()];
        for &(index, value) in pairs {
            self.check_range(index)?;
            let mut rest = index;
            self.unravel_into(&mut rest, &mut tuple);
            match symmetry::placement(&self.groups, &tuple) {
                Placement::Canonical => {}
                Placement::NonCanonical => {
                    return Err(Error::NonCanonicalIndex { tuple });
                }
                Placement::ForcedZero => {
                    return Err(Error::ForcedZeroDiagonal { tuple });
                }
            }
            let new = match &add {
                Some(add) => {
                    let old = match pending.get(&index) {
                        Some(v) => *v,
                        None => self.value_at(index)?,
                    };
                    add(old, value)
                }
                None => value,
            };
            self.stage(&mut pending, &tuple, index, new)?;
        }
        self.commit(Reset::Nothing, pending.into_iter().collect())
    }

    /// Write one element at a canonical index tuple.
    pub fn set(&mut self, tuple: &[usize], value: T) -> Result<()> {
        let i = self.linearize(tuple)?;
        self.write(&[(i, value)], false)
    }

    /// Queue `value` at a canonical position and every mirrored image.
    fn stage(
        &self,
        pending: &mut BTreeMap<usize, T>,
        canonical: &[usize],
        index: usize,
        value: T,
    ) -> Result<()> {
        if self.groups.is_empty() {
            pending.insert(index, value);
            return Ok(());
        }
        let inverted = if self.groups.iter().any(|g| g.kind == Symmetry::AS) {
            Some(self.algebra.inv_op()?(value))
        } else {
            None
        };
        for (image, odd) in symmetry::images(&self.groups, canonical) {
            let v = if odd {
                inverted.expect("antisymmetric group implies inverse")
            } else {
                value
            };
            pending.insert(self.lin(&image), v);
        }
        Ok(())
    }

    /// Apply a sorted, deduplicated list of canonical-position updates after
    /// clearing `reset`. Non-canonical and forced-zero positions in `updates`
    /// are skipped; their values are regenerated from canonical positions.
    pub(crate) fn commit(&mut self, reset: Reset<'_>, updates: Vec<(usize, T)>) -> Result<()> {
        let updates = if self.groups.is_empty() {
            updates
        } else {
            let mut pending = BTreeMap::new();
            let mut tuple = vec![0usize; self.dims.len()];
            for (index, value) in updates {
                let mut rest = index;
                self.unravel_into(&mut rest, &mut tuple);
                if symmetry::placement(&self.groups, &tuple) == Placement::Canonical {
                    self.stage(&mut pending, &tuple, index, value)?;
                }
            }
            pending.into_iter().collect()
        };
        self.clear(reset)?;
        match &mut self.storage {
            Storage::Dense(values) => {
                for (i, v) in updates {
                    values[i] = v;
                }
            }
            Storage::Sparse(entries) => {
                let zero = self.algebra.add_id();
                let old = std::mem::take(entries);
                *entries = merge_sparse(old, updates, |v| zero.as_ref() == Some(v));
            }
        }
        Ok(())
    }

    fn clear(&mut self, reset: Reset<'_>) -> Result<()> {
        match reset {
            Reset::Nothing => Ok(()),
            Reset::Everything => {
                match &mut self.storage {
                    Storage::Dense(values) => {
                        let zero = self.algebra.require_add_id()?;
                        values.iter_mut().for_each(|v| *v = zero);
                    }
                    Storage::Sparse(entries) => entries.clear(),
                }
                Ok(())
            }
            Reset::Where(pred) => {
                let strides = self.strides.clone();
                let mut tuple = vec![0usize; self.dims.len()];
                let mut hit = |index: usize| {
                    let mut rest = index;
                    for (slot, s) in tuple.iter_mut().zip(&strides) {
                        *slot = rest / s;
                        rest %= s;
                    }
                    pred(&tuple)
                };
                match &mut self.storage {
                    Storage::Dense(values) => {
                        let zero = self.algebra.require_add_id()?;
                        for (i, v) in values.iter_mut().enumerate() {
                            if hit(i) {
                                *v = zero;
                            }
                        }
                    }
                    Storage::Sparse(entries) => entries.retain(|(i, _)| !hit(*i)),
                }
                Ok(())
            }
        }
    }

    /// Keep only the sparse entries whose value satisfies `keep`.
    pub fn sparsify(&mut self, keep: impl Fn(&T) -> bool) -> Result<()> {
        match &mut self.storage {
            Storage::Sparse(entries) => {
                entries.retain(|(_, v)| keep(v));
                Ok(())
            }
            Storage::Dense(_) => Err(Error::NotSparse),
        }
    }

    /// Replace the contents with random values. Each canonical position is
    /// selected independently with probability `density`; selected positions
    /// receive `sampler(rng)`. Samples equal to the additive identity leave
    /// the position empty.
    pub fn fill_random(
        &mut self,
        density: f64,
        seed: u64,
        mut sampler: impl FnMut(&mut ChaCha8Rng) -> T,
    ) -> Result<()> {
        if !(density > 0.0 && density <= 1.0) {
            return Err(Error::InvalidDensity(density));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut updates = Vec::new();
        if self.groups.is_empty() {
            let skip = Geometric::new(density).map_err(|_| Error::InvalidDensity(density))?;
            let mut next: u64 = skip.sample(&mut rng);
            while (next as u128) < self.len as u128 {
                let index = next as usize;
                updates.push((index, sampler(&mut rng)));
                next = next.saturating_add(1).saturating_add(skip.sample(&mut rng));
            }
        } else {
            let mut tuple = vec![0usize; self.dims.len()];
            for index in 0..self.len {
                let mut rest = index;
                self.unravel_into(&mut rest, &mut tuple);
                if symmetry::placement(&self.groups, &tuple) == Placement::Canonical
                    && rng.random_bool(density)
                {
                    updates.push((index, sampler(&mut rng)));
                }
            }
        }
        self.commit(Reset::Everything, updates)
    }

    /// Copy into the other layout. Dense to sparse drops additive identities.
    pub fn to_layout(&self, layout: Layout) -> Result<Tensor<T>> {
        let storage = match layout {
            Layout::Dense => Storage::Dense(self.to_values()?),
            Layout::Sparse => Storage::Sparse(self.nonzeros()),
        };
        Ok(Tensor {
            storage,
            ..self.clone()
        })
    }

    /// Sum of magnitudes over entries that differ from the additive identity.
    pub fn norm1(&self) -> Result<f64> {
        self.magnitudes(|m| m.abs())
    }

    /// Euclidean (Frobenius) norm over entries that differ from the additive
    /// identity.
    pub fn norm2(&self) -> Result<f64> {
        Ok(self.magnitudes(|m| m * m)?.sqrt())
    }

    fn magnitudes(&self, f: impl Fn(f64) -> f64) -> Result<f64> {
        if !self.algebra.has_magnitude() {
            return Err(Error::NoMagnitude);
        }
        Ok(self
            .entries()
            .filter(|(_, v)| !self.algebra.is_add_id(v))
            .map(|(_, v)| f(self.algebra.magnitude(&v).unwrap_or(0.0)))
            .sum())
    }
}

/// Merge sorted `updates` into sorted `old`; updated values for which
/// `is_zero` holds are removed.
fn merge_sparse<T: Copy>(
    old: Vec<(usize, T)>,
    updates: Vec<(usize, T)>,
    is_zero: impl Fn(&T) -> bool,
) -> Vec<(usize, T)> {
    let mut out = Vec::with_capacity(old.len() + updates.len());
    let mut a = old.into_iter().peekable();
    let mut b = updates.into_iter().peekable();
    loop {
        match (a.peek(), b.peek()) {
            (Some(x), Some(y)) if x.0 < y.0 => out.push(a.next().unwrap()),
            (Some(x), Some(y)) => {
                if x.0 == y.0 {
                    a.next();
                }
                let y = b.next().unwrap();
                if !is_zero(&y.1) {
                    out.push(y);
                }
            }
            (Some(_), None) => out.push(a.next().unwrap()),
            (None, Some(_)) => {
                let y = b.next().unwrap();
                if !is_zero(&y.1) {
                    out.push(y);
                }
            }
            (None, None) => break,
        }
    }
    out
}
