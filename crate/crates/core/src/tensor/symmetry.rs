use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Relation between dimension `i` and dimension `i + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Symmetry {
    /// Nonsymmetric.
    NS,
    /// Symmetric, diagonal included.
    SY,
    /// Symmetric, diagonal forced to the additive identity.
    SH,
    /// Antisymmetric, diagonal forced to the additive identity.
    AS,
}

/// A maximal run of dimensions tied together by one non-NS tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct SymGroup {
    pub start: usize,
    pub len: usize,
    pub kind: Symmetry,
}

pub(crate) fn groups(dims: &[usize], sym: &[Symmetry]) -> Result<Vec<SymGroup>> {
    if sym.len() != dims.len() {
        return Err(Error::SymmetryLength {
            expected: dims.len(),
            got: sym.len(),
        });
    }
    if let Some(last) = sym.last() {
        if *last != Symmetry::NS {
            return Err(Error::SymmetryOnLastDimension);
        }
    }
    let mut out = Vec::new();
    let mut i = 0;
    while i < sym.len() {
        if sym[i] == Symmetry::NS {
            i += 1;
            continue;
        }
        let start = i;
        let kind = sym[i];
        while sym[i] != Symmetry::NS {
            if sym[i] != kind {
                return Err(Error::MixedSymmetryGroup { start });
            }
            if dims[i] != dims[i + 1] {
                return Err(Error::SymmetricDimensionMismatch {
                    first: i,
                    second: i + 1,
                    left: dims[i],
                    right: dims[i + 1],
                });
            }
            i += 1;
        }
        out.push(SymGroup {
            start,
            len: i - start + 1,
            kind,
        });
        i += 1;
    }
    Ok(out)
}

/// Where an index tuple stands relative to the symmetry groups.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Placement {
    Canonical,
    NonCanonical,
    /// Repeated index inside an SH/AS group.
    ForcedZero,
}

pub(crate) fn placement(groups: &[SymGroup], tuple: &[usize]) -> Placement {
    let mut result = Placement::Canonical;
    for g in groups {
        let run = &tuple[g.start..g.start + g.len];
        let strict = g.kind != Symmetry::SY;
        for w in run.windows(2) {
            if w[0] == w[1] && strict {
                return Placement::ForcedZero;
            }
            if w[0] > w[1] {
                result = Placement::NonCanonical;
            }
        }
        if strict && result == Placement::NonCanonical {
            let mut sorted = run.to_vec();
            sorted.sort_unstable();
            if sorted.windows(2).any(|w| w[0] == w[1]) {
                return Placement::ForcedZero;
            }
        }
    }
    result
}

/// Sort each group of `tuple` ascending. Returns the canonical tuple and
/// whether an odd permutation was applied to an antisymmetric group.
#[cfg(test)]
pub(crate) fn canonicalize(groups: &[SymGroup], tuple: &[usize]) -> (Vec<usize>, bool) {
    let mut t = tuple.to_vec();
    let mut odd = false;
    for g in groups {
        let run = &mut t[g.start..g.start + g.len];
        // bubble sort keeps the parity count simple; groups are tiny
        let mut swaps = 0usize;
        for i in 0..run.len() {
            for j in 0..run.len() - 1 - i {
                if run[j] > run[j + 1] {
                    run.swap(j, j + 1);
                    swaps += 1;
                }
            }
        }
        if g.kind == Symmetry::AS && swaps % 2 == 1 {
            odd = !odd;
        }
    }
    (t, odd)
}

/// All distinct index tuples that mirror a canonical tuple, each with the
/// parity of the antisymmetric permutation that produced it.
pub(crate) fn images(groups: &[SymGroup], canonical: &[usize]) -> Vec<(Vec<usize>, bool)> {
    let mut out: Vec<(Vec<usize>, bool)> = vec![(canonical.to_vec(), false)];
    for g in groups {
        let perms = permutations(g.len);
        let mut next = Vec::with_capacity(out.len() * perms.len());
        for (t, odd) in &out {
            for (perm, perm_odd) in &perms {
                let mut u = t.clone();
                for (k, &p) in perm.iter().enumerate() {
                    u[g.start + k] = t[g.start + p];
                }
                let flip = g.kind == Symmetry::AS && *perm_odd;
                next.push((u, *odd ^ flip));
            }
        }
        out = next;
    }
    out.sort();
    out.dedup_by(|a, b| a.0 == b.0);
    out
}

fn permutations(n: usize) -> Vec<(Vec<usize>, bool)> {
    fn rec(prefix: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                rec(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut all = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut all);
    all.into_iter()
        .map(|p| {
            let inversions = (0..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .filter(|&(i, j)| p[i] > p[j])
                .count();
            (p, inversions % 2 == 1)
        })
        .collect()
}
