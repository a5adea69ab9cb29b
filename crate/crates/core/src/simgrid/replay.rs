use serde::{Deserialize, Serialize};

use super::SimReport;
use crate::planner::Grid;

/// Sparsity pattern of a folded multiplication `C (m x n) = A (m x k) * B`.
#[derive(Debug, Clone, Copy)]
pub struct SummaInput<'a> {
    pub m: usize,
    pub k: usize,
    pub n: usize,
    /// `(row, column)` of every stored entry of `A`.
    pub a_entries: &'a [(usize, usize)],
    /// `(row, column)` of every stored entry of `B`; `None` when dense.
    pub b_entries: Option<&'a [(usize, usize)]>,
}

/// Words moved per operand, summed over receivers, plus the largest amount
/// any single process received.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhaseWords {
    pub a_total: u64,
    pub b_total: u64,
    pub c_total: u64,
    pub a_max_received: u64,
    pub b_max_received: u64,
    pub c_max_received: u64,
}

/// Number of `i` in `0..len` with `i % q == r`.
fn residue_count(len: usize, q: usize, r: usize) -> usize {
    if r >= len {
        0
    } else {
        (len - r).div_ceil(q)
    }
}

struct Tally {
    sent: Vec<u64>,
    received: Vec<u64>,
    words: Vec<u64>,
}

impl Tally {
    /// Pass a block along a chain of processes: each member but the last
    /// sends it on, each member but the first receives it. Returns the
    /// received words per member.
    fn chain(&mut self, members: &[usize], size: u64, received_by: &mut [u64]) {
        if size == 0 {
            return;
        }
        let last = members.len() - 1;
        for (pos, &proc) in members.iter().enumerate() {
            let s = if pos < last { size } else { 0 };
            let r = if pos > 0 { size } else { 0 };
            self.sent[proc] += s;
            self.received[proc] += r;
            self.words[proc] += s.max(r);
            received_by[proc] += r;
        }
    }
}

/// Count the words moved by the block schedule of `grid`.
///
/// Process `(x1, x2, x3)` multiplies `A` block `(x1, x2)` (columns
/// `≡ x1 mod p1`, rows `≡ x2 mod p2`) with `B` block `(x1, x3)` into a
/// partial `C` block `(x2, x3)`. Three phases move data:
///
/// 1. each `A` block is passed along `x3` starting at `x3 = (x1 + x2) mod p3`;
/// 2. each `B` block is passed along `x2` starting at `x2 = (x1 + x3) mod p2`;
/// 3. partial `C` blocks are summed along `x1` towards `x1 = (x2 + x3) mod p1`.
///
/// Sparse blocks move their stored entries, partial `C` blocks move every
/// cell.
pub fn replay_summa(input: &SummaInput<'_>, grid: Grid) -> SimReport {
    let [p1, p2, p3] = grid;
    let procs = p1 * p2 * p3;
    let id = |x1: usize, x2: usize, x3: usize| (x1 * p2 + x2) * p3 + x3;

    let mut a_blocks = vec![0u64; p1 * p2];
    for &(row, col) in input.a_entries {
        a_blocks[(col % p1) * p2 + row % p2] += 1;
    }
    let mut b_blocks = vec![0u64; p1 * p3];
    match input.b_entries {
        Some(entries) => {
            for &(row, col) in entries {
                b_blocks[(row % p1) * p3 + col % p3] += 1;
            }
        }
        None => {
            for x1 in 0..p1 {
                for x3 in 0..p3 {
                    b_blocks[x1 * p3 + x3] = (residue_count(input.k, p1, x1)
                        * residue_count(input.n, p3, x3))
                        as u64;
                }
            }
        }
    }

    let mut tally = Tally {
        sent: vec![0; procs],
        received: vec![0; procs],
        words: vec![0; procs],
    };
    let mut recv_a = vec![0u64; procs];
    let mut recv_b = vec![0u64; procs];
    let mut recv_c = vec![0u64; procs];
    let mut chain = Vec::new();

    for x1 in 0..p1 {
        for x2 in 0..p2 {
            let root = (x1 + x2) % p3;
            chain.clear();
            chain.extend((0..p3).map(|s| id(x1, x2, (root + s) % p3)));
            tally.chain(&chain, a_blocks[x1 * p2 + x2], &mut recv_a);
        }
    }
    for x1 in 0..p1 {
        for x3 in 0..p3 {
            let root = (x1 + x3) % p2;
            chain.clear();
            chain.extend((0..p2).map(|s| id(x1, (root + s) % p2, x3)));
            tally.chain(&chain, b_blocks[x1 * p3 + x3], &mut recv_b);
        }
    }
    for x2 in 0..p2 {
        for x3 in 0..p3 {
            let root = (x2 + x3) % p1;
            let cells = (residue_count(input.m, p2, x2) * residue_count(input.n, p3, x3)) as u64;
            chain.clear();
            chain.extend((1..=p1).map(|s| id((root + s) % p1, x2, x3)));
            tally.chain(&chain, cells, &mut recv_c);
        }
    }

    let mut nnz = vec![0usize; procs];
    for x1 in 0..p1 {
        for x2 in 0..p2 {
            for x3 in 0..p3 {
                nnz[id(x1, x2, x3)] = a_blocks[x1 * p2 + x2] as usize;
            }
        }
    }
    let stats = super::assign::stats(&nnz);
    let phases = PhaseWords {
        a_total: recv_a.iter().sum(),
        b_total: recv_b.iter().sum(),
        c_total: recv_c.iter().sum(),
        a_max_received: recv_a.iter().copied().max().unwrap_or(0),
        b_max_received: recv_b.iter().copied().max().unwrap_or(0),
        c_max_received: recv_c.iter().copied().max().unwrap_or(0),
    };
    SimReport {
        grid,
        max_nnz: stats.max,
        mean_nnz: stats.mean,
        balance_ratio: stats.ratio,
        total_words: tally.received.iter().sum(),
        max_words: tally.words.iter().copied().max().unwrap_or(0),
        nnz,
        sent: tally.sent,
        received: tally.received,
        words: tally.words,
        phases,
        predicted_w: None,
    }
}
