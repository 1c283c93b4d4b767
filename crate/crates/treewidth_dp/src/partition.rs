//! Set partitions over small ground sets, their join, and rank-based
//! representative-set reduction over GF(2).

use std::collections::HashSet;

use graph_core::graph::UnionFind;

use crate::TdError;

/// A partition of a sorted ground set, stored canonically: block ids are
/// numbered by first appearance in ground-set order, so equal partitions
/// compare equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    elems: Vec<usize>,
    block: Vec<usize>,
}

impl Partition {
    pub fn empty() -> Self {
        Partition { elems: Vec::new(), block: Vec::new() }
    }

    pub fn singletons(elems: &[usize]) -> Self {
        let mut elems = elems.to_vec();
        elems.sort_unstable();
        elems.dedup();
        let block = (0..elems.len()).collect();
        Partition { elems, block }
    }

    pub fn whole(elems: &[usize]) -> Self {
        let mut elems = elems.to_vec();
        elems.sort_unstable();
        elems.dedup();
        let block = vec![0; elems.len()];
        Partition { elems, block }
    }

    pub fn from_blocks(blocks: &[Vec<usize>]) -> Result<Self, TdError> {
        let mut pairs = Vec::new();
        for (b, blk) in blocks.iter().enumerate() {
            if blk.is_empty() {
                return Err(TdError::Input("partition has an empty block".into()));
            }
            pairs.extend(blk.iter().map(|&e| (e, b)));
        }
        pairs.sort_unstable();
        if pairs.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(TdError::Input("partition blocks overlap".into()));
        }
        let elems = pairs.iter().map(|p| p.0).collect();
        let raw: Vec<usize> = pairs.iter().map(|p| p.1).collect();
        Ok(Partition { elems, block: canonical(&raw) })
    }

    pub fn elems(&self) -> &[usize] {
        &self.elems
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn block_count(&self) -> usize {
        self.block.iter().map(|&b| b + 1).max().unwrap_or(0)
    }

    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.block_count()];
        for (&e, &b) in self.elems.iter().zip(&self.block) {
            out[b].push(e);
        }
        out
    }

    fn pos(&self, e: usize) -> Option<usize> {
        self.elems.binary_search(&e).ok()
    }

    pub fn contains(&self, e: usize) -> bool {
        self.pos(e).is_some()
    }

    pub fn block_of(&self, e: usize) -> Option<usize> {
        self.pos(e).map(|p| self.block[p])
    }

    pub fn block_size(&self, e: usize) -> usize {
        match self.block_of(e) {
            Some(b) => self.block.iter().filter(|&&x| x == b).count(),
            None => 0,
        }
    }

    /// Adds `e` as a singleton block; no-op when already present.
    pub fn insert(&mut self, e: usize) {
        if let Err(p) = self.elems.binary_search(&e) {
            self.elems.insert(p, e);
            self.block.insert(p, usize::MAX);
            self.block = canonical(&self.block);
        }
    }

    pub fn remove(&mut self, e: usize) {
        if let Some(p) = self.pos(e) {
            self.elems.remove(p);
            self.block.remove(p);
            self.block = canonical(&self.block);
        }
    }

    /// Merges the blocks of `a` and `b`, inserting either as a singleton first
    /// if absent.
    pub fn merge(&mut self, a: usize, b: usize) {
        self.insert(a);
        self.insert(b);
        let (ba, bb) = (self.block_of(a).unwrap(), self.block_of(b).unwrap());
        if ba != bb {
            for x in &mut self.block {
                if *x == bb {
                    *x = ba;
                }
            }
            self.block = canonical(&self.block);
        }
    }

    /// Extends the ground set with singletons for every element of `elems`.
    pub fn extended(&self, elems: &[usize]) -> Partition {
        let mut p = self.clone();
        for &e in elems {
            p.insert(e);
        }
        p
    }
}

fn canonical(raw: &[usize]) -> Vec<usize> {
    let mut map: Vec<(usize, usize)> = Vec::new();
    raw.iter()
        .map(|&r| match map.iter().find(|m| m.0 == r) {
            Some(m) => m.1,
            None => {
                map.push((r, map.len()));
                map.len() - 1
            }
        })
        .collect()
}

/// Join of two partitions of the same ground set: blocks are the connected
/// components of the union of both block structures.
pub fn join_partitions(a: &Partition, b: &Partition) -> Result<Partition, TdError> {
    if a.elems != b.elems {
        return Err(TdError::Input(format!("ground sets differ: {:?} vs {:?}", a.elems, b.elems)));
    }
    Ok(join_same_ground(a, b))
}

pub(crate) fn join_same_ground(a: &Partition, b: &Partition) -> Partition {
    let n = a.elems.len();
    let mut uf = UnionFind::new(n);
    for p in [a, b] {
        let mut first = vec![usize::MAX; n];
        for (i, &blk) in p.block.iter().enumerate() {
            if first[blk] == usize::MAX {
                first[blk] = i;
            } else {
                uf.union(first[blk], i);
            }
        }
    }
    let raw: Vec<usize> = (0..n).map(|i| uf.find(i)).collect();
    Partition { elems: a.elems.clone(), block: canonical(&raw) }
}

/// Join over the union of the two ground sets, treating missing elements as
/// singletons on either side.
pub(crate) fn join_extended(a: &Partition, b: &Partition) -> Partition {
    if a.elems == b.elems {
        return join_same_ground(a, b);
    }
    join_same_ground(&a.extended(&b.elems), &b.extended(&a.elems))
}

#[derive(Clone, Debug, PartialEq)]
pub struct WeightedPartition<T> {
    pub partition: Partition,
    pub weight: f64,
    pub payload: T,
}

/// Whether the reduction keeps a GF(2) row basis or every distinct partition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Reduction {
    #[default]
    RankBased,
    KeepAll,
}

/// Minimum-weight representative subset of a group of weighted partitions
/// over one ground set.
///
/// Rows of the cut matrix are partitions, columns are the cuts of the ground
/// set with the first element fixed on one side, and an entry is 1 when every
/// block lies on one side of the cut. Rows are inserted lightest first and
/// kept when independent of the rows kept so far. Ties in weight keep input
/// order. The result has at most `2^(|Y|-1)` entries.
pub fn reduce_representatives<T>(group: Vec<WeightedPartition<T>>) -> Vec<WeightedPartition<T>> {
    reduce_with(group, Reduction::RankBased)
}

pub fn reduce_with<T>(mut group: Vec<WeightedPartition<T>>, mode: Reduction) -> Vec<WeightedPartition<T>> {
    group.sort_by(|a, b| a.weight.total_cmp(&b.weight));
    let mut seen = HashSet::new();
    group.retain(|w| seen.insert(w.partition.clone()));
    let Some(first) = group.first() else { return group };
    let n = first.partition.len();
    debug_assert!(group.iter().all(|w| w.partition.len() == n));
    if mode == Reduction::KeepAll {
        return group;
    }
    if n <= 1 {
        group.truncate(1);
        return group;
    }
    let cols = 1usize << (n - 1);
    let words = cols.div_ceil(64);
    let mut basis: Vec<(usize, Vec<u64>)> = Vec::new();
    let mut out = Vec::new();
    for w in group {
        let mut row = cut_row(&w.partition, cols, words);
        for (pivot, b) in &basis {
            if row[pivot / 64] >> (pivot % 64) & 1 == 1 {
                row.iter_mut().zip(b).for_each(|(x, y)| *x ^= y);
            }
        }
        if let Some(pivot) = first_bit(&row) {
            basis.push((pivot, row));
            out.push(w);
        }
    }
    out
}

fn cut_row(p: &Partition, cols: usize, words: usize) -> Vec<u64> {
    let masks: Vec<u64> = {
        let mut m = vec![0u64; p.block_count()];
        for (i, &b) in p.block.iter().enumerate() {
            m[b] |= 1 << i;
        }
        m
    };
    let mut row = vec![0u64; words];
    for cut in 0..cols {
        let side = (cut as u64) << 1;
        if masks.iter().all(|&m| side & m == 0 || side & m == m) {
            row[cut / 64] |= 1 << (cut % 64);
        }
    }
    row
}

fn first_bit(row: &[u64]) -> Option<usize> {
    row.iter().enumerate().find(|(_, &w)| w != 0).map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
}
