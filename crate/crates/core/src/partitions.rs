//! Interval partitions and the functions built from them: the partition map
//! `f_P`, escape intervals of a function, localisation of a function to the
//! blocks of a set, and greedy edge blocks.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::funcgraph::{FiniteFunction, SubsetOfWindow};

/// Blocks `[e_i, e_{i+1})` of a prefix `[0, e_last)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawIntervals", into = "RawIntervals")]
pub struct IntervalPartition {
    endpoints: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct RawIntervals {
    endpoints: Vec<usize>,
}

impl TryFrom<RawIntervals> for IntervalPartition {
    type Error = Error;

    fn try_from(raw: RawIntervals) -> Result<Self> {
        IntervalPartition::new(raw.endpoints)
    }
}

impl From<IntervalPartition> for RawIntervals {
    fn from(p: IntervalPartition) -> Self {
        RawIntervals { endpoints: p.endpoints }
    }
}

impl IntervalPartition {
    pub fn new(endpoints: Vec<usize>) -> Result<Self> {
        if endpoints.first() != Some(&0) || endpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::BadEndpoints);
        }
        Ok(IntervalPartition { endpoints })
    }

    /// Blocks of `width` up to `n`; the last block is shorter when `width`
    /// does not divide `n`.
    pub fn uniform(width: usize, n: usize) -> Self {
        assert!(width > 0);
        let mut endpoints: Vec<usize> = (0..n).step_by(width).collect();
        endpoints.push(n);
        if n == 0 {
            endpoints.truncate(1);
        }
        IntervalPartition { endpoints }
    }

    pub fn endpoints(&self) -> &[usize] {
        &self.endpoints
    }

    pub fn end(&self) -> usize {
        *self.endpoints.last().expect("starts at 0")
    }

    pub fn block_count(&self) -> usize {
        self.endpoints.len() - 1
    }

    pub fn blocks(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.endpoints.windows(2).map(|w| (w[0], w[1]))
    }

    /// Index of the block holding `x`, if `x` is inside the covered prefix.
    pub fn block_of(&self, x: usize) -> Option<usize> {
        if x >= self.end() {
            return None;
        }
        Some(self.endpoints.partition_point(|&e| e <= x) - 1)
    }
}

/// Assignment of each window point to one of `part_count` nonempty parts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawParts", into = "RawParts")]
pub struct PartitionIntoParts {
    part_of: Vec<usize>,
    part_count: usize,
}

#[derive(Serialize, Deserialize)]
struct RawParts {
    n: usize,
    parts: Vec<usize>,
}

impl TryFrom<RawParts> for PartitionIntoParts {
    type Error = Error;

    fn try_from(raw: RawParts) -> Result<Self> {
        if raw.parts.len() != raw.n {
            return Err(Error::LengthMismatch { expected: raw.n, got: raw.parts.len() });
        }
        PartitionIntoParts::new(raw.parts)
    }
}

impl From<PartitionIntoParts> for RawParts {
    fn from(p: PartitionIntoParts) -> Self {
        RawParts { n: p.part_of.len(), parts: p.part_of }
    }
}

impl PartitionIntoParts {
    /// Part count is one more than the largest label; every label below it
    /// must be used.
    pub fn new(part_of: Vec<usize>) -> Result<Self> {
        let part_count = part_of.iter().max().map_or(0, |m| m + 1);
        let mut used = vec![false; part_count];
        for &p in &part_of {
            used[p] = true;
        }
        if let Some(k) = used.iter().position(|u| !u) {
            return Err(Error::EmptyPart(k));
        }
        Ok(PartitionIntoParts { part_of, part_count })
    }

    pub fn window(&self) -> usize {
        self.part_of.len()
    }

    pub fn part_count(&self) -> usize {
        self.part_count
    }

    pub fn part_of(&self, x: usize) -> usize {
        self.part_of[x]
    }

    pub fn part(&self, k: usize) -> SubsetOfWindow {
        (0..self.window()).filter(|&x| self.part_of[x] == k).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DominationReport {
    pub violations: usize,
    pub last_violation: Option<usize>,
}

/// Counts the blocks of `outer` inside `[0, n)` that contain no complete
/// block of `inner` inside `[0, n)`.
pub fn dominates(outer: &IntervalPartition, inner: &IntervalPartition, n: usize) -> DominationReport {
    let inner_blocks: Vec<(usize, usize)> = inner.blocks().filter(|&(_, hi)| hi <= n).collect();
    let mut violations = 0;
    let mut last_violation = None;
    for (index, (lo, hi)) in outer.blocks().enumerate().filter(|&(_, (_, hi))| hi <= n) {
        let first = inner_blocks.partition_point(|&(start, _)| start < lo);
        let nested = inner_blocks.get(first).is_some_and(|&(_, end)| end <= hi);
        if !nested {
            violations += 1;
            last_violation = Some(index);
        }
    }
    DominationReport { violations, last_violation }
}

/// `f_P(k) = p(k)` when `k` lies in a part whose index differs from `k`,
/// otherwise `k + 1`.
pub fn partition_function(p: &PartitionIntoParts) -> FiniteFunction {
    FiniteFunction::from_fn(p.window(), |k| {
        let part = p.part_of(k);
        if part != k { part } else { k + 1 }
    })
    .expect("partition has a non-empty window")
}

/// Escape intervals: `h(0) = 0` and
/// `h(i+1) = 1 + max(f[0..=h(i)] ∪ f⁻¹[0..=h(i)] ∪ {h(i)})`,
/// stopped once the next value reaches the window edge. The last block runs
/// to `N` and may be shorter than the recurrence asks.
pub fn escape_intervals(f: &FiniteFunction) -> IntervalPartition {
    let n = f.window();
    let mut last_preimage = vec![None; n];
    for (x, y) in f.edges() {
        last_preimage[y] = Some(x);
    }
    let mut endpoints = vec![0];
    let mut h = 0;
    let mut folded = 0;
    let mut reach = 0usize;
    loop {
        while folded <= h {
            reach = reach.max(f.apply(folded));
            if let Some(x) = last_preimage[folded] {
                reach = reach.max(x);
            }
            folded += 1;
        }
        let next = reach.max(h).saturating_add(1);
        if next >= n {
            break;
        }
        endpoints.push(next);
        h = next;
    }
    endpoints.push(n);
    IntervalPartition { endpoints }
}

/// Keeps `g(i)` when `i` and `g(i)` share a block `[a_j, a_{j+1})` of
/// consecutive elements of `a`; every other point goes to `i + 1`.
pub fn localized_function(g: &FiniteFunction, a: &SubsetOfWindow) -> Result<FiniteFunction> {
    g.require_fixed_point_free()?;
    if a.len() < 2 {
        return Err(Error::Precondition("localising set needs at least two points".into()));
    }
    let blocks = a.elements();
    let block_of = |x: usize| -> Option<usize> {
        let j = blocks.partition_point(|&e| e <= x);
        (j > 0 && j < blocks.len()).then(|| j - 1)
    };
    FiniteFunction::from_fn(g.window(), |i| {
        let gi = g.apply(i);
        match block_of(i) {
            Some(j) if block_of(gi) == Some(j) => gi,
            _ => i + 1,
        }
    })
}

/// Greedy endpoints `0 = b_0 < b_1 < …` where each block is closed right after
/// the first in-window edge `x -> g(x)` with `x, g(x) ∈ A` lying wholly
/// inside it. The trailing partial block is dropped.
pub fn edge_blocks(g: &FiniteFunction, a: &SubsetOfWindow) -> Result<IntervalPartition> {
    let n = g.window();
    let mask = a.mask(n);
    let mut spans: Vec<(usize, usize)> = g
        .edges()
        .filter(|&(x, y)| mask[x] && mask[y])
        .map(|(x, y)| (x.max(y), x.min(y)))
        .collect();
    if spans.is_empty() {
        return Err(Error::NoEdge(0));
    }
    spans.sort_unstable();
    let mut endpoints = vec![0];
    let mut start = 0;
    for (hi, lo) in spans {
        if lo >= start {
            start = hi + 1;
            endpoints.push(start);
        }
    }
    Ok(IntervalPartition { endpoints })
}

/// Every part meets `a` in at least `threshold` points.
pub fn splits_all_parts(a: &SubsetOfWindow, p: &PartitionIntoParts, threshold: usize) -> bool {
    let mut counts = vec![0usize; p.part_count()];
    for x in a.iter().filter(|&x| x < p.window()) {
        counts[p.part_of(x)] += 1;
    }
    counts.iter().all(|&c| c >= threshold)
}
