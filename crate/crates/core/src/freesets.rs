//! Free-set search: the three-colour partition of a fixed-point-free map,
//! exact and greedy maximum free subsets for a family of maps, and the
//! unsplit-set oracle for a family of colourings.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::funcgraph::{star_intersection, FiniteFunction, SubsetOfWindow};

/// Largest window accepted by the exhaustive searches.
pub const EXACT_CAP: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawColoring", into = "RawColoring")]
pub struct Coloring {
    colors: Vec<u8>,
}

#[derive(Serialize, Deserialize)]
struct RawColoring {
    n: usize,
    colors: Vec<u8>,
}

impl TryFrom<RawColoring> for Coloring {
    type Error = Error;

    fn try_from(raw: RawColoring) -> Result<Self> {
        if raw.colors.len() != raw.n {
            return Err(Error::LengthMismatch { expected: raw.n, got: raw.colors.len() });
        }
        Coloring::new(raw.colors)
    }
}

impl From<Coloring> for RawColoring {
    fn from(c: Coloring) -> Self {
        RawColoring { n: c.colors.len(), colors: c.colors }
    }
}

impl Coloring {
    pub fn new(colors: Vec<u8>) -> Result<Self> {
        if let Some(&c) = colors.iter().find(|&&c| c > 2) {
            return Err(Error::BadColor(c));
        }
        Ok(Coloring { colors })
    }

    pub fn window(&self) -> usize {
        self.colors.len()
    }

    pub fn colors(&self) -> &[u8] {
        &self.colors
    }

    pub fn color(&self, x: usize) -> u8 {
        self.colors[x]
    }

    pub fn class(&self, c: u8) -> SubsetOfWindow {
        (0..self.window()).filter(|&x| self.colors[x] == c).collect()
    }

    pub fn classes(&self) -> [SubsetOfWindow; 3] {
        [self.class(0), self.class(1), self.class(2)]
    }

    /// In-window edges whose endpoints share a colour.
    pub fn monochromatic_edges(&self, f: &FiniteFunction) -> Vec<(usize, usize)> {
        f.edges().filter(|&(x, y)| self.colors[x] == self.colors[y]).collect()
    }
}

fn other(c: u8) -> u8 {
    if c == 0 { 1 } else { 0 }
}

/// Three-colours the window so that no in-window edge is monochromatic.
///
/// Nodes are visited from the lowest index. From each uncoloured node the
/// forward chain is followed until it leaves the window, reaches a coloured
/// node, or closes a cycle. A chain running off the window alternates 0/1
/// from its first node; a chain ending at a coloured node is coloured
/// backwards so each node differs from its successor. A new cycle alternates
/// 0/1 from its entry point and its closing node takes colour 2 when the
/// cycle is odd.
pub fn katetov_partition(f: &FiniteFunction) -> Result<Coloring> {
    f.require_fixed_point_free()?;
    let n = f.window();
    const NONE: u8 = u8::MAX;
    let mut colors = vec![NONE; n];
    let mut pos_in_walk = vec![usize::MAX; n];

    for start in 0..n {
        if colors[start] != NONE {
            continue;
        }
        let mut walk = Vec::new();
        let mut x = start;
        let stop = loop {
            pos_in_walk[x] = walk.len();
            walk.push(x);
            match f.in_window(x) {
                None => break Stop::Boundary,
                Some(y) if colors[y] != NONE => break Stop::Colored(colors[y]),
                Some(y) if pos_in_walk[y] != usize::MAX => break Stop::Cycle(pos_in_walk[y]),
                Some(y) => x = y,
            }
        };

        let tail_end = match stop {
            Stop::Boundary => {
                for (t, &v) in walk.iter().enumerate() {
                    colors[v] = (t % 2) as u8;
                }
                0
            }
            Stop::Colored(c) => {
                let last = walk.len() - 1;
                colors[walk[last]] = other(c);
                last
            }
            Stop::Cycle(j) => {
                let len = walk.len() - j;
                for t in 0..len {
                    colors[walk[j + t]] = (t % 2) as u8;
                }
                if len % 2 == 1 {
                    colors[walk[j + len - 1]] = 2;
                }
                j
            }
        };
        for t in (0..tail_end).rev() {
            colors[walk[t]] = other(colors[walk[t + 1]]);
        }
        for &v in &walk {
            pos_in_walk[v] = usize::MAX;
        }
    }
    Coloring::new(colors)
}

enum Stop {
    Boundary,
    Colored(u8),
    Cycle(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SearchMode {
    Exact,
    Greedy,
}

/// Undirected conflict graph of a family on `[0, n)` as bitmasks, plus the
/// points that can never be in a free set (self-loops).
fn conflict_masks(family: &[FiniteFunction], n: usize) -> (Vec<u32>, u32) {
    let mut adj = vec![0u32; n];
    let mut banned = 0u32;
    for f in family {
        for x in 0..n.min(f.window()) {
            let y = f.apply(x);
            if y >= n {
                continue;
            }
            if y == x {
                banned |= 1 << x;
            } else {
                adj[x] |= 1 << y;
                adj[y] |= 1 << x;
            }
        }
    }
    (adj, banned)
}

/// A largest (exact) or inclusion-maximal (greedy) subset of `[0, n)` that is
/// free for every function of the family.
///
/// Exact mode returns the lexicographically least set among those of maximum
/// size and refuses windows above [`EXACT_CAP`]. Greedy mode scans points in
/// increasing order, keeping each one that creates no in-window edge.
pub fn max_free_subset(family: &[FiniteFunction], n: usize, mode: SearchMode) -> Result<SubsetOfWindow> {
    match mode {
        SearchMode::Exact => exact_max_free(family, n),
        SearchMode::Greedy => Ok(greedy_max_free(family, n)),
    }
}

fn exact_max_free(family: &[FiniteFunction], n: usize) -> Result<SubsetOfWindow> {
    if n > EXACT_CAP {
        return Err(Error::CapExceeded { cap: EXACT_CAP, got: n });
    }
    let (adj, banned) = conflict_masks(family, n);
    let all = if n == 0 { 0 } else { (1u32 << n) - 1 };
    let mut best = (0u32, 0u32);
    mis_search(&adj, 0, all & !banned, &mut best);
    Ok((0..n).filter(|&x| best.0 >> x & 1 == 1).collect())
}

/// Include-first branching over the lowest candidate; the first set found at
/// each size is the lexicographically least one.
fn mis_search(adj: &[u32], current: u32, candidates: u32, best: &mut (u32, u32)) {
    let size = current.count_ones();
    if size > best.1 {
        *best = (current, size);
    }
    if candidates == 0 || size + candidates.count_ones() <= best.1 {
        return;
    }
    let v = candidates.trailing_zeros() as usize;
    let bit = 1u32 << v;
    mis_search(adj, current | bit, candidates & !bit & !adj[v], best);
    mis_search(adj, current, candidates & !bit, best);
}

fn greedy_max_free(family: &[FiniteFunction], n: usize) -> SubsetOfWindow {
    let mut chosen = vec![false; n];
    let mut neighbors: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut banned = vec![false; n];
    for f in family {
        for x in 0..n.min(f.window()) {
            let y = f.apply(x);
            if y >= n {
                continue;
            }
            if x == y {
                banned[x] = true;
            } else {
                neighbors[x].push(y);
                neighbors[y].push(x);
            }
        }
    }
    for x in 0..n {
        if !banned[x] && neighbors[x].iter().all(|&y| !chosen[y]) {
            chosen[x] = true;
        }
    }
    (0..n).filter(|&x| chosen[x]).collect()
}

/// An unsplit set together with the colour it takes in each colouring.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnsplitSet {
    pub set: SubsetOfWindow,
    pub choice: Vec<u8>,
}

/// Largest set that is monochromatic in every colouring, if it has at least
/// `min_size` points.
///
/// Monochromatic sets are exactly the subsets of cells of the common
/// refinement, so the answer is a largest cell; ties go to the cell with the
/// least element.
pub fn find_unsplit_set(colorings: &[Coloring], n: usize, min_size: usize) -> Result<Option<UnsplitSet>> {
    for c in colorings {
        if c.window() != n {
            return Err(Error::WindowMismatch(n, c.window()));
        }
    }
    let mut cells: std::collections::BTreeMap<Vec<u8>, Vec<usize>> = Default::default();
    for x in 0..n {
        let key: Vec<u8> = colorings.iter().map(|c| c.color(x)).collect();
        cells.entry(key).or_default().push(x);
    }
    let best = cells
        .into_iter()
        .max_by(|(_, a), (_, b)| a.len().cmp(&b.len()).then(b[0].cmp(&a[0])));
    Ok(best.and_then(|(choice, members)| {
        (members.len() >= min_size).then(|| UnsplitSet { set: SubsetOfWindow::new(members).unwrap(), choice })
    }))
}

/// `|f[A] ∩ A|` inside the window, for each function of the family.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FreeReport {
    pub per_function: Vec<usize>,
}

impl FreeReport {
    pub fn all_within(&self, threshold: usize) -> bool {
        self.per_function.iter().all(|&c| c <= threshold)
    }
}

pub fn free_report(a: &SubsetOfWindow, family: &[FiniteFunction]) -> FreeReport {
    FreeReport { per_function: family.iter().map(|f| star_intersection(a, f).len()).collect() }
}
