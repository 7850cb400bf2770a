//! Rosenthal matrices with exact rational entries, ε-fragmentation, and the
//! 0-1 matrix of a fixed-point-free function.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::freesets::SearchMode;
use crate::funcgraph::{FiniteFunction, SubsetOfWindow};
use crate::ratio;

/// Largest `min(K, N)` accepted by the exact fragmenting-set search.
pub const EXACT_CAP: usize = 22;

/// A nonnegative `K x N` matrix whose row sums stay below `row_bound`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawMatrix", into = "RawMatrix")]
pub struct RosenthalMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Vec<BigRational>>,
    row_bound: BigRational,
}

#[derive(Serialize, Deserialize)]
struct RawMatrix {
    k: usize,
    n: usize,
    #[serde(with = "ratio")]
    row_bound: BigRational,
    entries: Vec<Vec<String>>,
}

impl TryFrom<RawMatrix> for RosenthalMatrix {
    type Error = Error;

    fn try_from(raw: RawMatrix) -> Result<Self> {
        let entries = raw
            .entries
            .iter()
            .map(|row| row.iter().map(|t| ratio::parse_ratio(t)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        if entries.len() != raw.k {
            return Err(Error::LengthMismatch { expected: raw.k, got: entries.len() });
        }
        if let Some(row) = entries.iter().find(|r| r.len() != raw.n) {
            return Err(Error::LengthMismatch { expected: raw.n, got: row.len() });
        }
        RosenthalMatrix::new(raw.n, entries, raw.row_bound)
    }
}

impl From<RosenthalMatrix> for RawMatrix {
    fn from(m: RosenthalMatrix) -> Self {
        RawMatrix {
            k: m.rows,
            n: m.cols,
            row_bound: m.row_bound,
            entries: m.entries.iter().map(|r| r.iter().map(ratio::format_ratio).collect()).collect(),
        }
    }
}

impl RosenthalMatrix {
    pub fn new(cols: usize, entries: Vec<Vec<BigRational>>, row_bound: BigRational) -> Result<Self> {
        for (k, row) in entries.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::LengthMismatch { expected: cols, got: row.len() });
            }
            if row.iter().any(|e| !ratio::is_nonnegative(e)) {
                return Err(Error::Precondition(format!("row {k} has a negative entry")));
            }
            let sum: BigRational = row.iter().sum();
            if sum > row_bound {
                return Err(Error::Precondition(format!(
                    "row {k} sums to {} above the bound {}",
                    ratio::format_ratio(&sum),
                    ratio::format_ratio(&row_bound)
                )));
            }
        }
        Ok(RosenthalMatrix { rows: entries.len(), cols, entries, row_bound })
    }

    /// Every entry equal to `value`, with the tightest row bound.
    pub fn constant(rows: usize, cols: usize, value: BigRational) -> Self {
        let bound = &value * BigRational::from_integer(cols.into());
        RosenthalMatrix::new(cols, vec![vec![value; cols]; rows], bound).expect("constant rows meet their bound")
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        Self::constant(rows, cols, BigRational::zero())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entry(&self, k: usize, n: usize) -> &BigRational {
        &self.entries[k][n]
    }

    pub fn row_bound(&self) -> &BigRational {
        &self.row_bound
    }

    /// Indices usable as both a row and a column.
    pub fn square_size(&self) -> usize {
        self.rows.min(self.cols)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FragmentWitness {
    pub row: usize,
    #[serde(with = "ratio")]
    pub sum: BigRational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FragmentReport {
    pub fragments: bool,
    pub witness: Option<FragmentWitness>,
}

/// Whether every row `k ∈ A` has off-diagonal sum over `A` strictly below `eps`.
/// On failure the least violating row is reported.
pub fn fragments(m: &RosenthalMatrix, a: &SubsetOfWindow, eps: &BigRational) -> Result<FragmentReport> {
    a.check_within(m.square_size())?;
    for k in a.iter() {
        let row = &m.entries[k];
        let mut sum = BigRational::zero();
        for c in a.iter().filter(|&c| c != k) {
            if !row[c].is_zero() {
                sum += &row[c];
            }
        }
        if sum >= *eps {
            return Ok(FragmentReport { fragments: false, witness: Some(FragmentWitness { row: k, sum }) });
        }
    }
    Ok(FragmentReport { fragments: true, witness: None })
}

/// `m[k][f(k)] = 1` when `f(k)` is inside the window; every other entry is 0.
pub fn function_to_matrix(f: &FiniteFunction) -> Result<RosenthalMatrix> {
    f.require_fixed_point_free()?;
    let n = f.window();
    let entries = (0..n)
        .map(|k| {
            let mut row = vec![BigRational::zero(); n];
            if let Some(y) = f.in_window(k) {
                row[y] = ratio::one();
            }
            row
        })
        .collect();
    RosenthalMatrix::new(n, entries, ratio::one())
}

/// Integer rescaling of the square part of a matrix and of `eps` by the lcm
/// of all their denominators, so the search compares integers.
struct Scaled<T> {
    entries: Vec<Vec<T>>,
    eps: T,
}

fn scale(m: &RosenthalMatrix, eps: &BigRational) -> Scaled<BigInt> {
    let w = m.square_size();
    let mut lcm = eps.denom().clone();
    for row in &m.entries[..w] {
        for e in &row[..w] {
            lcm = lcm.lcm(e.denom());
        }
    }
    let lift = |r: &BigRational| r.numer() * (&lcm / r.denom());
    Scaled {
        entries: m.entries[..w].iter().map(|row| row[..w].iter().map(lift).collect()).collect(),
        eps: lift(eps),
    }
}

fn narrow(s: &Scaled<BigInt>) -> Option<Scaled<i128>> {
    let w = s.entries.len() as i128 + 1;
    let limit = i128::MAX / w;
    let fit = |x: &BigInt| x.to_i128().filter(|v| v.abs() < limit);
    Some(Scaled {
        entries: s.entries.iter().map(|r| r.iter().map(fit).collect::<Option<Vec<_>>>()).collect::<Option<Vec<_>>>()?,
        eps: fit(&s.eps)?,
    })
}

trait Weight: Clone + PartialOrd + Zero + for<'a> std::ops::Add<&'a Self, Output = Self> {}
impl<T: Clone + PartialOrd + Zero + for<'a> std::ops::Add<&'a T, Output = T>> Weight for T {}

/// A largest set fragmenting `m` at `eps`, provided it has at least
/// `min_size` points.
///
/// Exact mode is an include-first branch and bound over `[0, min(K, N))`
/// (capped at [`EXACT_CAP`]) and returns the lexicographically least maximum
/// set. Greedy mode repeatedly adds the index whose addition yields the
/// smallest maximum row sum, ties to the smaller index, stops when no index
/// stays below `eps`, and re-checks the result with [`fragments`].
pub fn find_fragmenting_set(
    m: &RosenthalMatrix,
    eps: &BigRational,
    min_size: usize,
    mode: SearchMode,
) -> Result<Option<SubsetOfWindow>> {
    let w = m.square_size();
    if mode == SearchMode::Exact && w > EXACT_CAP {
        return Err(Error::CapExceeded { cap: EXACT_CAP, got: w });
    }
    let scaled = scale(m, eps);
    let found = match (mode, narrow(&scaled)) {
        (SearchMode::Exact, Some(s)) => exact_search(&s),
        (SearchMode::Exact, None) => exact_search(&scaled),
        (SearchMode::Greedy, Some(s)) => greedy_search(&s),
        (SearchMode::Greedy, None) => greedy_search(&scaled),
    };
    if mode == SearchMode::Greedy {
        assert!(fragments(m, &found, eps)?.fragments, "greedy set failed verification");
    }
    Ok((found.len() >= min_size).then_some(found))
}

fn exact_search<T: Weight>(s: &Scaled<T>) -> SubsetOfWindow {
    let mut search = ExactSearch { s, chosen: Vec::new(), sums: Vec::new(), best: Vec::new() };
    search.run(0);
    search.best.into_iter().collect()
}

struct ExactSearch<'a, T> {
    s: &'a Scaled<T>,
    chosen: Vec<usize>,
    /// Off-diagonal row sum over `chosen` for each chosen row.
    sums: Vec<T>,
    best: Vec<usize>,
}

impl<T: Weight> ExactSearch<'_, T> {
    fn run(&mut self, v: usize) {
        if self.chosen.len() > self.best.len() {
            self.best = self.chosen.clone();
        }
        let remaining = self.s.entries.len() - v;
        if remaining == 0 || self.chosen.len() + remaining <= self.best.len() {
            return;
        }
        if let Some(new_sums) = self.try_add(v) {
            let old = std::mem::replace(&mut self.sums, new_sums);
            self.chosen.push(v);
            self.run(v + 1);
            self.chosen.pop();
            self.sums = old;
        }
        self.run(v + 1);
    }

    /// Row sums after adding `v`, if every one stays below eps.
    fn try_add(&self, v: usize) -> Option<Vec<T>> {
        let e = &self.s.entries;
        let mut out = Vec::with_capacity(self.sums.len() + 1);
        for (&k, sum) in self.chosen.iter().zip(&self.sums) {
            let next = sum.clone() + &e[k][v];
            if next >= self.s.eps {
                return None;
            }
            out.push(next);
        }
        let own = self.chosen.iter().fold(T::zero(), |acc, &c| acc + &e[v][c]);
        if own >= self.s.eps {
            return None;
        }
        out.push(own);
        Some(out)
    }
}

fn greedy_search<T: Weight>(s: &Scaled<T>) -> SubsetOfWindow {
    let w = s.entries.len();
    let e = &s.entries;
    let mut chosen: Vec<usize> = Vec::new();
    let mut sums: Vec<T> = Vec::new();
    let mut used = vec![false; w];
    loop {
        let mut pick: Option<(T, usize)> = None;
        for v in (0..w).filter(|&v| !used[v]) {
            let own = chosen.iter().fold(T::zero(), |acc, &c| acc + &e[v][c]);
            let mut worst = own;
            for (&k, sum) in chosen.iter().zip(&sums) {
                let next = sum.clone() + &e[k][v];
                if next > worst {
                    worst = next;
                }
            }
            if worst >= s.eps {
                continue;
            }
            if pick.as_ref().is_none_or(|(best, _)| worst < *best) {
                pick = Some((worst, v));
            }
        }
        let Some((_, v)) = pick else { break };
        for (&k, sum) in chosen.iter().zip(sums.iter_mut()) {
            *sum = sum.clone() + &e[k][v];
        }
        sums.push(chosen.iter().fold(T::zero(), |acc, &c| acc + &e[v][c]));
        chosen.push(v);
        used[v] = true;
    }
    chosen.into_iter().collect()
}
