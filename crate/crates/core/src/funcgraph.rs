//! Finite windows of functions on the naturals and their orbit structure.
//!
//! A [`FiniteFunction`] is a map defined on `[0, N)` whose values may land
//! anywhere in the naturals. Only edges `(x, f(x))` with both endpoints below
//! `N` are in-window edges; an edge leaving the window is a boundary edge and
//! never counts towards freeness violations.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::SeededRng;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawFunction", into = "RawFunction")]
pub struct FiniteFunction {
    values: Vec<usize>,
    fixed_point_free: bool,
    injective_on_window: bool,
}

#[derive(Serialize, Deserialize)]
struct RawFunction {
    n: usize,
    values: Vec<usize>,
}

impl TryFrom<RawFunction> for FiniteFunction {
    type Error = Error;

    fn try_from(raw: RawFunction) -> Result<Self> {
        if raw.values.len() != raw.n {
            return Err(Error::LengthMismatch { expected: raw.n, got: raw.values.len() });
        }
        FiniteFunction::new(raw.values)
    }
}

impl From<FiniteFunction> for RawFunction {
    fn from(f: FiniteFunction) -> Self {
        RawFunction { n: f.values.len(), values: f.values }
    }
}

impl FiniteFunction {
    /// Builds a function on the window `[0, values.len())`, computing the
    /// fixed-point and injectivity flags.
    pub fn new(values: Vec<usize>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyWindow);
        }
        let fixed_point_free = values.iter().enumerate().all(|(i, &v)| i != v);
        let injective_on_window = first_collision(&values).is_none();
        Ok(FiniteFunction { values, fixed_point_free, injective_on_window })
    }

    pub fn from_fn(n: usize, f: impl FnMut(usize) -> usize) -> Result<Self> {
        Self::new((0..n).map(f).collect())
    }

    /// `x -> x + 1` on `[0, n)`.
    pub fn successor(n: usize) -> Self {
        Self::from_fn(n, |x| x + 1).expect("non-empty window")
    }

    pub fn window(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn apply(&self, x: usize) -> usize {
        self.values[x]
    }

    /// `f(x)` if it stays inside the window.
    pub fn in_window(&self, x: usize) -> Option<usize> {
        let y = self.values[x];
        (y < self.window()).then_some(y)
    }

    pub fn is_fixed_point_free(&self) -> bool {
        self.fixed_point_free
    }

    pub fn is_injective_on_window(&self) -> bool {
        self.injective_on_window
    }

    pub fn require_fixed_point_free(&self) -> Result<()> {
        match self.values.iter().enumerate().find(|&(i, &v)| i == v) {
            Some((i, _)) => Err(Error::FixedPoint(i)),
            None => Ok(()),
        }
    }

    pub fn require_injective(&self) -> Result<()> {
        match first_collision(&self.values) {
            Some((a, b)) => Err(Error::NotInjective(a, b)),
            None => Ok(()),
        }
    }

    /// In-window edges `(x, f(x))`, in increasing order of `x`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.window()).filter_map(move |x| self.in_window(x).map(|y| (x, y)))
    }

    /// `pre[y]` is the in-window preimage of `y`, for injective functions.
    pub(crate) fn preimages(&self) -> Vec<Option<usize>> {
        let mut pre = vec![None; self.window()];
        for (x, y) in self.edges() {
            pre[y] = Some(x);
        }
        pre
    }
}

fn first_collision(values: &[usize]) -> Option<(usize, usize)> {
    let mut seen = std::collections::HashMap::with_capacity(values.len());
    for (i, &v) in values.iter().enumerate() {
        if let Some(&j) = seen.get(&v) {
            return Some((j, i));
        }
        seen.insert(v, i);
    }
    None
}

/// Finite stand-in for an infinite subset: a strictly increasing list.
///
/// The type does not know its window; operations treat elements at or beyond
/// the window of the function they are paired with as absent.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct SubsetOfWindow(Vec<usize>);

impl TryFrom<Vec<usize>> for SubsetOfWindow {
    type Error = Error;

    fn try_from(elements: Vec<usize>) -> Result<Self> {
        if let Some(i) = elements.windows(2).position(|w| w[0] >= w[1]) {
            return Err(Error::UnsortedSet(i + 1));
        }
        Ok(SubsetOfWindow(elements))
    }
}

impl From<SubsetOfWindow> for Vec<usize> {
    fn from(s: SubsetOfWindow) -> Self {
        s.0
    }
}

impl FromIterator<usize> for SubsetOfWindow {
    /// Collects arbitrary elements, sorting and dropping duplicates.
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut v: Vec<usize> = iter.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        SubsetOfWindow(v)
    }
}

impl SubsetOfWindow {
    pub fn new(elements: Vec<usize>) -> Result<Self> {
        Self::try_from(elements)
    }

    pub fn empty() -> Self {
        SubsetOfWindow(Vec::new())
    }

    pub fn full(n: usize) -> Self {
        SubsetOfWindow((0..n).collect())
    }

    pub fn elements(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.0.binary_search(&x).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn check_within(&self, window: usize) -> Result<()> {
        match self.0.last() {
            Some(&element) if element >= window => Err(Error::OutsideWindow { element, window }),
            _ => Ok(()),
        }
    }

    /// Membership bitmap over `[0, window)`.
    pub fn mask(&self, window: usize) -> Vec<bool> {
        let mut m = vec![false; window];
        for x in self.iter().filter(|&x| x < window) {
            m[x] = true;
        }
        m
    }

    pub fn is_subset_of(&self, other: &SubsetOfWindow) -> bool {
        self.iter().all(|x| other.contains(x))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OrbitKind {
    Cycle,
    Path,
}

/// One class of the relation "reachable by iterating f forwards or backwards".
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Orbit {
    pub kind: OrbitKind,
    pub nodes: Vec<usize>,
    pub exits_window: bool,
    pub enters_window: bool,
}

impl Orbit {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// A cycle lying fully inside the window.
    pub fn is_finite_class(&self) -> bool {
        self.kind == OrbitKind::Cycle
    }

    pub fn is_truncated(&self) -> bool {
        self.kind == OrbitKind::Path
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitDecomposition {
    pub orbits: Vec<Orbit>,
}

impl OrbitDecomposition {
    pub fn cycles(&self) -> impl Iterator<Item = &Orbit> {
        self.orbits.iter().filter(|o| o.kind == OrbitKind::Cycle)
    }

    pub fn paths(&self) -> impl Iterator<Item = &Orbit> {
        self.orbits.iter().filter(|o| o.kind == OrbitKind::Path)
    }

    /// `orbit_of[x]` indexes into `orbits`.
    pub fn orbit_index(&self, window: usize) -> Vec<usize> {
        let mut idx = vec![usize::MAX; window];
        for (k, o) in self.orbits.iter().enumerate() {
            for &x in &o.nodes {
                idx[x] = k;
            }
        }
        idx
    }
}

/// Splits the window of an injective function into maximal f-chains.
///
/// Chains closed inside the window are cycles. Every other chain is a path
/// starting at a node with no in-window preimage and ending at a node whose
/// image leaves the window. Orbits are listed by their first node.
pub fn orbit_decomposition(f: &FiniteFunction) -> Result<OrbitDecomposition> {
    f.require_injective()?;
    let n = f.window();
    let pre = f.preimages();
    let mut seen = vec![false; n];
    let mut orbits = Vec::new();

    for start in (0..n).filter(|&x| pre[x].is_none()) {
        let mut nodes = Vec::new();
        let mut x = start;
        loop {
            seen[x] = true;
            nodes.push(x);
            match f.in_window(x) {
                Some(y) => x = y,
                None => break,
            }
        }
        orbits.push(Orbit { kind: OrbitKind::Path, nodes, exits_window: true, enters_window: true });
    }

    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut nodes = Vec::new();
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            nodes.push(x);
            x = f.apply(x);
        }
        debug_assert_eq!(x, start);
        orbits.push(Orbit { kind: OrbitKind::Cycle, nodes, exits_window: false, enters_window: false });
    }

    orbits.sort_by_key(|o| o.nodes[0]);
    Ok(OrbitDecomposition { orbits })
}

/// `f[A] ∩ A` inside the window; image points at or beyond `N` are dropped.
pub fn star_intersection(a: &SubsetOfWindow, f: &FiniteFunction) -> SubsetOfWindow {
    let n = f.window();
    let mask = a.mask(n);
    a.iter()
        .filter(|&x| x < n)
        .filter_map(|x| f.in_window(x))
        .filter(|&y| mask[y])
        .collect()
}

/// Window reading of *-freeness: the intersection is empty.
pub fn is_star_free(a: &SubsetOfWindow, f: &FiniteFunction) -> bool {
    star_intersection(a, f).is_empty()
}

/// Seeded fixed-point-free function on `[0, n)`.
///
/// Values are drawn from `[0, n + n/8 + 1)`, so roughly one point in nine
/// leaves the window. With `injective` set the values are a prefix of a
/// shuffled range, then each fixed point `i` is swapped with its successor
/// position (cyclically), which keeps the values distinct.
pub fn random_fpf_function(seed: u64, n: usize, injective: bool) -> Result<FiniteFunction> {
    if n == 0 {
        return Err(Error::EmptyWindow);
    }
    let range = n + n / 8 + 1;
    let mut rng = SeededRng::new(seed);
    let values = if injective {
        let mut pool: Vec<usize> = (0..range).collect();
        rng.shuffle(&mut pool);
        pool.truncate(n);
        if n == 1 && pool[0] == 0 {
            pool[0] = 1;
        }
        for i in 0..n {
            if pool[i] == i && n > 1 {
                pool.swap(i, (i + 1) % n);
            }
        }
        pool
    } else {
        (0..n)
            .map(|i| {
                let v = rng.index(range - 1);
                if v >= i { v + 1 } else { v }
            })
            .collect()
    };
    FiniteFunction::new(values)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(v: &[usize]) -> SubsetOfWindow {
        SubsetOfWindow::new(v.to_vec()).unwrap()
    }

    fn cyclic_shift(n: usize) -> FiniteFunction {
        FiniteFunction::from_fn(n, |k| (k + 1) % n).unwrap()
    }

    #[test]
    fn successor_is_a_single_path() {
        let d = orbit_decomposition(&FiniteFunction::successor(6)).unwrap();
        assert_eq!(d.orbits.len(), 1);
        let o = &d.orbits[0];
        assert_eq!(o.kind, OrbitKind::Path);
        assert_eq!(o.nodes, vec![0, 1, 2, 3, 4, 5]);
        assert!(o.exits_window && o.enters_window);
    }

    #[test]
    fn pair_swaps_are_two_cycles() {
        let f = FiniteFunction::new(vec![1, 0, 3, 2]).unwrap();
        let d = orbit_decomposition(&f).unwrap();
        assert_eq!(d.orbits.len(), 2);
        assert!(d.orbits.iter().all(|o| o.kind == OrbitKind::Cycle && o.len() == 2));
    }

    #[test]
    fn cyclic_shift_is_one_cycle() {
        let d = orbit_decomposition(&cyclic_shift(5)).unwrap();
        assert_eq!(d.orbits.len(), 1);
        assert_eq!(d.orbits[0].kind, OrbitKind::Cycle);
        assert_eq!(d.orbits[0].nodes, vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn non_injective_rejected() {
        let f = FiniteFunction::new(vec![1, 2, 1]).unwrap();
        assert_eq!(orbit_decomposition(&f), Err(Error::NotInjective(0, 2)));
    }

    #[test]
    fn star_intersection_examples() {
        let evens = set(&[0, 2, 4, 6, 8]);
        assert!(is_star_free(&evens, &FiniteFunction::successor(10)));
        assert_eq!(star_intersection(&set(&[0, 1]), &FiniteFunction::successor(10)), set(&[1]));
        assert_eq!(
            star_intersection(&SubsetOfWindow::full(5), &cyclic_shift(5)),
            SubsetOfWindow::full(5)
        );
    }

    #[test]
    fn boundary_images_are_ignored() {
        // f(4) = 5 is a boundary edge; 5 is outside the window.
        let a = set(&[4]);
        assert!(is_star_free(&a, &FiniteFunction::successor(5)));
    }

    #[test]
    fn random_function_contract() {
        let f = random_fpf_function(1, 4, true).unwrap();
        assert!(f.is_fixed_point_free());
        assert!(f.is_injective_on_window());
        assert_eq!(f, random_fpf_function(1, 4, true).unwrap());
        for seed in 0..200 {
            for n in [1, 2, 3, 7, 50] {
                let g = random_fpf_function(seed, n, true).unwrap();
                assert!(g.is_fixed_point_free() && g.is_injective_on_window(), "{seed} {n}");
                let h = random_fpf_function(seed, n, false).unwrap();
                assert!(h.is_fixed_point_free());
            }
        }
    }

    #[test]
    fn json_shape() {
        let f = FiniteFunction::new(vec![1, 2, 0]).unwrap();
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(s, r#"{"n":3,"values":[1,2,0]}"#);
        let back: FiniteFunction = serde_json::from_str(&s).unwrap();
        assert_eq!(back, f);
        assert!(serde_json::from_str::<FiniteFunction>(r#"{"n":2,"values":[1]}"#).is_err());
        assert!(serde_json::from_str::<SubsetOfWindow>("[3,1]").is_err());
    }
}
