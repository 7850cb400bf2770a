//! Covering the graph of a fixed-point-free injection by four fixed-point-free
//! involutions, patching a single fixed point away, and gluing involutions
//! together along odd-sized blocks.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::funcgraph::{orbit_decomposition, FiniteFunction, OrbitKind, SubsetOfWindow};
use crate::partitions::IntervalPartition;

/// A self-inverse pairing of the window. Points listed in `exceptions` are
/// left unpaired and map to themselves.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawInvolution", into = "RawInvolution")]
pub struct Involution {
    pairing: Vec<usize>,
    exceptions: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct RawInvolution {
    n: usize,
    pairing: Vec<usize>,
    exceptions: Vec<usize>,
}

impl TryFrom<RawInvolution> for Involution {
    type Error = Error;

    fn try_from(raw: RawInvolution) -> Result<Self> {
        if raw.pairing.len() != raw.n {
            return Err(Error::LengthMismatch { expected: raw.n, got: raw.pairing.len() });
        }
        let inv = Involution { pairing: raw.pairing, exceptions: raw.exceptions };
        inv.validate()?;
        Ok(inv)
    }
}

impl From<Involution> for RawInvolution {
    fn from(inv: Involution) -> Self {
        RawInvolution { n: inv.pairing.len(), pairing: inv.pairing, exceptions: inv.exceptions }
    }
}

impl Involution {
    /// Completes a partial pairing by sorting the unpaired points and pairing
    /// them consecutively; an odd leftover becomes the single exception.
    pub fn complete(partial: Vec<Option<usize>>) -> Self {
        let n = partial.len();
        let mut pairing: Vec<usize> = (0..n).collect();
        let mut leftovers = Vec::new();
        for (x, p) in partial.iter().enumerate() {
            match p {
                Some(y) => pairing[x] = *y,
                None => leftovers.push(x),
            }
        }
        for pair in leftovers.chunks(2) {
            if let [a, b] = *pair {
                pairing[a] = b;
                pairing[b] = a;
            }
        }
        let exceptions = if leftovers.len() % 2 == 1 { vec![*leftovers.last().unwrap()] } else { Vec::new() };
        let inv = Involution { pairing, exceptions };
        debug_assert!(inv.validate().is_ok());
        inv
    }

    pub fn from_parts(pairing: Vec<usize>, mut exceptions: Vec<usize>) -> Result<Self> {
        exceptions.sort_unstable();
        let inv = Involution { pairing, exceptions };
        inv.validate()?;
        Ok(inv)
    }

    fn validate(&self) -> Result<()> {
        let n = self.pairing.len();
        if let Some(i) = self.exceptions.windows(2).position(|w| w[0] >= w[1]) {
            return Err(Error::UnsortedSet(i + 1));
        }
        let mut is_exception = vec![false; n];
        for &e in &self.exceptions {
            if e >= n || self.pairing[e] != e {
                return Err(Error::BadInvolution(e));
            }
            is_exception[e] = true;
        }
        for x in 0..n {
            let y = self.pairing[x];
            if is_exception[x] {
                continue;
            }
            if y >= n || y == x || is_exception[y] || self.pairing[y] != x {
                return Err(Error::BadInvolution(x));
            }
        }
        Ok(())
    }

    pub fn window(&self) -> usize {
        self.pairing.len()
    }

    pub fn pairing(&self) -> &[usize] {
        &self.pairing
    }

    pub fn exceptions(&self) -> &[usize] {
        &self.exceptions
    }

    /// Partner of `x`, or `None` for an exception.
    pub fn partner(&self, x: usize) -> Option<usize> {
        let y = self.pairing[x];
        (y != x).then_some(y)
    }

    pub fn covers(&self, x: usize, y: usize) -> bool {
        self.partner(x) == Some(y)
    }

    /// The involution as a function; exceptions become fixed points.
    pub fn as_function(&self) -> FiniteFunction {
        FiniteFunction::new(self.pairing.clone()).expect("non-empty window")
    }
}

/// Parity bookkeeping of the odd finite classes in the window.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OddClassCase {
    /// An even number of odd cycles, or some truncated orbit to absorb parity.
    Balanced,
    /// An odd number of odd cycles and every orbit closed in the window.
    Unbalanced,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionResult {
    pub parts: Vec<Involution>,
    pub uncovered_edges: Vec<(usize, usize)>,
    pub case: OddClassCase,
    pub odd_classes: usize,
    pub truncated_orbits: usize,
}

impl DecompositionResult {
    /// The in-window edges of `f` that no part covers.
    pub fn coverage_gaps(&self, f: &FiniteFunction) -> Vec<(usize, usize)> {
        f.edges().filter(|&(x, y)| !self.parts.iter().any(|p| p.covers(x, y))).collect()
    }
}

struct Parts([Vec<Option<usize>>; 4]);

impl Parts {
    fn pair(&mut self, part: usize, a: usize, b: usize) {
        let p = &mut self.0[part];
        debug_assert!(p[a].is_none_or(|v| v == b) && p[b].is_none_or(|v| v == a));
        p[a] = Some(b);
        p[b] = Some(a);
    }
}

/// Four fixed-point-free involutions whose union covers every in-window edge
/// of `f`.
///
/// Along each orbit `a_0, a_1, …` the edge `a_i -> a_{i+1}` goes to:
/// * even cycles: part 0 for even `i`, part 1 for odd `i` (indices mod the length);
/// * truncated paths: part 0 for even `i`, part 1 for `i ≡ 1 (mod 4)`,
///   part 2 for `i ≡ 3 (mod 4)`;
/// * odd cycles `a_0 … a_k`: part 0 for even `i < k`, part 1 for odd `i < k`,
///   and the closing chord `a_k – a_0` to part 2.
///
/// Whatever each part leaves unpaired is paired in increasing order, so each
/// part has exactly `N mod 2` exceptions.
pub fn decompose_into_involutions(f: &FiniteFunction) -> Result<DecompositionResult> {
    f.require_fixed_point_free()?;
    f.require_injective()?;
    let n = f.window();
    let orbits = orbit_decomposition(f)?;
    let mut parts = Parts(std::array::from_fn(|_| vec![None; n]));
    let mut odd_classes = 0;
    let mut truncated_orbits = 0;

    for orbit in &orbits.orbits {
        let a = &orbit.nodes;
        let len = a.len();
        match orbit.kind {
            OrbitKind::Path => {
                truncated_orbits += 1;
                for i in 0..len.saturating_sub(1) {
                    let part = match i % 4 {
                        0 | 2 => 0,
                        1 => 1,
                        _ => 2,
                    };
                    parts.pair(part, a[i], a[i + 1]);
                }
            }
            OrbitKind::Cycle if len % 2 == 0 => {
                for i in 0..len {
                    parts.pair(i % 2, a[i], a[(i + 1) % len]);
                }
            }
            OrbitKind::Cycle => {
                odd_classes += 1;
                let k = len - 1;
                for i in 0..k {
                    parts.pair(i % 2, a[i], a[i + 1]);
                }
                parts.pair(2, a[k], a[0]);
            }
        }
    }

    let case = if odd_classes % 2 == 1 && truncated_orbits == 0 {
        OddClassCase::Unbalanced
    } else {
        OddClassCase::Balanced
    };
    let parts: Vec<Involution> = parts.0.into_iter().map(Involution::complete).collect();
    let mut result = DecompositionResult { parts, uncovered_edges: Vec::new(), case, odd_classes, truncated_orbits };
    result.uncovered_edges = result.coverage_gaps(f);
    Ok(result)
}

/// Removes the single fixed point `n` of `h` using a second point `m`.
///
/// The result sends `m` to `n` and `n` to `h(m)`, so `n -> h(m) -> m -> n`
/// becomes a 3-cycle and every other value of `h` is kept.
pub fn patch_fixed_point(h: &Involution, m: usize) -> Result<FiniteFunction> {
    let window = h.window();
    let fixed: Vec<usize> = (0..window).filter(|&x| h.pairing[x] == x).collect();
    if fixed.len() != 1 {
        return Err(Error::FixedPointCount(fixed.len()));
    }
    let n = fixed[0];
    if m >= window {
        return Err(Error::OutsideWindow { element: m, window });
    }
    if m == n {
        return Err(Error::Precondition("patch point must differ from the fixed point".into()));
    }
    let mut values = h.pairing.clone();
    values[n] = h.pairing[m];
    values[m] = n;
    FiniteFunction::new(values)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CombineResult {
    pub domain: SubsetOfWindow,
    pub combined: Involution,
}

/// Glues four involutions along odd-sized blocks.
///
/// Block `k` uses part `colors[k]`. A point belongs to the domain when it and
/// its partner under that part lie in the same block; the combined involution
/// follows the part there and pairs the remaining points in increasing order.
/// Points past the last block are never in the domain.
pub fn combine_on_blocks(parts: &[Involution], blocks: &IntervalPartition, colors: &[u8]) -> Result<CombineResult> {
    if parts.len() != 4 {
        return Err(Error::Precondition(format!("expected 4 involutions, got {}", parts.len())));
    }
    let n = parts[0].window();
    if let Some(p) = parts.iter().find(|p| p.window() != n) {
        return Err(Error::WindowMismatch(n, p.window()));
    }
    if blocks.end() > n {
        return Err(Error::OutsideWindow { element: blocks.end() - 1, window: n });
    }
    if colors.len() != blocks.block_count() {
        return Err(Error::LengthMismatch { expected: blocks.block_count(), got: colors.len() });
    }
    if let Some(&c) = colors.iter().find(|&&c| c > 3) {
        return Err(Error::Precondition(format!("block colour {c} is not in 0..4")));
    }
    for (index, (lo, hi)) in blocks.blocks().enumerate() {
        if (hi - lo) % 2 == 0 {
            return Err(Error::EvenBlock { index, size: hi - lo });
        }
    }

    let mut partial = vec![None; n];
    let mut domain = Vec::new();
    for (k, (lo, hi)) in blocks.blocks().enumerate() {
        let part = &parts[colors[k] as usize];
        for x in lo..hi {
            if let Some(y) = part.partner(x).filter(|y| (lo..hi).contains(y)) {
                partial[x] = Some(y);
                domain.push(x);
            }
        }
    }
    Ok(CombineResult { domain: SubsetOfWindow::new(domain)?, combined: Involution::complete(partial) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcgraph::{random_fpf_function, star_intersection};

    fn pairs_of(inv: &Involution) -> Vec<(usize, usize)> {
        (0..inv.window()).filter_map(|x| inv.partner(x).filter(|&y| x < y).map(|y| (x, y))).collect()
    }

    #[test]
    fn successor_on_eight() {
        let f = FiniteFunction::successor(8);
        let d = decompose_into_involutions(&f).unwrap();
        assert_eq!(pairs_of(&d.parts[0]), vec![(0, 1), (2, 3), (4, 5), (6, 7)]);
        assert_eq!(pairs_of(&d.parts[1]), vec![(0, 3), (1, 2), (4, 7), (5, 6)]);
        assert_eq!(pairs_of(&d.parts[2]), vec![(0, 1), (2, 5), (3, 4), (6, 7)]);
        assert!(d.uncovered_edges.is_empty());
        assert_eq!(d.truncated_orbits, 1);
        assert!(d.parts.iter().all(|p| p.exceptions().is_empty()));
    }

    #[test]
    fn four_cycle_uses_two_parts() {
        let f = FiniteFunction::new(vec![1, 2, 3, 0]).unwrap();
        let d = decompose_into_involutions(&f).unwrap();
        assert_eq!(pairs_of(&d.parts[0]), vec![(0, 1), (2, 3)]);
        assert_eq!(pairs_of(&d.parts[1]), vec![(0, 3), (1, 2)]);
        for (x, y) in f.edges() {
            assert!(d.parts[0].covers(x, y) || d.parts[1].covers(x, y));
        }
    }

    #[test]
    fn two_triangles_use_chords() {
        let f = FiniteFunction::new(vec![1, 2, 0, 4, 5, 3]).unwrap();
        let d = decompose_into_involutions(&f).unwrap();
        assert!(d.parts[0].covers(0, 1) && d.parts[0].covers(3, 4));
        assert!(d.parts[1].covers(1, 2) && d.parts[1].covers(4, 5));
        assert!(d.parts[2].covers(2, 0) && d.parts[2].covers(5, 3));
        assert!(d.uncovered_edges.is_empty());
        assert_eq!(d.case, OddClassCase::Balanced);
        assert_eq!(d.odd_classes, 2);
    }

    #[test]
    fn single_odd_cycle_is_unbalanced() {
        let f = FiniteFunction::new(vec![1, 2, 3, 4, 0]).unwrap();
        let d = decompose_into_involutions(&f).unwrap();
        assert_eq!(d.case, OddClassCase::Unbalanced);
        assert!(d.uncovered_edges.is_empty());
        assert!(d.parts.iter().all(|p| p.exceptions().len() == 1));
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(
            decompose_into_involutions(&FiniteFunction::new(vec![0, 0]).unwrap()),
            Err(Error::FixedPoint(0))
        );
        assert!(matches!(
            decompose_into_involutions(&FiniteFunction::new(vec![2, 2, 0]).unwrap()),
            Err(Error::NotInjective(..))
        ));
    }

    #[test]
    fn downstream_freeness() {
        for seed in 0..40 {
            let f = random_fpf_function(seed, 60, true).unwrap();
            let d = decompose_into_involutions(&f).unwrap();
            let family: Vec<FiniteFunction> = d.parts.iter().map(Involution::as_function).collect();
            let a = crate::freesets::max_free_subset(&family, 60, crate::freesets::SearchMode::Greedy).unwrap();
            assert!(star_intersection(&a, &f).len() <= d.uncovered_edges.len());
        }
    }

    #[test]
    fn patch_three_points() {
        let h = Involution::from_parts(vec![1, 0, 2], vec![2]).unwrap();
        let g = patch_fixed_point(&h, 0).unwrap();
        assert!(g.is_fixed_point_free() && g.is_injective_on_window());
        assert!(g.values().iter().all(|&v| v < 3));
        assert_eq!(g.values(), &[2, 0, 1]);
    }

    #[test]
    fn patch_changes_only_two_points() {
        let two = Involution::from_parts(vec![1, 0, 2, 3], vec![2, 3]).unwrap();
        assert_eq!(patch_fixed_point(&two, 0), Err(Error::FixedPointCount(2)));

        let h = Involution::from_parts(vec![5, 2, 1, 6, 4, 0, 3], vec![4]).unwrap();
        let g = patch_fixed_point(&h, 0).unwrap();
        let diff: Vec<usize> = (0..7).filter(|&x| g.apply(x) != h.pairing()[x]).collect();
        assert_eq!(diff, vec![0, 4]);
        assert!(g.is_fixed_point_free() && g.is_injective_on_window());
        assert_eq!(patch_fixed_point(&h, 4), Err(Error::Precondition("patch point must differ from the fixed point".into())));
    }

    #[test]
    fn combine_single_block() {
        let p0 = Involution::complete((0..4).map(|x| Some(x ^ 1)).collect());
        let parts = vec![p0.clone(), p0.clone(), p0.clone(), p0];
        let blocks = IntervalPartition::new(vec![0, 3]).unwrap();
        let r = combine_on_blocks(&parts, &blocks, &[0]).unwrap();
        assert_eq!(r.domain.elements(), &[0, 1]);
        assert!(r.combined.covers(0, 1));
    }

    #[test]
    fn combine_rejects_even_blocks() {
        let p = Involution::complete(vec![None; 4]);
        let parts = vec![p.clone(), p.clone(), p.clone(), p];
        let blocks = IntervalPartition::new(vec![0, 1, 3]).unwrap();
        assert_eq!(
            combine_on_blocks(&parts, &blocks, &[0, 0]),
            Err(Error::EvenBlock { index: 1, size: 2 })
        );
    }

    #[test]
    fn json_shape() {
        let inv = Involution::complete(vec![None; 3]);
        let s = serde_json::to_string(&inv).unwrap();
        assert_eq!(s, r#"{"n":3,"pairing":[1,0,2],"exceptions":[2]}"#);
        assert_eq!(serde_json::from_str::<Involution>(&s).unwrap(), inv);
        assert!(serde_json::from_str::<Involution>(r#"{"n":2,"pairing":[1,1],"exceptions":[]}"#).is_err());
    }
}
