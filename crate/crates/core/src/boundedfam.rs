//! Bounded sequences and the two block constructions built on top of them.
//!
//! [`BlockSystem`] pairs an interval partition `I_0, I_1, …` of the positions
//! with implicit blocks `J_n` of size `F(n) = Π_{i∈I_n} g(i)`. Points of `J_n`
//! are addressed by mixed-radix codes of tuples over `I_n`; the lowest index
//! of `I_n` is the least significant digit. `J`-blocks are never stored, since
//! `F(2)` is already `2^69` for `g ≡ 2`.
//!
//! [`MeasuredBlocks`] is the measured block family `|J_0| = 1`,
//! `|J_{n+1}| = 2(n+1)·Σ_{k≤n}|J_k|` with singleton measure
//! `1/Σ_{k≤n}|J_k|` on `J_{n+1}`, and `μ_0 = 0`.

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::funcgraph::{FiniteFunction, SubsetOfWindow};

/// Longest `I`-block a [`BlockSystem`] will lay out.
pub const MAX_BLOCK_LEN: usize = 1 << 16;

/// Pointwise bound `g(i) ≥ 2`, nondecreasing. Stored as a finite list whose
/// last value repeats forever.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<u64>", into = "Vec<u64>")]
pub struct GrowthFunction(Vec<u64>);

impl TryFrom<Vec<u64>> for GrowthFunction {
    type Error = Error;

    fn try_from(values: Vec<u64>) -> Result<Self> {
        GrowthFunction::new(values)
    }
}

impl From<GrowthFunction> for Vec<u64> {
    fn from(g: GrowthFunction) -> Self {
        g.0
    }
}

impl GrowthFunction {
    pub fn new(values: Vec<u64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Precondition("growth function needs at least one value".into()));
        }
        if let Some(i) = values.iter().position(|&v| v < 2) {
            return Err(Error::Precondition(format!("growth function value at {i} is below 2")));
        }
        if let Some(i) = values.windows(2).position(|w| w[0] > w[1]) {
            return Err(Error::Precondition(format!("growth function decreases after {i}")));
        }
        Ok(GrowthFunction(values))
    }

    pub fn constant(c: u64) -> Result<Self> {
        GrowthFunction::new(vec![c])
    }

    pub fn at(&self, i: usize) -> u64 {
        *self.0.get(i).unwrap_or_else(|| self.0.last().expect("nonempty"))
    }

    pub fn values(&self) -> &[u64] {
        &self.0
    }

    /// Errors on the first position where `seq` is not below `g`.
    pub fn check_bounded(&self, seq: &[u64], offset: usize) -> Result<()> {
        for (j, &v) in seq.iter().enumerate() {
            let bound = self.at(offset + j);
            if v >= bound {
                return Err(Error::BoundViolation { position: offset + j, value: v, bound });
            }
        }
        Ok(())
    }
}

/// Positions where two `g`-bounded sequences agree.
pub fn infinitely_equal(g: &GrowthFunction, f: &[u64], h: &[u64]) -> Result<Vec<usize>> {
    if f.len() != h.len() {
        return Err(Error::LengthMismatch { expected: f.len(), got: h.len() });
    }
    g.check_bounded(f, 0)?;
    g.check_bounded(h, 0)?;
    Ok((0..f.len()).filter(|&i| f[i] == h[i]).collect())
}

mod big_str {
    use num_bigint::BigUint;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }

    pub mod vec {
        use super::*;

        pub fn serialize<S: Serializer>(v: &[BigUint], s: S) -> Result<S::Ok, S::Error> {
            s.collect_seq(v.iter().map(|x| x.to_string()))
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigUint>, D::Error> {
            Vec::<String>::deserialize(d)?
                .iter()
                .map(|t| t.parse().map_err(serde::de::Error::custom))
                .collect()
        }
    }
}

/// `I`-blocks with `|I_n| = 2·Σ_{j<n}F(j) + 1` and the implicit `J`-blocks
/// they index.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawBlockSystem", into = "RawBlockSystem")]
pub struct BlockSystem {
    g: GrowthFunction,
    i_endpoints: Vec<usize>,
    sizes: Vec<BigUint>,
    j_starts: Vec<BigUint>,
}

#[derive(Serialize, Deserialize)]
struct RawBlockSystem {
    g: GrowthFunction,
    depth: usize,
    #[serde(rename = "I_endpoints")]
    i_endpoints: Vec<usize>,
    #[serde(rename = "F", with = "big_str::vec")]
    sizes: Vec<BigUint>,
}

impl TryFrom<RawBlockSystem> for BlockSystem {
    type Error = Error;

    fn try_from(raw: RawBlockSystem) -> Result<Self> {
        let built = build_block_system(&raw.g, raw.depth)?;
        if built.i_endpoints != raw.i_endpoints || built.sizes != raw.sizes {
            return Err(Error::Precondition("block system does not match its growth function".into()));
        }
        Ok(built)
    }
}

impl From<BlockSystem> for RawBlockSystem {
    fn from(b: BlockSystem) -> Self {
        RawBlockSystem { depth: b.depth(), g: b.g, i_endpoints: b.i_endpoints, sizes: b.sizes }
    }
}

pub fn build_block_system(g: &GrowthFunction, depth: usize) -> Result<BlockSystem> {
    let mut i_endpoints = vec![0];
    let mut sizes = Vec::with_capacity(depth);
    let mut j_starts = vec![BigUint::zero()];
    for n in 0..depth {
        let total = j_starts.last().expect("nonempty");
        let len = (total * 2u32 + 1u32)
            .to_usize()
            .filter(|&len| len <= MAX_BLOCK_LEN)
            .ok_or(Error::BlockTooLarge(n))?;
        let lo = i_endpoints[n];
        let size: BigUint = (lo..lo + len).map(|i| BigUint::from(g.at(i))).product();
        j_starts.push(total + &size);
        i_endpoints.push(lo + len);
        sizes.push(size);
    }
    Ok(BlockSystem { g: g.clone(), i_endpoints, sizes, j_starts })
}

impl BlockSystem {
    pub fn depth(&self) -> usize {
        self.sizes.len()
    }

    pub fn growth(&self) -> &GrowthFunction {
        &self.g
    }

    pub fn i_endpoints(&self) -> &[usize] {
        &self.i_endpoints
    }

    pub fn i_block(&self, n: usize) -> (usize, usize) {
        (self.i_endpoints[n], self.i_endpoints[n + 1])
    }

    /// `F(n) = |J_n|`.
    pub fn size(&self, n: usize) -> &BigUint {
        &self.sizes[n]
    }

    pub fn j_start(&self, n: usize) -> &BigUint {
        &self.j_starts[n]
    }

    /// Number of complete `J`-blocks that fit inside `[0, window)`.
    pub fn blocks_within(&self, window: usize) -> usize {
        let w = BigUint::from(window);
        (0..self.depth()).take_while(|&n| self.j_starts[n + 1] <= w).count()
    }

    /// Largest prefix of whole `J`-blocks with at most `budget` points.
    pub fn materialized_prefix(&self, budget: usize) -> usize {
        let blocks = self.blocks_within(budget);
        self.j_starts[blocks].to_usize().expect("bounded by budget")
    }

    /// Block holding a materialised point, with the point's code.
    pub fn locate(&self, x: usize) -> Option<(usize, BigUint)> {
        let x = BigUint::from(x);
        let n = self.j_starts.partition_point(|s| *s <= x);
        (n > 0 && n <= self.depth()).then(|| (n - 1, &x - &self.j_starts[n - 1]))
    }

    fn check_block(&self, n: usize) -> Result<()> {
        if n >= self.depth() {
            return Err(Error::Precondition(format!("block {n} is beyond depth {}", self.depth())));
        }
        Ok(())
    }

    /// Mixed-radix code of a tuple over `I_n`.
    pub fn encode(&self, n: usize, tuple: &[u64]) -> Result<BigUint> {
        self.check_block(n)?;
        let (lo, hi) = self.i_block(n);
        if tuple.len() != hi - lo {
            return Err(Error::LengthMismatch { expected: hi - lo, got: tuple.len() });
        }
        self.g.check_bounded(tuple, lo)?;
        let mut code = BigUint::zero();
        for (j, &digit) in tuple.iter().enumerate().rev() {
            code = code * self.g.at(lo + j) + digit;
        }
        Ok(code)
    }

    pub fn decode(&self, n: usize, code: &BigUint) -> Result<Vec<u64>> {
        self.check_block(n)?;
        if code >= &self.sizes[n] {
            return Err(Error::Precondition(format!("code {code} exceeds block {n}")));
        }
        let (lo, hi) = self.i_block(n);
        let mut rest = code.clone();
        let mut tuple = Vec::with_capacity(hi - lo);
        for i in lo..hi {
            let (q, r) = rest.div_rem(&BigUint::from(self.g.at(i)));
            tuple.push(r.to_u64().expect("digit below radix"));
            rest = q;
        }
        Ok(tuple)
    }

    /// The point of `J_n` coding `h ↾ I_n`.
    pub fn code_point(&self, n: usize, tuple: &[u64]) -> Result<BigUint> {
        Ok(&self.j_starts[n] + self.encode(n, tuple)?)
    }

    /// One coded point per block for a sequence `h` defined on every `I_n`.
    pub fn coded_set(&self, h: &[u64]) -> Result<CodedSet> {
        let end = *self.i_endpoints.last().expect("nonempty");
        if h.len() < end {
            return Err(Error::LengthMismatch { expected: end, got: h.len() });
        }
        let blocks = (0..self.depth())
            .map(|n| {
                let (lo, hi) = self.i_block(n);
                Ok(CodedPoint { n, code: self.encode(n, &h[lo..hi])? })
            })
            .collect::<Result<_>>()?;
        Ok(CodedSet { blocks })
    }

    pub fn point(&self, p: &CodedPoint) -> BigUint {
        &self.j_starts[p.n] + &p.code
    }

    fn require_materialized(&self, n: usize, window: usize) -> Result<(usize, usize)> {
        self.check_block(n)?;
        let lo = self.j_starts[n].to_usize();
        let hi = self.j_starts[n + 1].to_usize();
        match (lo, hi) {
            (Some(lo), Some(hi)) if hi <= window => Ok((lo, hi)),
            _ => Err(Error::Precondition(format!("block {n} is not inside the window [0, {window})"))),
        }
    }

    /// `S_f(n) = (f[⋃_{i<n}J_i] ∪ f⁻¹[⋃_{i<n}J_i]) ∩ J_n`.
    pub fn shadow_set(&self, f: &FiniteFunction, n: usize) -> Result<ShadowSet> {
        f.require_fixed_point_free()?;
        f.require_injective()?;
        let (lo, hi) = self.require_materialized(n, f.window())?;
        let elements = shadow_of(f, lo, hi);
        let bound = 2 * lo;
        let block_len = self.i_block(n).1 - self.i_block(n).0;
        Ok(ShadowSet { n, elements, bound, block_len })
    }

    /// Shadows for every block that fits inside the window of `f`.
    pub fn shadows(&self, f: &FiniteFunction) -> Result<Vec<ShadowSet>> {
        (0..self.blocks_within(f.window())).map(|n| self.shadow_set(f, n)).collect()
    }

    /// `ℓ_f` on `I_0 ∪ … ∪ I_{k-1}` for `k = shadows.len()`: shadow tuples in
    /// code order take block positions in increasing order and the meeting
    /// position copies the tuple's digit; other positions are 0.
    pub fn meeting_function(&self, shadows: &[ShadowSet]) -> Result<Vec<u64>> {
        let mut ell = vec![0; self.i_endpoints[shadows.len()]];
        for (n, shadow) in shadows.iter().enumerate() {
            if shadow.n != n {
                return Err(Error::Precondition(format!("shadow {n} is for block {}", shadow.n)));
            }
            let (lo, hi) = self.i_block(n);
            if shadow.len() >= hi - lo {
                return Err(Error::Precondition(format!("shadow of block {n} fills its block")));
            }
            for (slot, x) in shadow.elements.iter().enumerate() {
                let (_, code) = self.locate(x).expect("shadow lies in its block");
                ell[lo + slot] = self.decode(n, &code)?[slot];
            }
        }
        Ok(ell)
    }

    /// Checks both claims for the set coded by `h` against `f`: every point of
    /// `f[A] ∩ A` needs a shadow membership of a coded point, and `ℓ_f` meets
    /// `h` on every block whose coded point lies in the shadow.
    pub fn verify_freeness_claim(&self, f: &FiniteFunction, h: &[u64]) -> Result<FreenessReport> {
        let shadows = self.shadows(f)?;
        let blocks = shadows.len();
        let ell = self.meeting_function(&shadows)?;
        let coded = self.coded_set(h)?;
        let points: Vec<usize> = coded.blocks[..blocks]
            .iter()
            .map(|p| self.point(p).to_usize().expect("materialised"))
            .collect();

        let shadow_hits: Vec<usize> = (0..blocks).filter(|&n| shadows[n].elements.contains(points[n])).collect();
        let claim2_violations = shadow_hits
            .iter()
            .copied()
            .filter(|&n| {
                let (lo, hi) = self.i_block(n);
                (lo..hi).all(|i| ell[i] != h[i])
            })
            .collect();
        let shadow_overflows = shadows.iter().filter(|s| !s.holds()).map(|s| s.n).collect();

        let mut intersection = Vec::new();
        let mut certificates = Vec::new();
        let mut uncertified = Vec::new();
        for (m, &a) in points.iter().enumerate() {
            let Some(n) = points.iter().position(|&b| f.in_window(a) == Some(b)) else {
                continue;
            };
            intersection.push(points[n]);
            let block = m.max(n);
            if shadow_hits.contains(&block) {
                certificates.push(Certificate { element: points[n], block });
            } else {
                uncertified.push(points[n]);
            }
        }
        intersection.sort_unstable();
        Ok(FreenessReport {
            coded_points: points,
            intersection,
            certificates,
            uncertified,
            shadow_hits,
            shadow_overflows,
            claim2_violations,
        })
    }
}

fn shadow_of(f: &FiniteFunction, lo: usize, hi: usize) -> SubsetOfWindow {
    let forward = (0..lo).map(|x| f.apply(x)).filter(|y| (lo..hi).contains(y));
    let backward = (lo..hi).filter(|&x| f.apply(x) < lo);
    forward.chain(backward).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodedPoint {
    pub n: usize,
    #[serde(with = "big_str")]
    pub code: BigUint,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodedSet {
    pub blocks: Vec<CodedPoint>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShadowSet {
    pub n: usize,
    pub elements: SubsetOfWindow,
    /// `2·Σ_{i<n}|J_i|`.
    pub bound: usize,
    /// `|I_n|`.
    pub block_len: usize,
}

impl ShadowSet {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// `|S_f(n)| ≤ 2·Σ_{i<n}|J_i| < |I_n|`.
    pub fn holds(&self) -> bool {
        self.len() <= self.bound && self.bound < self.block_len
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub element: usize,
    pub block: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FreenessReport {
    pub coded_points: Vec<usize>,
    /// `f[A] ∩ A`.
    pub intersection: Vec<usize>,
    pub certificates: Vec<Certificate>,
    pub uncertified: Vec<usize>,
    /// Blocks whose coded point lies in the shadow.
    pub shadow_hits: Vec<usize>,
    pub shadow_overflows: Vec<usize>,
    /// Shadow hits where `ℓ_f` misses `h`.
    pub claim2_violations: Vec<usize>,
}

impl FreenessReport {
    pub fn ok(&self) -> bool {
        self.uncertified.is_empty() && self.shadow_overflows.is_empty() && self.claim2_violations.is_empty()
    }
}

/// Block sizes with a per-block singleton measure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawMeasured", into = "RawMeasured")]
pub struct MeasuredBlocks {
    sizes: Vec<u64>,
    mu: Vec<BigRational>,
    starts: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct RawMeasured {
    sizes: Vec<u64>,
    #[serde(with = "crate::ratio::vec")]
    mu: Vec<BigRational>,
}

impl TryFrom<RawMeasured> for MeasuredBlocks {
    type Error = Error;

    fn try_from(raw: RawMeasured) -> Result<Self> {
        MeasuredBlocks::new(raw.sizes, raw.mu)
    }
}

impl From<MeasuredBlocks> for RawMeasured {
    fn from(m: MeasuredBlocks) -> Self {
        RawMeasured { sizes: m.sizes, mu: m.mu }
    }
}

/// `|J_0| = 1`, `|J_{n+1}| = 2(n+1)·Σ_{k≤n}|J_k|`, for blocks `0..=depth`.
pub fn build_ed_blocks(depth: usize) -> Result<MeasuredBlocks> {
    let mut sizes = vec![1u64];
    let mut mu = vec![BigRational::zero()];
    let mut total = 1u64;
    for n in 0..depth {
        let size = (2 * (n as u64 + 1)).checked_mul(total).ok_or(Error::BlockTooLarge(n + 1))?;
        sizes.push(size);
        mu.push(BigRational::new(1.into(), total.into()));
        total = total.checked_add(size).ok_or(Error::BlockTooLarge(n + 1))?;
    }
    MeasuredBlocks::new(sizes, mu)
}

/// Blocks of size `n` with counting measure, for `n = 0..=depth`.
pub fn build_ed_fin_blocks(depth: usize) -> MeasuredBlocks {
    let sizes = (0..=depth as u64).collect();
    let mu = vec![crate::ratio::one(); depth + 1];
    MeasuredBlocks::new(sizes, mu).expect("small sizes")
}

impl MeasuredBlocks {
    pub fn new(sizes: Vec<u64>, mu: Vec<BigRational>) -> Result<Self> {
        if sizes.len() != mu.len() {
            return Err(Error::LengthMismatch { expected: sizes.len(), got: mu.len() });
        }
        if let Some(n) = mu.iter().position(|m| !crate::ratio::is_nonnegative(m)) {
            return Err(Error::Precondition(format!("measure of block {n} is negative")));
        }
        let mut starts = vec![0usize];
        for (n, &s) in sizes.iter().enumerate() {
            let next = usize::try_from(s)
                .ok()
                .and_then(|s| starts[n].checked_add(s))
                .ok_or(Error::BlockTooLarge(n))?;
            starts.push(next);
        }
        Ok(MeasuredBlocks { sizes, mu, starts })
    }

    pub fn block_count(&self) -> usize {
        self.sizes.len()
    }

    pub fn sizes(&self) -> &[u64] {
        &self.sizes
    }

    /// Measure of one point of `J_n`.
    pub fn singleton(&self, n: usize) -> &BigRational {
        &self.mu[n]
    }

    pub fn block(&self, n: usize) -> (usize, usize) {
        (self.starts[n], self.starts[n + 1])
    }

    pub fn prefix_len(&self) -> usize {
        *self.starts.last().expect("nonempty")
    }

    pub fn block_of(&self, x: usize) -> Option<usize> {
        (x < self.prefix_len()).then(|| self.starts.partition_point(|&s| s <= x) - 1)
    }

    pub fn measure(&self, n: usize, count: usize) -> BigRational {
        &self.mu[n] * BigRational::from_integer(count.into())
    }

    /// Blocks that fit entirely inside `[0, window)`.
    pub fn blocks_within(&self, window: usize) -> usize {
        (0..self.block_count()).take_while(|&n| self.starts[n + 1] <= window).count()
    }

    /// `B_f ∩ J_n = J_n ∩ ⋃_{k<n}(f[J_k] ∪ f⁻¹[J_k])`.
    pub fn bad_set(&self, f: &FiniteFunction, n: usize) -> Result<BadSet> {
        f.require_fixed_point_free()?;
        f.require_injective()?;
        self.bad_set_unchecked(f, n)
    }

    fn bad_set_unchecked(&self, f: &FiniteFunction, n: usize) -> Result<BadSet> {
        if n >= self.blocks_within(f.window()) {
            return Err(Error::Precondition(format!("block {n} is not inside the window [0, {})", f.window())));
        }
        let (lo, hi) = self.block(n);
        let elements = shadow_of(f, lo, hi);
        let measure = self.measure(n, elements.len());
        Ok(BadSet { n, elements, measure })
    }

    /// `B_f` over every block inside the window.
    pub fn bad_sets(&self, f: &FiniteFunction) -> Result<Vec<BadSet>> {
        f.require_fixed_point_free()?;
        f.require_injective()?;
        (0..self.blocks_within(f.window())).map(|n| self.bad_set_unchecked(f, n)).collect()
    }

    /// `μ_n(J_n ∩ A) ≤ k` for every block, with the per-block measures.
    pub fn ed_membership(&self, a: &SubsetOfWindow, k: &BigRational) -> Result<EdMembership> {
        a.check_within(self.prefix_len())?;
        let mut counts = vec![0usize; self.block_count()];
        for x in a.iter() {
            counts[self.block_of(x).expect("checked")] += 1;
        }
        let measures: Vec<BigRational> = counts.iter().enumerate().map(|(n, &c)| self.measure(n, c)).collect();
        let max_measure = measures.iter().max().cloned().unwrap_or_else(BigRational::zero);
        Ok(EdMembership { member: &max_measure <= k, max_measure, measures })
    }

    fn check_selector(&self, x: &SubsetOfWindow) -> Result<()> {
        x.check_within(self.prefix_len())?;
        let blocks: Vec<usize> = x.iter().map(|p| self.block_of(p).expect("checked")).collect();
        match blocks.windows(2).find(|w| w[0] == w[1]) {
            Some(w) => Err(Error::NotSelector(w[0])),
            None => Ok(()),
        }
    }

    /// Cross-block edges of `f` inside `X ∖ B_f`.
    pub fn selector_free_check(&self, f: &FiniteFunction, x: &SubsetOfWindow) -> Result<SelectorReport> {
        let bad: SubsetOfWindow = self.bad_sets(f)?.into_iter().flat_map(|b| b.elements.elements().to_vec()).collect();
        self.selector_check_against(f, x, &bad)
    }

    /// As [`Self::selector_free_check`], with a caller-supplied bad set.
    pub fn selector_check_against(
        &self,
        f: &FiniteFunction,
        x: &SubsetOfWindow,
        bad: &SubsetOfWindow,
    ) -> Result<SelectorReport> {
        self.check_selector(x)?;
        x.check_within(f.window())?;
        let kept: SubsetOfWindow = x.iter().filter(|&p| !bad.contains(p)).collect();
        let cross_block_edges = kept
            .iter()
            .filter_map(|p| f.in_window(p).filter(|&q| kept.contains(q)).map(|q| (p, q)))
            .filter(|&(p, q)| self.block_of(p) != self.block_of(q))
            .collect();
        Ok(SelectorReport { kept, cross_block_edges })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BadSet {
    pub n: usize,
    pub elements: SubsetOfWindow,
    #[serde(with = "crate::ratio")]
    pub measure: BigRational,
}

impl BadSet {
    /// `μ_n(B_f ∩ J_n) ≤ 2`.
    pub fn holds(&self) -> bool {
        self.measure <= BigRational::from_integer(2.into())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdMembership {
    pub member: bool,
    #[serde(with = "crate::ratio")]
    pub max_measure: BigRational,
    #[serde(with = "crate::ratio::vec")]
    pub measures: Vec<BigRational>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelectorReport {
    /// `X ∖ B_f`.
    pub kept: SubsetOfWindow,
    pub cross_block_edges: Vec<(usize, usize)>,
}

impl SelectorReport {
    pub fn ok(&self) -> bool {
        self.cross_block_edges.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcgraph::random_fpf_function;
    use crate::ratio::parse_ratio;

    fn g2() -> GrowthFunction {
        GrowthFunction::constant(2).unwrap()
    }

    fn set(v: &[usize]) -> SubsetOfWindow {
        SubsetOfWindow::new(v.to_vec()).unwrap()
    }

    #[test]
    fn growth_validation() {
        assert!(GrowthFunction::new(vec![]).is_err());
        assert!(GrowthFunction::new(vec![1, 2]).is_err());
        assert!(GrowthFunction::new(vec![3, 2]).is_err());
        let g = GrowthFunction::new(vec![2, 3, 5]).unwrap();
        assert_eq!((g.at(0), g.at(2), g.at(100)), (2, 5, 5));
    }

    #[test]
    fn infinitely_equal_examples() {
        let g = g2();
        assert_eq!(infinitely_equal(&g, &[0, 1, 1], &[0, 1, 1]).unwrap(), vec![0, 1, 2]);
        assert!(infinitely_equal(&g, &[0; 5], &[1; 5]).unwrap().is_empty());
        let parity: Vec<u64> = (0..6).map(|i| i % 2).collect();
        assert_eq!(infinitely_equal(&g, &parity, &[0; 6]).unwrap(), vec![0, 2, 4]);
        assert_eq!(
            infinitely_equal(&g, &[0, 2], &[0, 0]),
            Err(Error::BoundViolation { position: 1, value: 2, bound: 2 })
        );
    }

    #[test]
    fn block_system_examples() {
        let b = build_block_system(&g2(), 2).unwrap();
        assert_eq!(b.i_endpoints(), &[0, 1, 6]);
        assert_eq!(b.size(0), &BigUint::from(2u32));
        assert_eq!(b.size(1), &BigUint::from(32u32));
        assert_eq!(b.j_start(1), &BigUint::from(2u32));
        assert_eq!(b.j_start(2), &BigUint::from(34u32));

        let b = build_block_system(&g2(), 3).unwrap();
        assert_eq!(b.i_block(2), (6, 75));
        assert_eq!(b.size(2), &(BigUint::from(1u32) << 69));

        let b = build_block_system(&GrowthFunction::constant(3).unwrap(), 1).unwrap();
        assert_eq!(b.i_endpoints(), &[0, 1]);
        assert_eq!(b.size(0), &BigUint::from(3u32));

        assert_eq!(build_block_system(&g2(), 4), Err(Error::BlockTooLarge(3)));
    }

    #[test]
    fn growth_condition_minimal() {
        let g = GrowthFunction::new(vec![2, 3, 3, 4]).unwrap();
        let b = build_block_system(&g, 3).unwrap();
        let mut below = BigUint::zero();
        for n in 0..3 {
            let (lo, hi) = b.i_block(n);
            assert_eq!(BigUint::from(hi - lo), &below * 2u32 + 1u32);
            below += b.size(n);
        }
    }

    #[test]
    fn codec_examples() {
        let b = build_block_system(&g2(), 2).unwrap();
        assert_eq!(b.code_point(1, &[0; 5]).unwrap(), BigUint::from(2u32));
        assert_eq!(b.code_point(0, &[0]).unwrap(), BigUint::zero());
        assert_eq!(b.code_point(1, &[1, 0, 0, 0, 0]).unwrap(), BigUint::from(3u32));
        assert_eq!(b.code_point(1, &[0, 0, 0, 0, 1]).unwrap(), BigUint::from(18u32));
        assert!(matches!(b.code_point(1, &[2, 0, 0, 0, 0]), Err(Error::BoundViolation { position: 1, .. })));
        for code in 0..32u32 {
            let t = b.decode(1, &BigUint::from(code)).unwrap();
            assert_eq!(b.encode(1, &t).unwrap(), BigUint::from(code));
        }
        assert!(b.decode(1, &BigUint::from(32u32)).is_err());
    }

    #[test]
    fn mixed_radix_roundtrip() {
        let g = GrowthFunction::new(vec![2, 3, 5, 7]).unwrap();
        let b = build_block_system(&g, 2).unwrap();
        let (lo, hi) = b.i_block(1);
        let radices: Vec<u64> = (lo..hi).map(|i| g.at(i)).collect();
        let total: u64 = radices.iter().product();
        assert_eq!(b.size(1), &BigUint::from(total));
        for code in (0..total).step_by(7) {
            let t = b.decode(1, &BigUint::from(code)).unwrap();
            assert_eq!(b.encode(1, &t).unwrap(), BigUint::from(code));
        }
    }

    #[test]
    fn locate_points() {
        let b = build_block_system(&g2(), 2).unwrap();
        assert_eq!(b.locate(1), Some((0, BigUint::from(1u32))));
        assert_eq!(b.locate(33), Some((1, BigUint::from(31u32))));
        assert_eq!(b.locate(34), None);
        assert_eq!(b.materialized_prefix(100), 34);
        assert_eq!(b.materialized_prefix(10), 2);
    }

    #[test]
    fn shadow_examples() {
        let b = build_block_system(&g2(), 2).unwrap();
        let succ = FiniteFunction::successor(34);
        let s1 = b.shadow_set(&succ, 1).unwrap();
        assert_eq!(s1.elements, set(&[2]));
        assert_eq!((s1.bound, s1.block_len), (4, 5));
        assert!(s1.holds());
        assert!(b.shadow_set(&succ, 0).unwrap().is_empty());

        // J_0 leaves the prefix, but 5 and 9 map back into J_0.
        let mut values: Vec<usize> = (0..34).map(|x| x + 1).collect();
        values[0] = 40;
        values[1] = 41;
        values[5] = 0;
        values[9] = 1;
        let f = FiniteFunction::new(values).unwrap();
        assert_eq!(b.shadow_set(&f, 1).unwrap().elements, set(&[5, 9]));
    }

    #[test]
    fn shadow_needs_window() {
        let b = build_block_system(&g2(), 2).unwrap();
        assert!(b.shadow_set(&FiniteFunction::successor(20), 1).is_err());
    }

    #[test]
    fn meeting_function_examples() {
        let b = build_block_system(&g2(), 2).unwrap();
        let succ = FiniteFunction::successor(34);
        let shadows = b.shadows(&succ).unwrap();
        assert_eq!(b.meeting_function(&shadows).unwrap(), vec![0; 6]);

        // Four tuples at capacity |I_1| - 1.
        let codes = [3u32, 6, 13, 30];
        let elements: SubsetOfWindow = codes.iter().map(|&c| 2 + c as usize).collect();
        let shadows = vec![
            ShadowSet { n: 0, elements: SubsetOfWindow::empty(), bound: 0, block_len: 1 },
            ShadowSet { n: 1, elements, bound: 4, block_len: 5 },
        ];
        let ell = b.meeting_function(&shadows).unwrap();
        for (slot, &c) in codes.iter().enumerate() {
            let t = b.decode(1, &BigUint::from(c)).unwrap();
            assert_eq!(ell[1 + slot], t[slot]);
        }
        assert_eq!(ell[5], 0);
    }

    #[test]
    fn freeness_claim_examples() {
        let b = build_block_system(&g2(), 2).unwrap();
        let succ = FiniteFunction::successor(34);
        let r = b.verify_freeness_claim(&succ, &[0; 6]).unwrap();
        assert_eq!(r.coded_points, vec![0, 2]);
        // 2 = f(1) lies in S_f(1), yet A = {0, 2} is still free.
        assert_eq!(r.shadow_hits, vec![1]);
        assert!(r.intersection.is_empty() && r.ok());

        let mut values: Vec<usize> = (0..34).map(|x| x + 1).collect();
        values[0] = 2;
        values[1] = 0;
        let f = FiniteFunction::new(values).unwrap();
        let r = b.verify_freeness_claim(&f, &[0; 6]).unwrap();
        assert_eq!(r.intersection, vec![2]);
        assert_eq!(r.certificates, vec![Certificate { element: 2, block: 1 }]);
        assert!(r.ok());
    }

    #[test]
    fn avoiding_shadows_gives_free_sets() {
        let b = build_block_system(&g2(), 2).unwrap();
        for seed in 0..20 {
            let f = random_fpf_function(seed, 34, true).unwrap();
            for bits in 0..64u64 {
                let h: Vec<u64> = (0..6).map(|i| (bits >> i) & 1).collect();
                let r = b.verify_freeness_claim(&f, &h).unwrap();
                assert!(r.ok());
                if r.shadow_hits.is_empty() {
                    assert!(r.intersection.is_empty());
                }
            }
        }
    }

    #[test]
    fn ed_block_examples() {
        let m = build_ed_blocks(4).unwrap();
        assert_eq!(m.sizes(), &[1, 2, 12, 90, 840]);
        let mu: Vec<String> = (0..5).map(|n| crate::ratio::format_ratio(m.singleton(n))).collect();
        assert_eq!(mu, ["0/1", "1/1", "1/3", "1/15", "1/105"]);
        for n in 1..5 {
            assert_eq!(m.measure(n, m.sizes()[n] as usize), BigRational::from_integer((2 * n).into()));
        }
        assert_eq!(m.prefix_len(), 945);
    }

    #[test]
    fn bad_set_examples() {
        let m = build_ed_blocks(2).unwrap();
        let succ = FiniteFunction::successor(15);
        assert!(m.bad_set(&succ, 0).unwrap().elements.is_empty());
        let b1 = m.bad_set(&succ, 1).unwrap();
        assert_eq!(b1.elements, set(&[1]));
        assert_eq!(b1.measure, parse_ratio("1").unwrap());
        let b2 = m.bad_set(&succ, 2).unwrap();
        assert_eq!(b2.elements, set(&[3]));
        assert_eq!(b2.measure, parse_ratio("1/3").unwrap());
        assert!(b1.holds() && b2.holds());
    }

    #[test]
    fn ed_membership_examples() {
        let m = build_ed_blocks(3).unwrap();
        let one = parse_ratio("1").unwrap();
        let selector = set(&[0, 1, 3, 15]);
        let r = m.ed_membership(&selector, &one).unwrap();
        assert!(r.member);
        assert_eq!(r.max_measure, one);

        let full = SubsetOfWindow::full(m.prefix_len());
        let r = m.ed_membership(&full, &parse_ratio("5").unwrap()).unwrap();
        assert!(!r.member);
        assert_eq!(r.max_measure, parse_ratio("6").unwrap());

        let fin = build_ed_fin_blocks(4);
        assert_eq!(fin.sizes(), &[0, 1, 2, 3, 4]);
        let graph: SubsetOfWindow = (1..5).map(|n| fin.block(n).0 + n / 2).collect();
        assert!(fin.ed_membership(&graph, &one).unwrap().member);
        assert!(!fin.ed_membership(&set(&[6, 7]), &one).unwrap().member);
        assert!(m.ed_membership(&SubsetOfWindow::full(1000), &one).is_err());
    }

    #[test]
    fn selector_examples() {
        let m = build_ed_blocks(2).unwrap();
        let succ = FiniteFunction::successor(15);
        let r = m.selector_free_check(&succ, &set(&[0, 2, 4])).unwrap();
        assert!(r.ok());
        assert_eq!(r.kept, set(&[0, 2, 4]));

        assert_eq!(m.selector_free_check(&succ, &set(&[1, 2])), Err(Error::NotSelector(1)));

        let r = m.selector_free_check(&succ, &set(&[1, 3])).unwrap();
        assert!(r.kept.is_empty() && r.ok());

        // Removing 1 from B_f lets the edge 0 -> 1 through.
        let r = m.selector_check_against(&succ, &set(&[0, 1]), &SubsetOfWindow::empty()).unwrap();
        assert_eq!(r.cross_block_edges, vec![(0, 1)]);
        assert!(m.selector_free_check(&succ, &set(&[0, 1])).unwrap().ok());
    }

    #[test]
    fn json_shapes() {
        let b = build_block_system(&g2(), 2).unwrap();
        let text = serde_json::to_string(&b).unwrap();
        assert_eq!(text, r#"{"g":[2],"depth":2,"I_endpoints":[0,1,6],"F":["2","32"]}"#);
        assert_eq!(serde_json::from_str::<BlockSystem>(&text).unwrap(), b);
        assert!(serde_json::from_str::<BlockSystem>(r#"{"g":[2],"depth":1,"I_endpoints":[0,2],"F":["4"]}"#).is_err());

        let m = build_ed_blocks(2).unwrap();
        let text = serde_json::to_string(&m).unwrap();
        assert_eq!(text, r#"{"sizes":[1,2,12],"mu":["0/1","1/1","1/3"]}"#);
        assert_eq!(serde_json::from_str::<MeasuredBlocks>(&text).unwrap(), m);

        let coded = b.coded_set(&[1, 1, 0, 0, 0, 0]).unwrap();
        assert_eq!(
            serde_json::to_string(&coded).unwrap(),
            r#"{"blocks":[{"n":0,"code":"1"},{"n":1,"code":"1"}]}"#
        );
    }
}
