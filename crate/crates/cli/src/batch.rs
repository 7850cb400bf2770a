//! Seeded batch runs. Instance `i` of a batch with seed `s` uses seed
//! `s + i`; instances run in parallel and are reported in index order.

use clap::ValueEnum;
use num_rational::BigRational;
use rayon::prelude::*;
use serde_json::{json, Value};

use freeset_core::boundedfam::{build_block_system, build_ed_blocks, GrowthFunction, MeasuredBlocks};
use freeset_core::freesets::{katetov_partition, max_free_subset, SearchMode};
use freeset_core::funcgraph::random_fpf_function;
use freeset_core::involutions::decompose_into_involutions;
use freeset_core::partitions::escape_intervals;
use freeset_core::rng::SeededRng;
use freeset_core::rosenthal::{find_fragmenting_set, fragments, function_to_matrix, RosenthalMatrix};
use freeset_core::{FiniteFunction, SubsetOfWindow};

use crate::commands::{self, value};
use crate::input::{Input, InputError};
use crate::verify;
use crate::Outcome;

/// Environment variable capping the number of worker threads.
pub const THREADS_VAR: &str = "FREESET_LAB_THREADS";

/// Largest window for `bridge` and `oracle`, which enumerate subsets.
pub const ENUMERATION_CAP: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BatchOp {
    /// Involution decomposition of injective functions.
    InvolutionsDecompose,
    /// Three-colourings of arbitrary fixed-point-free functions.
    Katetov,
    /// Fragmentation of the 0-1 matrix against freeness, over all subsets.
    Bridge,
    /// Shadow bound and both claims for every coded set.
    BlocksClaims,
    /// Measure bound on the bad set.
    EdBadset,
    /// Selectors avoiding the bad set have no cross-block edges.
    EdSelector,
    /// Colourings, greedy fragmenting sets and escape intervals against
    /// exhaustive checks on small windows.
    Oracle,
    /// Escape intervals of arbitrary functions.
    Escape,
}

impl BatchOp {
    pub fn name(self) -> &'static str {
        match self {
            BatchOp::InvolutionsDecompose => "involutions-decompose",
            BatchOp::Katetov => "katetov",
            BatchOp::Bridge => "bridge",
            BatchOp::BlocksClaims => "blocks-claims",
            BatchOp::EdBadset => "ed-badset",
            BatchOp::EdSelector => "ed-selector",
            BatchOp::Oracle => "oracle",
            BatchOp::Escape => "escape",
        }
    }
}

#[derive(Debug, Clone)]
pub struct BatchParams {
    pub op: BatchOp,
    pub seed: u64,
    pub count: usize,
    pub n: Option<usize>,
    pub depth: Option<usize>,
    pub g: GrowthFunction,
    pub selectors: usize,
}

impl BatchParams {
    pub fn new(op: BatchOp, seed: u64, count: usize) -> Self {
        BatchParams { op, seed, count, n: None, depth: None, g: GrowthFunction::constant(2).expect("2 is valid"), selectors: 100 }
    }
}

struct Instance {
    summary: Value,
    violations: Vec<Value>,
}

fn threads() -> Option<usize> {
    std::env::var(THREADS_VAR).ok()?.trim().parse().ok().filter(|&t| t > 0)
}

pub fn run_batch(p: &BatchParams) -> Input<Outcome> {
    let setting = Setting::new(p)?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = threads() {
        builder = builder.num_threads(t);
    }
    let pool = builder.build().map_err(|e| InputError(format!("thread pool: {e}")))?;
    let results: Vec<Input<Instance>> = pool.install(|| {
        (0..p.count).into_par_iter().map(|i| setting.run(p.seed.wrapping_add(i as u64))).collect()
    });

    let mut instances = Vec::with_capacity(p.count);
    let mut violations = Vec::new();
    for (index, r) in results.into_iter().enumerate() {
        let inst = r?;
        let seed = p.seed.wrapping_add(index as u64);
        let ok = inst.violations.is_empty();
        if !ok {
            violations.push(json!({"index": index, "seed": seed, "violations": inst.violations}));
        }
        instances.push(json!({"index": index, "seed": seed, "ok": ok, "summary": inst.summary}));
    }
    let result = json!({
        "op": p.op.name(),
        "seed": p.seed,
        "count": p.count,
        "n": setting.n,
        "depth": setting.depth,
        "passed": p.count - violations.len(),
        "instances": instances,
    });
    Ok(Outcome { result, violations })
}

/// Everything shared by the instances of one batch.
struct Setting {
    op: BatchOp,
    n: usize,
    depth: Option<usize>,
    selectors: usize,
    blocks: Option<freeset_core::boundedfam::BlockSystem>,
    coded: Vec<Vec<u64>>,
    measured: Option<MeasuredBlocks>,
}

impl Setting {
    fn new(p: &BatchParams) -> Input<Self> {
        let mut s = Setting {
            op: p.op,
            n: p.n.unwrap_or(1000),
            depth: None,
            selectors: p.selectors,
            blocks: None,
            coded: Vec::new(),
            measured: None,
        };
        match p.op {
            BatchOp::Bridge | BatchOp::Oracle => {
                s.n = p.n.unwrap_or(12);
                if s.n == 0 || s.n > ENUMERATION_CAP {
                    return Err(InputError(format!("--n must be in 1..={ENUMERATION_CAP} for {}", p.op.name())));
                }
            }
            BatchOp::BlocksClaims => {
                let depth = p.depth.unwrap_or(2);
                let b = build_block_system(&p.g, depth)?;
                s.n = b.materialized_prefix(1 << 20);
                if b.blocks_within(s.n) < depth {
                    return Err(InputError(format!("blocks of depth {depth} are too large to materialise")));
                }
                s.coded = commands::all_coded_sequences(&b, s.n)?;
                s.depth = Some(depth);
                s.blocks = Some(b);
            }
            BatchOp::EdBadset | BatchOp::EdSelector => {
                let depth = p.depth.unwrap_or(4);
                let m = build_ed_blocks(depth)?;
                s.n = m.prefix_len();
                s.depth = Some(depth);
                s.measured = Some(m);
            }
            BatchOp::InvolutionsDecompose | BatchOp::Katetov | BatchOp::Escape => {
                if s.n == 0 {
                    return Err(InputError("--n must be positive".into()));
                }
            }
        }
        Ok(s)
    }

    fn run(&self, seed: u64) -> Input<Instance> {
        match self.op {
            BatchOp::InvolutionsDecompose => involutions(seed, self.n),
            BatchOp::Katetov => katetov(seed, self.n),
            BatchOp::Bridge => bridge(seed, self.n),
            BatchOp::BlocksClaims => {
                let b = self.blocks.as_ref().expect("built in new");
                let f = random_fpf_function(seed, self.n, true)?;
                let (summary, violations) = commands::block_claims(b, &f, &self.coded)?;
                Ok(Instance { summary, violations })
            }
            BatchOp::EdBadset => {
                let m = self.measured.as_ref().expect("built in new");
                let f = random_fpf_function(seed, self.n, true)?;
                let (rows, violations) = commands::bad_set_violations(m, &f)?;
                let measures: Vec<Value> = rows.into_iter().map(|r| r["measure"].clone()).collect();
                Ok(Instance { summary: json!({"measures": measures}), violations })
            }
            BatchOp::EdSelector => selectors(seed, self.measured.as_ref().expect("built in new"), self.selectors),
            BatchOp::Oracle => oracle(seed, self.n),
            BatchOp::Escape => {
                let f = random_fpf_function(seed, self.n, false)?;
                let h = escape_intervals(&f);
                let violations = commands::escape_violations(&f, h.endpoints());
                Ok(Instance { summary: json!({"blocks": h.block_count()}), violations })
            }
        }
    }
}

fn involutions(seed: u64, n: usize) -> Input<Instance> {
    let f = random_fpf_function(seed, n, true)?;
    let d = decompose_into_involutions(&f)?;
    let violations = commands::decomposition_violations(&f, &d.parts);
    let summary = json!({
        "uncovered_edges": d.uncovered_edges.len(),
        "truncated_orbits": d.truncated_orbits,
        "odd_classes": d.odd_classes,
        "case": value(&d.case),
    });
    Ok(Instance { summary, violations })
}

fn katetov(seed: u64, n: usize) -> Input<Instance> {
    let f = random_fpf_function(seed, n, false)?;
    let c = katetov_partition(&f)?;
    let violations = verify::monochromatic(f.values(), c.colors()).into_iter().map(|(x, y)| json!({"edge": [x, y]})).collect();
    let sizes: Vec<usize> = c.classes().iter().map(SubsetOfWindow::len).collect();
    Ok(Instance { summary: json!({"class_sizes": sizes}), violations })
}

fn bridge(seed: u64, n: usize) -> Input<Instance> {
    let f = random_fpf_function(seed, n, false)?;
    let m = function_to_matrix(&f)?;
    let one = BigRational::from_integer(1.into());
    let mut violations = Vec::new();
    let mut free_sets = 0u64;
    for mask in 0u32..1 << n {
        let a: SubsetOfWindow = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        let free = verify::is_free(f.values(), a.elements());
        free_sets += u64::from(free);
        if fragments(&m, &a, &one)?.fragments != free {
            violations.push(json!({"set": a, "free": free}));
        }
    }
    Ok(Instance { summary: json!({"subsets": 1u64 << n, "free_sets": free_sets}), violations })
}

/// One point from a random subset of blocks, avoiding `bad`.
/// Points of each block outside the bad set.
fn allowed_points(m: &MeasuredBlocks, bad: &SubsetOfWindow) -> Vec<Vec<usize>> {
    (0..m.block_count())
        .map(|n| {
            let (lo, hi) = m.block(n);
            (lo..hi).filter(|&p| !bad.contains(p)).collect()
        })
        .collect()
}

fn draw_selector(rng: &mut SeededRng, allowed: &[Vec<usize>]) -> SubsetOfWindow {
    let mut x = Vec::new();
    for points in allowed {
        if !points.is_empty() && rng.coin(3, 4) {
            x.push(points[rng.index(points.len())]);
        }
    }
    SubsetOfWindow::new(x).expect("blocks increase")
}

fn selectors(seed: u64, m: &MeasuredBlocks, count: usize) -> Input<Instance> {
    let f = random_fpf_function(seed, m.prefix_len(), true)?;
    let bad: SubsetOfWindow =
        m.bad_sets(&f)?.iter().flat_map(|b| b.elements.elements().to_vec()).collect();
    let allowed = allowed_points(m, &bad);
    let mut rng = SeededRng::new(seed);
    let mut violations = Vec::new();
    let mut points = 0;
    for j in 0..count {
        let x = draw_selector(&mut rng, &allowed);
        points += x.len();
        let report = m.selector_check_against(&f, &x, &bad)?;
        let direct: Vec<(usize, usize)> = verify::edges_inside(f.values(), x.elements())
            .into_iter()
            .filter(|&(a, b)| m.block_of(a) != m.block_of(b))
            .collect();
        if direct != report.cross_block_edges || report.kept != x {
            violations.push(json!({"selector": j, "problem": "checker disagrees with direct scan"}));
        }
        if !direct.is_empty() {
            violations.push(json!({"selector": j, "set": x, "cross_block_edges": direct}));
        }
    }
    Ok(Instance { summary: json!({"selectors": count, "points": points, "bad_points": bad.len()}), violations })
}

fn random_matrix(rng: &mut SeededRng, n: usize) -> Input<RosenthalMatrix> {
    let mut bound = BigRational::from_integer(0.into());
    let entries: Vec<Vec<BigRational>> = (0..n)
        .map(|_| {
            let row: Vec<BigRational> = (0..n)
                .map(|_| {
                    if rng.coin(1, 2) {
                        BigRational::from_integer(0.into())
                    } else {
                        BigRational::new((1 + rng.below(3) as i64).into(), (1 + rng.below(4) as i64).into())
                    }
                })
                .collect();
            let sum = row.iter().fold(BigRational::from_integer(0.into()), |a, e| a + e);
            if sum > bound {
                bound = sum;
            }
            row
        })
        .collect();
    Ok(RosenthalMatrix::new(n, entries, bound)?)
}

fn certify_fragmenting(m: &RosenthalMatrix, eps: &BigRational, tag: &str, violations: &mut Vec<Value>) -> Input<usize> {
    let set = find_fragmenting_set(m, eps, 0, SearchMode::Greedy)?.expect("no minimum size");
    let entries: Vec<Vec<BigRational>> =
        (0..m.square_size()).map(|k| (0..m.square_size()).map(|c| m.entry(k, c).clone()).collect()).collect();
    let heavy = verify::row_sums(&entries, set.elements()).into_iter().any(|(_, s)| &s >= eps);
    if heavy || !fragments(m, &set, eps)?.fragments {
        violations.push(json!({"matrix": tag, "set": set, "problem": "greedy set does not fragment"}));
    }
    Ok(set.len())
}

fn oracle(seed: u64, max_n: usize) -> Input<Instance> {
    let mut rng = SeededRng::new(seed);
    let n = 1 + rng.index(max_n);
    let f: FiniteFunction = random_fpf_function(rng.next_u64(), n, false)?;
    let mut violations = Vec::new();

    let maximum = verify::exhaustive_max_free(&[f.values()], n);
    let exact = max_free_subset(std::slice::from_ref(&f), n, SearchMode::Exact)?;
    if exact.len() != maximum || !verify::is_free(f.values(), exact.elements()) {
        violations.push(json!({"problem": "exact free set disagrees with enumeration"}));
    }
    let c = katetov_partition(&f)?;
    for (k, class) in c.classes().iter().enumerate() {
        if !verify::is_free(f.values(), class.elements()) || class.len() > maximum {
            violations.push(json!({"class": k, "problem": "colour class is not free"}));
        }
    }

    let one = BigRational::from_integer(1.into());
    let from_f = certify_fragmenting(&function_to_matrix(&f)?, &one, "function", &mut violations)?;
    let m = random_matrix(&mut rng, n)?;
    let eps = BigRational::new((1 + rng.below(3) as i64).into(), (1 + rng.below(2) as i64).into());
    let from_random = certify_fragmenting(&m, &eps, "random", &mut violations)?;

    let h = escape_intervals(&f);
    violations.extend(commands::escape_violations(&f, h.endpoints()));

    let summary = json!({
        "n": n,
        "max_free": maximum,
        "greedy_fragmenting": [from_f, from_random],
        "escape_blocks": h.block_count(),
    });
    Ok(Instance { summary, violations })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_batches_pass() {
        for op in BatchOp::value_variants() {
            let mut p = BatchParams::new(*op, 3, 3);
            p.n = match op {
                BatchOp::Bridge | BatchOp::Oracle => Some(6),
                _ => Some(60),
            };
            p.selectors = 5;
            let o = run_batch(&p).unwrap();
            assert!(o.violations.is_empty(), "{}: {:?}", op.name(), o.violations);
            assert_eq!(o.result["instances"].as_array().unwrap().len(), 3);
        }
    }

    #[test]
    fn batches_are_deterministic() {
        let p = BatchParams::new(BatchOp::Oracle, 11, 20);
        assert_eq!(run_batch(&p).unwrap(), run_batch(&p).unwrap());
    }

    #[test]
    fn enumeration_cap() {
        let mut p = BatchParams::new(BatchOp::Bridge, 0, 1);
        p.n = Some(17);
        assert!(run_batch(&p).is_err());
    }
}
