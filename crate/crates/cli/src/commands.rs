use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::Serialize;
use serde_json::{json, Value};

use freeset_core::boundedfam::{build_block_system, build_ed_blocks, build_ed_fin_blocks, BlockSystem, MeasuredBlocks};
use freeset_core::freesets::{find_unsplit_set, free_report, katetov_partition, max_free_subset, Coloring, SearchMode};
use freeset_core::funcgraph::{orbit_decomposition, OrbitKind};
use freeset_core::involutions::{combine_on_blocks, decompose_into_involutions, Involution};
use freeset_core::partitions::{
    dominates, escape_intervals, localized_function, partition_function, IntervalPartition, PartitionIntoParts,
};
use freeset_core::ratio::format_ratio;
use freeset_core::rosenthal::{find_fragmenting_set, fragments, RosenthalMatrix};
use freeset_core::{FiniteFunction, SubsetOfWindow};

use crate::input::{self, load, load_all, Input, InputError};
use crate::verify;
use crate::{BlocksOp, Command, EdOp, InvolutionsOp, OracleOp, Outcome, PartitionOp, RosenthalOp};

/// Largest window the exhaustive oracle enumerates.
pub const ORACLE_CAP: usize = 20;

/// Most coded sets `blocks verify` enumerates when `--h` is omitted.
pub const CODED_SET_CAP: u64 = 1 << 16;

pub(crate) fn value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serialisable")
}

fn outcome(result: Value, violations: Vec<Value>) -> Input<Outcome> {
    Ok(Outcome { result, violations })
}

pub fn dispatch(command: &Command) -> Input<Outcome> {
    match command {
        Command::Orbits { func } => orbits(&load("fn", func)?),
        Command::Free { funcs, n, mode, set, threshold } => {
            let family: Vec<FiniteFunction> = load_all("fn", funcs)?;
            let n = n.unwrap_or(family[0].window());
            match set {
                Some(s) => check_free(&family, &load("set", s)?, *threshold),
                None => free_search(&family, n, (*mode).into()),
            }
        }
        Command::Katetov { func } => katetov(&load("fn", func)?),
        Command::Involutions { op: InvolutionsOp::Decompose { func } } => decompose(&load("fn", func)?),
        Command::Involutions { op: InvolutionsOp::Combine { parts, blocks, colors } } => {
            let (parts, colors): (Vec<Involution>, Vec<u8>) = (load("parts", parts)?, load("colors", colors)?);
            combine(&parts, &load("blocks", blocks)?, &colors)
        }
        Command::Rosenthal { op: RosenthalOp::Check { matrix, set, eps } } => {
            rosenthal_check(&load("matrix", matrix)?, &load("set", set)?, &input::ratio("eps", eps)?)
        }
        Command::Rosenthal { op: RosenthalOp::Search { matrix, eps, min_size, mode } } => {
            rosenthal_search(&load("matrix", matrix)?, &input::ratio("eps", eps)?, *min_size, (*mode).into())
        }
        Command::Partition { op: PartitionOp::Fp { parts } } => partition_fp(&load("parts", parts)?),
        Command::Partition { op: PartitionOp::Escape { func } } => escape(&load("fn", func)?),
        Command::Partition { op: PartitionOp::Localize { func, set } } => localize(&load("fn", func)?, &load("set", set)?),
        Command::Dominates { i, j, n, threshold } => {
            let (i, j): (IntervalPartition, IntervalPartition) = (load("i", i)?, load("j", j)?);
            let n = n.unwrap_or(i.end().min(j.end()));
            domination(&i, &j, n, *threshold)
        }
        Command::Blocks { op: BlocksOp::Build { g, depth } } => blocks_build(&build_block_system(&input::growth(g)?, *depth)?),
        Command::Blocks { op: BlocksOp::Verify { g, depth, func, h } } => {
            let b = build_block_system(&input::growth(g)?, *depth)?;
            let h = h.as_deref().map(|h| load::<Vec<u64>>("h", h)).transpose()?;
            blocks_verify(&b, &load("fn", func)?, h)
        }
        Command::Ed { op: EdOp::Build { depth, fin } } => ed_build(*depth, *fin),
        Command::Ed { op: EdOp::Badset { depth, func } } => ed_badset(&build_ed_blocks(*depth)?, &load("fn", func)?),
        Command::Ed { op: EdOp::Member { depth, set, threshold, fin } } => {
            let m = if *fin { build_ed_fin_blocks(*depth) } else { build_ed_blocks(*depth)? };
            ed_member(&m, &load("set", set)?, &input::ratio("threshold", threshold)?)
        }
        Command::Oracle { op: OracleOp::Freeset { funcs, set } } => {
            let set = set.as_deref().map(|s| load("set", s)).transpose()?;
            oracle_freeset(&load_all("fn", funcs)?, set.as_ref())
        }
        Command::Oracle { op: OracleOp::Unsplit { colorings, n, min_size } } => {
            let colorings: Vec<Coloring> = load("colorings", colorings)?;
            let n = n.or(colorings.first().map(Coloring::window)).unwrap_or(0);
            oracle_unsplit(&colorings, n, *min_size)
        }
        Command::Batch { op, seed, count, n, depth, g, selectors } => {
            let params = crate::batch::BatchParams {
                op: *op,
                seed: *seed,
                count: *count,
                n: *n,
                depth: *depth,
                g: input::growth(g)?,
                selectors: *selectors,
            };
            crate::batch::run_batch(&params)
        }
    }
}

pub fn orbits(f: &FiniteFunction) -> Input<Outcome> {
    let d = orbit_decomposition(f)?;
    let v = f.values();
    let n = f.window();
    let mut violations = Vec::new();
    let mut count = vec![0usize; n];
    let has_preimage: Vec<bool> = {
        let mut p = vec![false; n];
        v.iter().filter(|&&y| y < n).for_each(|&y| p[y] = true);
        p
    };
    for o in &d.orbits {
        o.nodes.iter().for_each(|&x| count[x] += 1);
        if o.nodes.windows(2).any(|w| v[w[0]] != w[1]) {
            violations.push(json!({"orbit": o.nodes[0], "problem": "consecutive nodes are not an edge"}));
        }
        let last = *o.nodes.last().expect("nonempty orbit");
        let closes = match o.kind {
            OrbitKind::Cycle => v[last] == o.nodes[0],
            OrbitKind::Path => v[last] >= n && !has_preimage[o.nodes[0]],
        };
        if !closes {
            violations.push(json!({"orbit": o.nodes[0], "problem": "orbit is not maximal"}));
        }
    }
    if let Some(x) = count.iter().position(|&c| c != 1) {
        violations.push(json!({"point": x, "problem": "not covered exactly once"}));
    }
    let result = json!({
        "orbits": value(&d.orbits),
        "cycles": d.cycles().count(),
        "paths": d.paths().count(),
    });
    outcome(result, violations)
}

fn targets_inside(values: &[usize], set: &[usize]) -> Vec<usize> {
    let mut t: Vec<usize> = verify::edges_inside(values, set).into_iter().map(|(_, y)| y).collect();
    t.sort_unstable();
    t.dedup();
    t
}

pub fn check_free(family: &[FiniteFunction], set: &SubsetOfWindow, threshold: usize) -> Input<Outcome> {
    let report = free_report(set, family);
    let mut violations = Vec::new();
    for (i, f) in family.iter().enumerate() {
        let direct = targets_inside(f.values(), set.elements());
        if direct.len() != report.per_function[i] {
            violations.push(json!({"function": i, "problem": "verifier disagrees on |f[A] ∩ A|"}));
        }
        if direct.len() > threshold {
            violations.push(json!({"function": i, "intersection": direct}));
        }
    }
    outcome(json!({"per_function": report.per_function, "threshold": threshold}), violations)
}

pub fn free_search(family: &[FiniteFunction], n: usize, mode: SearchMode) -> Input<Outcome> {
    let set = max_free_subset(family, n, mode)?;
    let mut violations = Vec::new();
    for (i, f) in family.iter().enumerate() {
        let bad = verify::edges_inside(f.values(), set.elements());
        if !bad.is_empty() {
            violations.push(json!({"function": i, "edges": bad}));
        }
    }
    for x in (0..n).filter(|&x| !set.contains(x)) {
        let bigger: Vec<usize> = set.iter().chain([x]).collect();
        if family.iter().all(|f| verify::is_free(f.values(), &bigger)) {
            violations.push(json!({"point": x, "problem": "set is not maximal"}));
            break;
        }
    }
    if mode == SearchMode::Exact && n <= ORACLE_CAP {
        let values: Vec<&[usize]> = family.iter().map(|f| f.values()).collect();
        let best = verify::exhaustive_max_free(&values, n);
        if best != set.len() {
            violations.push(json!({"problem": "not maximum", "size": set.len(), "maximum": best}));
        }
    }
    outcome(json!({"set": set, "size": set.len()}), violations)
}

pub fn katetov(f: &FiniteFunction) -> Input<Outcome> {
    let c = katetov_partition(f)?;
    let bad = verify::monochromatic(f.values(), c.colors());
    let violations = bad.into_iter().map(|(x, y)| json!({"edge": [x, y]})).collect();
    let sizes: Vec<usize> = c.classes().iter().map(SubsetOfWindow::len).collect();
    outcome(json!({"coloring": c, "class_sizes": sizes}), violations)
}

/// Verdict for a four-part decomposition: parts are involutions, and every
/// uncovered in-window edge lies off the cycles.
pub fn decomposition_violations(f: &FiniteFunction, parts: &[Involution]) -> Vec<Value> {
    let n = f.window();
    let mut violations = Vec::new();
    if parts.len() != 4 {
        violations.push(json!({"problem": "expected four parts", "parts": parts.len()}));
    }
    for (k, p) in parts.iter().enumerate() {
        if p.window() != n {
            violations.push(json!({"part": k, "problem": "window differs"}));
            continue;
        }
        for problem in verify::involution_problems(p.pairing(), n % 2) {
            violations.push(json!({"part": k, "problem": problem}));
        }
    }
    let v = f.values();
    for x in (0..n).filter(|&x| v[x] < n) {
        let covered = parts.iter().any(|p| p.window() == n && p.pairing()[x] == v[x]);
        if !covered && verify::on_cycle(v, x) {
            violations.push(json!({"edge": [x, v[x]], "problem": "uncovered edge on a cycle"}));
        }
    }
    violations
}

pub fn decompose(f: &FiniteFunction) -> Input<Outcome> {
    let d = decompose_into_involutions(f)?;
    let violations = decomposition_violations(f, &d.parts);
    outcome(value(&d), violations)
}

pub fn combine(parts: &[Involution], blocks: &IntervalPartition, colors: &[u8]) -> Input<Outcome> {
    let r = combine_on_blocks(parts, blocks, colors)?;
    let n = r.combined.window();
    let mut violations: Vec<Value> =
        verify::involution_problems(r.combined.pairing(), n % 2).into_iter().map(|p| json!({"problem": p})).collect();
    for x in r.domain.iter() {
        let k = blocks.block_of(x).expect("domain lies in blocks");
        let expected = parts[colors[k] as usize].pairing()[x];
        if r.combined.pairing()[x] != expected || blocks.block_of(expected) != Some(k) {
            violations.push(json!({"point": x, "problem": "combined pairing leaves the chosen part"}));
        }
    }
    outcome(value(&r), violations)
}

fn square_entries(m: &RosenthalMatrix) -> Vec<Vec<BigRational>> {
    let w = m.square_size();
    (0..w).map(|k| (0..w).map(|c| m.entry(k, c).clone()).collect()).collect()
}

/// Rows whose direct off-diagonal sum over `set` reaches `eps`.
fn heavy_rows(m: &RosenthalMatrix, set: &SubsetOfWindow, eps: &BigRational) -> Vec<(usize, BigRational)> {
    verify::row_sums(&square_entries(m), set.elements()).into_iter().filter(|(_, s)| s >= eps).collect()
}

pub fn rosenthal_check(m: &RosenthalMatrix, set: &SubsetOfWindow, eps: &BigRational) -> Input<Outcome> {
    let r = fragments(m, set, eps)?;
    let heavy = heavy_rows(m, set, eps);
    let mut violations: Vec<Value> =
        heavy.iter().map(|(k, s)| json!({"row": k, "sum": format_ratio(s)})).collect();
    if r.fragments != heavy.is_empty() {
        violations.push(json!({"problem": "verifier disagrees with fragments"}));
    }
    outcome(json!({"fragments": r.fragments, "witness": r.witness, "eps": format_ratio(eps)}), violations)
}

pub fn rosenthal_search(m: &RosenthalMatrix, eps: &BigRational, min_size: usize, mode: SearchMode) -> Input<Outcome> {
    let found = find_fragmenting_set(m, eps, min_size, mode)?;
    let violations = match &found {
        Some(set) => heavy_rows(m, set, eps).iter().map(|(k, s)| json!({"row": k, "sum": format_ratio(s)})).collect(),
        None => Vec::new(),
    };
    let size = found.as_ref().map(SubsetOfWindow::len);
    outcome(json!({"set": found, "size": size, "eps": format_ratio(eps)}), violations)
}

pub fn partition_fp(p: &PartitionIntoParts) -> Input<Outcome> {
    let f = partition_function(p);
    let violations = (0..p.window())
        .filter(|&k| {
            let expected = if p.part_of(k) != k { p.part_of(k) } else { k + 1 };
            f.apply(k) != expected || f.apply(k) == k
        })
        .map(|k| json!({"point": k}))
        .collect();
    outcome(json!({"function": f}), violations)
}

/// Endpoints are well formed and no edge joins blocks two or more apart.
pub fn escape_violations(f: &FiniteFunction, endpoints: &[usize]) -> Vec<Value> {
    let mut violations = Vec::new();
    if endpoints.first() != Some(&0) || endpoints.last() != Some(&f.window()) {
        violations.push(json!({"problem": "endpoints do not span the window"}));
        return violations;
    }
    for (x, y) in verify::long_edges(f.values(), endpoints) {
        violations.push(json!({"edge": [x, y], "problem": "edge skips a block"}));
    }
    violations
}

pub fn escape(f: &FiniteFunction) -> Input<Outcome> {
    let h = escape_intervals(f);
    let violations = escape_violations(f, h.endpoints());
    outcome(json!({"intervals": h, "blocks": h.block_count()}), violations)
}

pub fn localize(g: &FiniteFunction, a: &SubsetOfWindow) -> Input<Outcome> {
    let f = localized_function(g, a)?;
    let cuts = a.elements();
    let block = |x: usize| (0..cuts.len() - 1).find(|&j| cuts[j] <= x && x < cuts[j + 1]);
    let violations = (0..g.window())
        .filter(|&i| {
            let keep = block(i).is_some() && block(i) == block(g.apply(i));
            f.apply(i) != if keep { g.apply(i) } else { i + 1 }
        })
        .map(|i| json!({"point": i}))
        .collect();
    outcome(json!({"function": f}), violations)
}

pub fn domination(i: &IntervalPartition, j: &IntervalPartition, n: usize, threshold: usize) -> Input<Outcome> {
    let r = dominates(i, j, n);
    let direct = verify::undominated_blocks(i.endpoints(), j.endpoints(), n);
    let mut violations = Vec::new();
    if direct.len() != r.violations || direct.last().copied() != r.last_violation {
        violations.push(json!({"problem": "verifier disagrees with dominates"}));
    }
    if direct.len() > threshold {
        violations.push(json!({"undominated_blocks": direct, "threshold": threshold}));
    }
    outcome(value(&r), violations)
}

pub fn blocks_build(b: &BlockSystem) -> Input<Outcome> {
    let mut violations = Vec::new();
    let mut below = BigUint::from(0u32);
    for n in 0..b.depth() {
        let (lo, hi) = b.i_block(n);
        let len = BigUint::from(hi - lo);
        if len != &below * 2u32 + 1u32 {
            violations.push(json!({"block": n, "problem": "|I_n| is not the minimal admissible length"}));
        }
        let product: BigUint = (lo..hi).map(|i| BigUint::from(b.growth().at(i))).product();
        if &product != b.size(n) {
            violations.push(json!({"block": n, "problem": "F(n) differs from the product of g over I_n"}));
        }
        below += product;
    }
    outcome(value(b), violations)
}

fn usize_of(x: &BigUint) -> usize {
    x.to_usize().expect("materialised block")
}

/// Re-derives both claims for every `h` in `hs` with direct scans.
pub fn block_claims(b: &BlockSystem, f: &FiniteFunction, hs: &[Vec<u64>]) -> Input<(Value, Vec<Value>)> {
    let blocks = b.blocks_within(f.window());
    let v = f.values();
    let mut violations = Vec::new();

    let direct_shadows: Vec<Vec<usize>> =
        (0..blocks).map(|n| verify::shadow(v, usize_of(b.j_start(n)), usize_of(b.j_start(n + 1)))).collect();
    let shadows = b.shadows(f)?;
    for (n, s) in direct_shadows.iter().enumerate() {
        let (lo, hi) = b.i_block(n);
        if s.as_slice() != shadows[n].elements.elements() {
            violations.push(json!({"block": n, "problem": "shadow differs from direct scan"}));
        }
        if s.len() > 2 * usize_of(b.j_start(n)) || 2 * usize_of(b.j_start(n)) >= hi - lo {
            violations.push(json!({"block": n, "problem": "shadow bound fails", "size": s.len()}));
        }
    }
    let ell = b.meeting_function(&shadows)?;
    for (n, s) in direct_shadows.iter().enumerate() {
        let (lo, hi) = b.i_block(n);
        for &x in s {
            let t = b.decode(n, &(BigUint::from(x) - b.j_start(n)))?;
            if (lo..hi).all(|i| ell[i] != t[i - lo]) {
                violations.push(json!({"block": n, "point": x, "problem": "meeting function misses a shadow tuple"}));
            }
        }
    }

    let mut intersections = 0;
    let mut shadow_hits = 0;
    for h in hs {
        let report = b.verify_freeness_claim(f, h)?;
        let points = &report.coded_points;
        let edges = verify::edges_inside(v, points);
        if !edges.is_empty() {
            intersections += 1;
        }
        shadow_hits += report.shadow_hits.len();
        for (a, c) in edges {
            let m = points.iter().position(|&p| p == a).expect("edge inside A");
            let k = points.iter().position(|&p| p == c).expect("edge inside A");
            let top = m.max(k);
            if direct_shadows[top].binary_search(&points[top]).is_err() {
                violations.push(json!({"h": h, "edge": [a, c], "problem": "intersection without shadow membership"}));
            }
        }
        for (n, s) in direct_shadows.iter().enumerate() {
            let (lo, hi) = b.i_block(n);
            if s.binary_search(&points[n]).is_ok() && (lo..hi).all(|i| ell[i] != h[i]) {
                violations.push(json!({"h": h, "block": n, "problem": "meeting function misses h"}));
            }
        }
        if !report.ok() {
            violations.push(json!({"h": h, "report": value(&report)}));
        }
    }
    let summary = json!({
        "blocks": blocks,
        "shadow_sizes": direct_shadows.iter().map(Vec::len).collect::<Vec<_>>(),
        "coded_sets": hs.len(),
        "intersecting_sets": intersections,
        "shadow_hits": shadow_hits,
    });
    Ok((summary, violations))
}

/// Every `h` over the positions of blocks inside `window`, zero elsewhere.
pub fn all_coded_sequences(b: &BlockSystem, window: usize) -> Input<Vec<Vec<u64>>> {
    let used = b.i_endpoints()[b.blocks_within(window)];
    let len = *b.i_endpoints().last().expect("nonempty");
    let radices: Vec<u64> = (0..used).map(|i| b.growth().at(i)).collect();
    let total = radices.iter().try_fold(1u64, |acc, &r| acc.checked_mul(r).filter(|&t| t <= CODED_SET_CAP));
    let total = total.ok_or_else(|| InputError(format!("more than {CODED_SET_CAP} coded sets; pass --h")))?;
    Ok((0..total)
        .map(|mut code| {
            let mut h = vec![0; len];
            for (i, &r) in radices.iter().enumerate() {
                h[i] = code % r;
                code /= r;
            }
            h
        })
        .collect())
}

pub fn blocks_verify(b: &BlockSystem, f: &FiniteFunction, h: Option<Vec<u64>>) -> Input<Outcome> {
    let hs = match h {
        Some(h) => vec![h],
        None => all_coded_sequences(b, f.window())?,
    };
    let (mut summary, violations) = block_claims(b, f, &hs)?;
    if let [h] = hs.as_slice() {
        summary["report"] = value(&b.verify_freeness_claim(f, h)?);
    }
    outcome(summary, violations)
}

pub fn ed_build(depth: usize, fin: bool) -> Input<Outcome> {
    let m = if fin { build_ed_fin_blocks(depth) } else { build_ed_blocks(depth)? };
    let mut violations = Vec::new();
    if !fin {
        let mut total = 0u64;
        for (n, &size) in m.sizes().iter().enumerate() {
            let expected_size = if n == 0 { 1 } else { 2 * n as u64 * total };
            let expected_mu = if n == 0 {
                BigRational::from_integer(0.into())
            } else {
                BigRational::new(1.into(), total.into())
            };
            if size != expected_size || m.singleton(n) != &expected_mu {
                violations.push(json!({"block": n, "problem": "recurrence fails"}));
            }
            total += size;
        }
    }
    outcome(value(&m), violations)
}

/// Bad sets recomputed by direct scan, each checked against `μ_n ≤ 2`.
pub fn bad_set_violations(m: &MeasuredBlocks, f: &FiniteFunction) -> Input<(Vec<Value>, Vec<Value>)> {
    let sets = m.bad_sets(f)?;
    let two = BigRational::from_integer(2.into());
    let mut rows = Vec::new();
    let mut violations = Vec::new();
    for s in &sets {
        let (lo, hi) = m.block(s.n);
        let direct = verify::shadow(f.values(), lo, hi);
        let measure = m.singleton(s.n) * BigRational::from_integer(direct.len().into());
        if direct.as_slice() != s.elements.elements() || measure != s.measure {
            violations.push(json!({"block": s.n, "problem": "bad set differs from direct scan"}));
        }
        if measure > two {
            violations.push(json!({"block": s.n, "measure": format_ratio(&measure)}));
        }
        rows.push(json!({"n": s.n, "elements": direct, "measure": format_ratio(&measure)}));
    }
    Ok((rows, violations))
}

pub fn ed_badset(m: &MeasuredBlocks, f: &FiniteFunction) -> Input<Outcome> {
    let (rows, violations) = bad_set_violations(m, f)?;
    outcome(json!({"blocks": rows}), violations)
}

pub fn ed_member(m: &MeasuredBlocks, a: &SubsetOfWindow, k: &BigRational) -> Input<Outcome> {
    let r = m.ed_membership(a, k)?;
    let mut violations = Vec::new();
    for n in 0..m.block_count() {
        let (lo, hi) = m.block(n);
        let count = a.iter().filter(|x| (lo..hi).contains(x)).count();
        let measure = m.singleton(n) * BigRational::from_integer(count.into());
        if measure != r.measures[n] {
            violations.push(json!({"block": n, "problem": "measure differs from direct count"}));
        }
        if &measure > k {
            violations.push(json!({"block": n, "measure": format_ratio(&measure), "level": format_ratio(k)}));
        }
    }
    outcome(value(&r), violations)
}

pub fn oracle_freeset(family: &[FiniteFunction], set: Option<&SubsetOfWindow>) -> Input<Outcome> {
    let n = family[0].window();
    if n > ORACLE_CAP {
        return Err(InputError(format!("oracle enumerates at most {ORACLE_CAP} points, got {n}")));
    }
    let values: Vec<&[usize]> = family.iter().map(|f| f.values()).collect();
    let maximum = verify::exhaustive_max_free(&values, n);
    let best = max_free_subset(family, n, SearchMode::Exact)?;
    let mut violations = Vec::new();
    if best.len() != maximum || !family.iter().all(|f| verify::is_free(f.values(), best.elements())) {
        violations.push(json!({"problem": "exact search disagrees with enumeration"}));
    }
    let mut result = json!({"maximum": maximum, "set": best});
    if let Some(a) = set {
        let free = family.iter().all(|f| verify::is_free(f.values(), a.elements()));
        if !free {
            for (i, f) in family.iter().enumerate() {
                let edges = verify::edges_inside(f.values(), a.elements());
                if !edges.is_empty() {
                    violations.push(json!({"function": i, "edges": edges, "problem": "claimed set is not free"}));
                }
            }
        }
        result["claimed"] = json!({"free": free, "size": a.len(), "maximum": free && a.len() == maximum});
    }
    outcome(result, violations)
}

pub fn oracle_unsplit(colorings: &[Coloring], n: usize, min_size: usize) -> Input<Outcome> {
    let found = find_unsplit_set(colorings, n, min_size)?;
    let same = |x: usize, y: usize| colorings.iter().all(|c| c.color(x) == c.color(y));
    let largest = (0..n).map(|x| (0..n).filter(|&y| same(x, y)).count()).max().unwrap_or(0);
    let mut violations = Vec::new();
    match &found {
        Some(u) => {
            for (i, c) in colorings.iter().enumerate() {
                if u.set.iter().any(|x| c.color(x) != u.choice[i]) {
                    violations.push(json!({"coloring": i, "problem": "set is split"}));
                }
            }
            if u.set.len() != largest {
                violations.push(json!({"problem": "not the largest unsplit set", "largest": largest}));
            }
        }
        None if largest >= min_size && n > 0 => {
            violations.push(json!({"problem": "missed an unsplit set", "largest": largest}));
        }
        None => {}
    }
    outcome(json!({"unsplit": found, "largest": largest}), violations)
}
