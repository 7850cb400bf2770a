use freeset_core::boundedfam::{build_block_system, build_ed_blocks, GrowthFunction};
use freeset_core::freesets::{katetov_partition, max_free_subset, SearchMode};
use freeset_core::funcgraph::{is_star_free, orbit_decomposition, random_fpf_function, OrbitKind};
use freeset_core::involutions::{decompose_into_involutions, Involution};
use freeset_core::partitions::{
    dominates, edge_blocks, escape_intervals, localized_function, partition_function, IntervalPartition,
    PartitionIntoParts,
};
use freeset_core::ratio::{format_ratio, parse_ratio};
use freeset_core::rosenthal::{find_fragmenting_set, fragments, function_to_matrix};
use freeset_core::{FiniteFunction, SubsetOfWindow};
use num_bigint::BigUint;
use proptest::prelude::*;

/// Fixed-point-free maps on `[0, n)` with values up to `n + 2`.
fn fpf(max_n: usize) -> impl Strategy<Value = FiniteFunction> {
    (1..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(0..n + 3, n).prop_map(|mut v| {
            for (i, x) in v.iter_mut().enumerate() {
                if *x == i {
                    *x = i + 1;
                }
            }
            FiniteFunction::new(v).unwrap()
        })
    })
}

fn injective(max_n: usize) -> impl Strategy<Value = FiniteFunction> {
    (any::<u64>(), 1..=max_n).prop_map(|(seed, n)| random_fpf_function(seed, n, true).unwrap())
}

fn subset_of(n: usize) -> impl Strategy<Value = SubsetOfWindow> {
    proptest::collection::vec(any::<bool>(), n)
        .prop_map(|bits| bits.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i).collect())
}

fn brute_max_free(f: &FiniteFunction) -> usize {
    let n = f.window();
    (0u32..1 << n)
        .filter(|mask| f.edges().all(|(x, y)| mask >> x & 1 == 0 || mask >> y & 1 == 0))
        .map(|mask| mask.count_ones() as usize)
        .max()
        .unwrap()
}

proptest! {
    #[test]
    fn katetov_classes_are_free(f in fpf(80)) {
        let c = katetov_partition(&f).unwrap();
        prop_assert!(c.monochromatic_edges(&f).is_empty());
        for class in c.classes() {
            prop_assert!(is_star_free(&class, &f));
        }
    }

    #[test]
    fn exact_free_subset_matches_enumeration(f in fpf(11)) {
        let best = max_free_subset(std::slice::from_ref(&f), f.window(), SearchMode::Exact).unwrap();
        prop_assert!(is_star_free(&best, &f));
        prop_assert_eq!(best.len(), brute_max_free(&f));
    }

    #[test]
    fn greedy_free_subset_is_maximal(f in fpf(40)) {
        let found = max_free_subset(std::slice::from_ref(&f), f.window(), SearchMode::Greedy).unwrap();
        prop_assert!(is_star_free(&found, &f));
        for x in (0..f.window()).filter(|&x| !found.contains(x)) {
            let bigger: SubsetOfWindow = found.iter().chain([x]).collect();
            prop_assert!(!is_star_free(&bigger, &f));
        }
    }

    #[test]
    fn decomposition_gaps_only_on_paths(f in injective(120)) {
        let d = decompose_into_involutions(&f).unwrap();
        prop_assert_eq!(d.parts.len(), 4);
        let orbits = orbit_decomposition(&f).unwrap();
        let index = orbits.orbit_index(f.window());
        for (x, _) in d.coverage_gaps(&f) {
            prop_assert_eq!(orbits.orbits[index[x]].kind, OrbitKind::Path);
        }
        for part in &d.parts {
            prop_assert_eq!(part.exceptions().len(), f.window() % 2);
            let g = part.as_function();
            for x in 0..f.window() {
                if let Some(y) = part.partner(x) {
                    prop_assert_eq!(part.partner(y), Some(x));
                    prop_assert_eq!(g.apply(x), y);
                }
            }
        }
    }

    #[test]
    fn involution_json_roundtrip(f in injective(40)) {
        for part in decompose_into_involutions(&f).unwrap().parts {
            let text = serde_json::to_string(&part).unwrap();
            prop_assert_eq!(serde_json::from_str::<Involution>(&text).unwrap(), part);
        }
    }

    #[test]
    fn matrix_bridge(f in fpf(9), bits in any::<u16>()) {
        let a: SubsetOfWindow = (0..f.window()).filter(|i| bits >> i & 1 == 1).collect();
        let m = function_to_matrix(&f).unwrap();
        let one = parse_ratio("1").unwrap();
        prop_assert_eq!(fragments(&m, &a, &one).unwrap().fragments, is_star_free(&a, &f));
    }

    #[test]
    fn fragmenting_search_agrees_with_free_search(f in fpf(10)) {
        let m = function_to_matrix(&f).unwrap();
        let one = parse_ratio("1").unwrap();
        let exact = find_fragmenting_set(&m, &one, 0, SearchMode::Exact).unwrap().unwrap();
        prop_assert!(fragments(&m, &exact, &one).unwrap().fragments);
        prop_assert_eq!(exact.len(), brute_max_free(&f));
        let greedy = find_fragmenting_set(&m, &one, 0, SearchMode::Greedy).unwrap().unwrap();
        prop_assert!(greedy.len() <= exact.len());
    }

    #[test]
    fn escape_blocks_two_apart_have_no_edges(f in fpf(100)) {
        let h = escape_intervals(&f);
        prop_assert_eq!(h.end(), f.window());
        for (x, y) in f.edges() {
            let (bx, by) = (h.block_of(x).unwrap(), h.block_of(y).unwrap());
            prop_assert!(bx.abs_diff(by) <= 1, "edge {}->{} spans blocks {} and {}", x, y, bx, by);
        }
    }

    #[test]
    fn domination_is_reflexive_and_coarsening_dominates(w in 1usize..8, n in 1usize..60) {
        let fine = IntervalPartition::uniform(w, n);
        prop_assert_eq!(dominates(&fine, &fine, n).violations, 0);
        let coarse = IntervalPartition::uniform(2 * w, n);
        prop_assert_eq!(dominates(&coarse, &fine, n).violations, 0);
    }

    #[test]
    fn partition_function_is_fixed_point_free(parts in proptest::collection::vec(0usize..5, 1..40)) {
        let mut labels = parts;
        // Relabel in order of first appearance so no part is empty.
        let mut seen = Vec::new();
        for l in labels.iter_mut() {
            let k = seen.iter().position(|s| s == l).unwrap_or_else(|| { seen.push(*l); seen.len() - 1 });
            *l = k;
        }
        let p = PartitionIntoParts::new(labels).unwrap();
        let f = partition_function(&p);
        prop_assert!(f.is_fixed_point_free());
        for k in 0..p.window() {
            prop_assert!(f.apply(k) == p.part_of(k) || f.apply(k) == k + 1);
        }
    }

    #[test]
    fn localized_edges_stay_in_blocks(g in fpf(60), cuts in proptest::collection::vec(0usize..61, 2..8)) {
        let a: SubsetOfWindow = cuts.into_iter().filter(|&c| c <= g.window()).collect();
        prop_assume!(a.len() >= 2);
        let f = localized_function(&g, &a).unwrap();
        prop_assert!(f.is_fixed_point_free());
        for i in 0..g.window() {
            prop_assert!(f.apply(i) == g.apply(i) || f.apply(i) == i + 1);
        }
    }

    #[test]
    fn edge_blocks_each_hold_an_edge(g in fpf(60), a_bits in subset_of(60)) {
        let a: SubsetOfWindow = a_bits.iter().filter(|&x| x < g.window()).collect();
        if let Ok(b) = edge_blocks(&g, &a) {
            for (lo, hi) in b.blocks() {
                prop_assert!(g.edges().any(|(x, y)| a.contains(x) && a.contains(y)
                    && (lo..hi).contains(&x) && (lo..hi).contains(&y)));
            }
        }
    }

    #[test]
    fn codec_roundtrip(radices in proptest::collection::vec(2u64..7, 1..4), digits in proptest::collection::vec(0u64..100, 3)) {
        let mut g = radices;
        g.sort_unstable();
        let g = GrowthFunction::new(g).unwrap();
        let b = build_block_system(&g, 2).unwrap();
        let (lo, hi) = b.i_block(1);
        let tuple: Vec<u64> = (lo..hi).map(|i| digits[(i - lo) % 3] % g.at(i)).collect();
        let code = b.encode(1, &tuple).unwrap();
        prop_assert!(&code < b.size(1));
        prop_assert_eq!(b.decode(1, &code).unwrap(), tuple);
        let point = b.code_point(1, &b.decode(1, &code).unwrap()).unwrap();
        prop_assert_eq!(point, b.j_start(1) + &code);
    }

    #[test]
    fn shadow_bound(seed in any::<u64>()) {
        let b = build_block_system(&GrowthFunction::constant(2).unwrap(), 2).unwrap();
        let f = random_fpf_function(seed, 34, true).unwrap();
        for s in b.shadows(&f).unwrap() {
            prop_assert!(s.holds());
        }
    }

    #[test]
    fn ed_bad_set_measure_at_most_two(seed in any::<u64>()) {
        let m = build_ed_blocks(3).unwrap();
        let f = random_fpf_function(seed, m.prefix_len(), true).unwrap();
        for b in m.bad_sets(&f).unwrap() {
            prop_assert!(b.holds(), "block {} measure {}", b.n, format_ratio(&b.measure));
        }
    }

    #[test]
    fn ratio_text_roundtrip(p in -1000i64..1000, q in 1i64..1000) {
        let r = parse_ratio(&format!("{p}/{q}")).unwrap();
        prop_assert_eq!(parse_ratio(&format_ratio(&r)).unwrap(), r);
    }
}

#[test]
fn block_sizes_match_growth_condition() {
    let g = GrowthFunction::constant(2).unwrap();
    let b = build_block_system(&g, 3).unwrap();
    let mut below = BigUint::from(0u32);
    for n in 0..3 {
        let (lo, hi) = b.i_block(n);
        assert!(BigUint::from(hi - lo) > &below * 2u32);
        assert!(BigUint::from(hi - lo - 1) <= &below * 2u32);
        below += b.size(n);
    }
}
