"""Smoke test for the freeset_lab extension module.

Build and install first:  pip install --no-build-isolation -e .
Then run:                 python3 python/smoke_test.py
"""

import json

import freeset_lab as fl


def check_function_basics():
    f = fl.FiniteFunction([1, 2, 0, 4, 3])
    assert f.window == 5 and len(f) == 5
    assert f(0) == 1
    assert f.is_fixed_point_free() and f.is_injective()
    assert f.edges() == [(0, 1), (1, 2), (2, 0), (3, 4), (4, 3)]
    assert fl.FiniteFunction.from_json(f.to_json()) == f
    try:
        f(5)
    except ValueError:
        pass
    else:
        raise AssertionError("out-of-window call accepted")

    s = fl.FiniteFunction.successor(6)
    assert s.values == [1, 2, 3, 4, 5, 6]
    assert fl.escape_intervals(s) == [0, 2, 4, 6]


def check_free_sets():
    cycle = fl.FiniteFunction([1, 2, 3, 4, 0])
    colors = fl.katetov(cycle)
    assert colors == [0, 1, 0, 1, 2]
    assert sorted(colors.count(c) for c in range(3)) == [1, 2, 2]
    for x, y in cycle.edges():
        assert colors[x] != colors[y]

    for seed in range(20):
        f = fl.FiniteFunction.random(seed, 10)
        best = fl.max_free_subset([f])
        assert fl.free_report([f], best) == [0]
        # Brute force: nothing larger is free.
        for mask in range(1 << 10):
            pts = [x for x in range(10) if mask >> x & 1]
            if len(pts) > len(best):
                assert fl.free_report([f], pts) != [0]
        greedy = fl.max_free_subset([f], mode="greedy")
        assert len(greedy) <= len(best)
        assert fl.free_report([f], greedy) == [0]

    found = fl.find_unsplit_set([[0, 0, 1, 1], [0, 0, 0, 1]], 4, 2)
    assert found is not None and len(found["set"]) >= 2


def check_involutions_and_matrices():
    f = fl.FiniteFunction.random(7, 200)
    d = fl.decompose(f)
    assert len(d["parts"]) == 4
    assert d["uncovered_edges"] == []

    swap = {"k": 2, "n": 2, "row_bound": "2/1", "entries": [["0/1", "1/1"], ["1/1", "0/1"]]}
    report = fl.fragments(swap, [0, 1], "1/1")
    assert report["fragments"] is False and report["witness"]["row"] == 0
    assert fl.fragments(json.dumps(swap), [0], "1/1")["fragments"] is True
    assert len(fl.find_fragmenting_set(swap)) == 1

    m = fl.function_matrix(fl.FiniteFunction([1, 0, 3, 2]))
    assert m["k"] == 4


def check_partitions():
    g = fl.partition_function([0, 1, 0, 1])
    assert g.values == [1, 2, 0, 1]
    assert g.is_fixed_point_free()
    assert fl.dominates([0, 4, 8], [0, 2, 4, 6, 8], 8)["violations"] == 0


def check_blocks():
    b = fl.BlockSystem(2, 2)
    assert b.depth == 2
    assert b.i_endpoints[0] == 0
    for n in range(b.depth):
        size = b.sizes[n]
        for code in range(min(size, 50)):
            digits = b.decode(n, code)
            assert b.encode(n, digits) == code
    prefix = b.materialized_prefix()
    assert prefix == 34
    f = fl.FiniteFunction.successor(prefix)
    report = b.verify_freeness_claim(f, [0] * b.i_endpoints[-1])
    assert report["claim2_violations"] == []
    shadows = b.shadows(f)
    assert len(shadows) == b.depth
    for shadow in shadows:
        assert len(shadow["elements"]) <= shadow["bound"]

    ed = fl.MeasuredBlocks(4)
    assert ed.sizes == [1, 2, 12, 90, 840]
    assert ed.prefix_len == 945
    f = fl.FiniteFunction.random(3, ed.prefix_len)
    for bad in ed.bad_sets(f):
        num, den = map(int, bad["measure"].split("/"))
        assert num <= 2 * den
    lo, hi = ed.block(2)
    assert ed.membership([lo], "1")["member"]
    fin = fl.MeasuredBlocks(4, fin=True)
    assert fin.sizes == [0, 1, 2, 3, 4]


def main():
    check_function_basics()
    check_free_sets()
    check_involutions_and_matrices()
    check_partitions()
    check_blocks()
    print("smoke test passed")


if __name__ == "__main__":
    main()
