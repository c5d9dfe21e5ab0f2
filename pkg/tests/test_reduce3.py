import itertools
from collections import Counter
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from maxkcolor.csp import Assignment, Constraint, CspInstance, count_satisfied, generate_planted, generate_random
from maxkcolor.graph import Coloring, local_search, score
from maxkcolor.reduce3 import (MalformedColoring, build_3color_instance, decode_coloring, encode_assignment,
                               local_gadget_profile)

pools = st.tuples(st.integers(1, 3), st.integers(1, 3), st.integers(1, 3))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), pools, st.integers(0, 12))
def test_total_weight_identity(seed, p, m):
    inst = generate_random(seed, *p, m)
    out = build_3color_instance(inst)
    assert out.graph.total_weight == Fraction(33 * m, 2)
    assert len(out.sources) == out.graph.m


def test_edge_provenance_counts():
    inst = generate_random(3, 2, 2, 2, 5)
    out = build_3color_instance(inst)
    kinds = Counter(s.split(":")[0] for s in out.sources)
    assert kinds["gadget"] == 10 * inst.m
    assert kinds["global"] == 3
    weight = Counter()
    for (_, _, w), s in zip(out.graph.edges, out.sources):
        weight[s.split(":")[0]] += w
    assert weight["gadget"] == 10 * inst.m
    assert weight["global"] == Fraction(3 * inst.m, 2)
    # each constraint touches x, one literal and two z slots twice apiece
    assert weight["literal"] == 3 * inst.m
    assert weight["spoke"] == 2 * inst.m


def test_node_count_and_labels():
    inst = CspInstance(2, 1, 3, (Constraint(0, 0, True, 1, 2),))
    out = build_3color_instance(inst)
    assert out.graph.n == 3 + 2 + 2 + 3 + 4
    assert out.graph.labels is not None and len(set(out.graph.labels)) == out.graph.n


def _gadget_oracle(x, Y, zk, zl):
    """Independent restatement of the ten gadget edges on named nodes."""
    T, F = 1, 2
    val = {1: T, 0: F}
    fixed = {"T": T, "F": F, "x": val[x], "Y": val[Y], "zk": val[zk], "zl": val[zl]}
    edges = [("A", "T"), ("A", "x"), ("A", "B"), ("B", "Y"), ("B", "zk"),
             ("A'", "F"), ("A'", "x"), ("A'", "B'"), ("B'", "Y"), ("B'", "zl")]
    counts = []
    for cols in itertools.product((1, 2, 3), repeat=4):
        col = dict(fixed, **dict(zip(("A", "A'", "B", "B'"), cols)))
        counts.append(sum(col[u] == col[v] for u, v in edges))
    return counts


def test_local_gadget_profile_matches_oracle():
    profiles = local_gadget_profile()
    assert len(profiles) == 16
    for p in profiles:
        counts = _gadget_oracle(p.x, p.Y, p.zk, p.zl)
        sat = (p.x == 1 or p.Y == p.zk) and (p.x == 0 or p.Y == p.zl)
        assert p.satisfied == sat
        assert p.proper_extensions == counts.count(0)
        assert p.one_edge_extensions == counts.count(1)
        assert (p.proper_extensions > 0) == sat
        if not sat:
            assert p.min_miscolored == 1


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10**6), pools, st.integers(1, 10))
def test_planted_round_trip(seed, p, m):
    inst, a = generate_planted(seed, *p, m)
    out = build_3color_instance(inst)
    c = encode_assignment(inst, out.layout, a)
    assert score(out.graph, c).miscolored_weight == 0
    d = decode_coloring(inst, out.layout, c, out.graph)
    assert d.satisfied == m and d.tau == 0
    assert d.assignment == a


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), pools, st.integers(1, 6), st.integers(0, 1000))
def test_decode_bound_on_local_optima(seed, p, m, ls_seed):
    inst = generate_random(seed, *p, m)
    out = build_3color_instance(inst)
    lay = out.layout
    start = Coloring(3, tuple(1 + (v % 3) for v in range(out.graph.n)))
    c = local_search(out.graph, 3, start, seed=ls_seed)
    if len({c[lay.T], c[lay.F], c[lay.R]}) < 3:
        with pytest.raises(MalformedColoring):
            decode_coloring(inst, lay, c, out.graph)
        return
    d = decode_coloring(inst, lay, c, out.graph)
    assert score(out.graph, d.repaired).miscolored_weight <= d.tau
    if d.tau < Fraction(m, 2):
        assert d.satisfied >= m - d.tau


def test_decode_is_color_permutation_invariant():
    inst, a = generate_planted(11, 2, 2, 2, 6)
    out = build_3color_instance(inst)
    c = encode_assignment(inst, out.layout, a)
    for perm in itertools.permutations((1, 2, 3)):
        d = decode_coloring(inst, out.layout, c.permuted(perm), out.graph)
        assert d.assignment == a


def test_collapsed_global_triangle_is_rejected():
    inst, a = generate_planted(1, 1, 1, 1, 2)
    out = build_3color_instance(inst)
    c = encode_assignment(inst, out.layout, a).recolored(out.layout.R, 1)
    with pytest.raises(MalformedColoring):
        decode_coloring(inst, out.layout, c, out.graph)


def test_encode_non_satisfying_assignment_costs_violations():
    # a violated constraint costs at least one unit edge; the encoder pays exactly one
    inst = generate_random(4, 2, 2, 2, 6)
    out = build_3color_instance(inst)
    for bits in itertools.product((0, 1), repeat=inst.n_vars):
        a = Assignment.from_bits(inst, bits)
        c = encode_assignment(inst, out.layout, a)
        assert score(out.graph, c).miscolored_weight == inst.m - count_satisfied(inst, a)


def test_round_trip_larger_pools():
    for seed in range(200):
        p = tuple(1 + (seed * s) % 6 for s in (1, 5, 7))
        inst, a = generate_planted(seed, *p, 1 + seed % 10)
        out = build_3color_instance(inst)
        c = encode_assignment(inst, out.layout, a)
        assert score(out.graph, c).miscolored_weight == 0
        assert decode_coloring(inst, out.layout, c, out.graph).satisfied == inst.m
