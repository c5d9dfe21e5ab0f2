import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from maxkcolor.graph import (BudgetExceeded, Coloring, WeightedGraph, exact_best_coloring, is_k_colorable,
                             iter_colorings_below, local_search, miscolored_weight, random_coloring_expectation,
                             score)


@st.composite
def small_graphs(draw, max_n=6, max_m=10):
    n = draw(st.integers(1, max_n))
    if n < 2:
        return WeightedGraph(n, ())
    pair = st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)).filter(lambda p: p[0] != p[1])
    weight = st.fractions(min_value=Fraction(1, 6), max_value=3, max_denominator=6)
    edges = draw(st.lists(st.tuples(pair, weight), max_size=max_m))
    return WeightedGraph(n, tuple((u, v, w) for (u, v), w in edges))


def brute_best(g, k):
    best = None
    for cols in itertools.product(range(1, k + 1), repeat=g.n):
        bad = miscolored_weight(g, Coloring(k, cols))
        if best is None or bad < best[0]:
            best = (bad, cols)
    return best


def test_validation():
    with pytest.raises(ValueError):
        WeightedGraph(2, ((0, 0, Fraction(1)),))
    with pytest.raises(ValueError):
        WeightedGraph(2, ((0, 2, Fraction(1)),))
    with pytest.raises(ValueError):
        WeightedGraph(2, ((0, 1, Fraction(0)),))
    with pytest.raises(ValueError):
        Coloring(3, (1, 4))


def test_score_triangle():
    g = WeightedGraph.from_pairs(3, [(0, 1), (1, 2), (0, 2)], weight=Fraction(1, 2))
    rep = score(g, Coloring(3, (1, 1, 2)))
    assert rep.miscolored_weight == Fraction(1, 2)
    assert rep.proper_weight == 1
    assert rep.fraction_proper == Fraction(2, 3)


def test_edgeless_fraction_is_one():
    assert score(WeightedGraph(3, ()), Coloring(2, (1, 1, 1))).fraction_proper == 1


def test_parallel_edges_count_separately():
    g = WeightedGraph.from_pairs(2, [(0, 1), (0, 1)])
    assert g.total_weight == 2 and g.degrees == (2, 2)
    assert score(g, Coloring(2, (1, 1))).miscolored_weight == 2


@settings(max_examples=60, deadline=None)
@given(small_graphs(), st.integers(2, 3))
def test_exact_solver_matches_brute_force(g, k):
    best_bad, best_cols = brute_best(g, k)
    c, rep = exact_best_coloring(g, k)
    assert rep.miscolored_weight == best_bad
    assert score(g, c).miscolored_weight == best_bad


@settings(max_examples=60, deadline=None)
@given(small_graphs(), st.integers(2, 3))
def test_colorability_matches_solver(g, k):
    assert is_k_colorable(g, k) == (exact_best_coloring(g, k)[1].miscolored_weight == 0)


@settings(max_examples=40, deadline=None)
@given(small_graphs(max_n=5), st.integers(2, 3), st.fractions(min_value=0, max_value=4, max_denominator=3))
def test_iter_colorings_below_is_exhaustive(g, k, thr):
    got = {c.colors for c in iter_colorings_below(g, k, thr)}
    want = {cols for cols in itertools.product(range(1, k + 1), repeat=g.n)
            if miscolored_weight(g, Coloring(k, cols)) < thr}
    assert got == want


def test_iter_colorings_respects_fixed():
    g = WeightedGraph.from_pairs(3, [(0, 1), (1, 2)])
    got = list(iter_colorings_below(g, 3, Fraction(1), fixed={0: 2}))
    assert got and all(c[0] == 2 for c in got)


@settings(max_examples=30, deadline=None)
@given(small_graphs(max_n=5), st.integers(1, 3))
def test_random_expectation_matches_average(g, k):
    total = sum(score(g, Coloring(k, cols)).proper_weight
                for cols in itertools.product(range(1, k + 1), repeat=g.n))
    assert Fraction(total, k ** g.n) == random_coloring_expectation(g, k)


def test_budget_refusal():
    g = WeightedGraph.from_pairs(8, [(i, j) for i in range(8) for j in range(i + 1, 8)])
    with pytest.raises(BudgetExceeded):
        exact_best_coloring(g, 4, budget=10)


@settings(max_examples=30, deadline=None)
@given(small_graphs(), st.integers(2, 3), st.integers(0, 100))
def test_local_search_never_worsens(g, k, seed):
    start = Coloring(k, (1,) * g.n)
    out = local_search(g, k, start, seed=seed)
    assert miscolored_weight(g, out) <= miscolored_weight(g, start)
    assert local_search(g, k, start, seed=seed) == out


@settings(max_examples=40, deadline=None)
@given(small_graphs(), st.permutations([1, 2, 3]), st.integers(0, 10**6))
def test_score_invariant_under_color_renaming(g, perm, seed):
    cols = tuple(int(c) for c in np.random.default_rng(seed).integers(1, 4, size=g.n))
    c = Coloring(3, cols)
    assert score(g, c) == score(g, c.permuted(perm))


@settings(max_examples=30, deadline=None)
@given(small_graphs())
def test_optimum_monotone_in_k(g):
    vals = [exact_best_coloring(g, k)[1].miscolored_weight for k in (1, 2, 3, 4)]
    assert all(a >= b for a, b in zip(vals, vals[1:]))
