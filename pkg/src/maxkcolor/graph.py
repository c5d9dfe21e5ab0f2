"""Weighted multigraphs, k-colorings and baseline Max k-Colorable Subgraph solvers.

Weights are exact :class:`fractions.Fraction` values. The search routines scale
them to integers internally (by the lcm of the denominators) so the inner
loops never touch rational arithmetic.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Iterator, Sequence

import numpy as np


class BudgetExceeded(RuntimeError):
    """Raised when an exact search would visit more nodes than allowed."""


Edge = tuple[int, int, Fraction]


@dataclass(frozen=True)
class WeightedGraph:
    n: int
    edges: tuple[Edge, ...]
    labels: tuple[str, ...] | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("vertex count must be non-negative")
        norm = []
        for u, v, w in self.edges:
            w = Fraction(w)
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"edge ({u}, {v}) has an endpoint outside [0, {self.n})")
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if w <= 0:
                raise ValueError(f"edge ({u}, {v}) has non-positive weight {w}")
            norm.append((int(u), int(v), w))
        object.__setattr__(self, "edges", tuple(norm))
        if self.labels is not None:
            if len(self.labels) != self.n:
                raise ValueError("labels must name every vertex")
            object.__setattr__(self, "labels", tuple(self.labels))

    @classmethod
    def from_pairs(cls, n: int, pairs: Iterable[tuple[int, int]], weight=1, labels=None):
        return cls(n, tuple((u, v, Fraction(weight)) for u, v in pairs), labels)

    @property
    def m(self) -> int:
        """Number of edges, counting parallel copies."""
        return len(self.edges)

    @cached_property
    def total_weight(self) -> Fraction:
        return sum((w for _, _, w in self.edges), Fraction(0))

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        """Edge-multiplicity degree of every vertex."""
        deg = [0] * self.n
        for u, v, _ in self.edges:
            deg[u] += 1
            deg[v] += 1
        return tuple(deg)

    @cached_property
    def weighted_degrees(self) -> tuple[Fraction, ...]:
        deg = [Fraction(0)] * self.n
        for u, v, w in self.edges:
            deg[u] += w
            deg[v] += w
        return tuple(deg)

    def is_unit_weight(self) -> bool:
        return all(w == 1 for _, _, w in self.edges)

    @cached_property
    def weight_scale(self) -> int:
        """Least common multiple of the weight denominators."""
        scale = 1
        for _, _, w in self.edges:
            scale = math.lcm(scale, w.denominator)
        return scale

    def integer_weights(self) -> list[int]:
        s = self.weight_scale
        return [int(w * s) for _, _, w in self.edges]

    def label(self, v: int) -> str:
        return self.labels[v] if self.labels is not None else str(v)


@dataclass(frozen=True)
class Coloring:
    """Total map vertex -> color in {1..k}; ``colors[v]`` is the color of ``v``."""

    k: int
    colors: tuple[int, ...]

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be at least 1")
        colors = tuple(int(c) for c in self.colors)
        for v, c in enumerate(colors):
            if not 1 <= c <= self.k:
                raise ValueError(f"vertex {v} has color {c} outside 1..{self.k}")
        object.__setattr__(self, "colors", colors)

    def __len__(self):
        return len(self.colors)

    def __getitem__(self, v: int) -> int:
        return self.colors[v]

    def recolored(self, v: int, color: int) -> "Coloring":
        cols = list(self.colors)
        cols[v] = color
        return Coloring(self.k, tuple(cols))

    def permuted(self, perm: Sequence[int]) -> "Coloring":
        """Rename color ``c`` to ``perm[c - 1]``."""
        return Coloring(self.k, tuple(perm[c - 1] for c in self.colors))


@dataclass(frozen=True)
class ScoreReport:
    proper_weight: Fraction
    miscolored_weight: Fraction
    fraction_proper: Fraction

    @property
    def total_weight(self) -> Fraction:
        return self.proper_weight + self.miscolored_weight


def _check_cover(g: WeightedGraph, c: Coloring):
    if len(c) != g.n:
        raise ValueError(f"coloring assigns {len(c)} vertices, graph has {g.n}")


def score(g: WeightedGraph, c: Coloring) -> ScoreReport:
    """Exact properly/improperly colored weight of ``c`` on ``g``.

    An edgeless graph scores ``fraction_proper == 1``.
    """
    _check_cover(g, c)
    bad = sum((w for u, v, w in g.edges if c[u] == c[v]), Fraction(0))
    total = g.total_weight
    frac = Fraction(1) if total == 0 else (total - bad) / total
    return ScoreReport(total - bad, bad, frac)


def miscolored_weight(g: WeightedGraph, c: Coloring) -> Fraction:
    return score(g, c).miscolored_weight


def random_coloring_expectation(g: WeightedGraph, k: int) -> Fraction:
    """Expected properly colored weight of a uniformly random k-coloring."""
    if k < 1:
        raise ValueError("k must be at least 1")
    return (1 - Fraction(1, k)) * g.total_weight


def _back_adjacency(g: WeightedGraph) -> list[list[tuple[int, int]]]:
    """For every vertex, its lower-indexed neighbours with summed integer weights."""
    acc: list[dict[int, int]] = [dict() for _ in range(g.n)]
    for (u, v, _), w in zip(g.edges, g.integer_weights()):
        lo, hi = min(u, v), max(u, v)
        acc[hi][lo] = acc[hi].get(lo, 0) + w
    return [sorted(d.items()) for d in acc]


def exact_best_coloring(g: WeightedGraph, k: int, budget: int = 2_000_000) -> tuple[Coloring, ScoreReport]:
    """Minimum miscolored weight k-coloring by branch and bound.

    Vertices are assigned in id order and colors are introduced in order of
    first use, so the first optimum found is the lexicographically smallest
    optimal assignment. ``budget`` caps the number of search nodes; running
    out raises :class:`BudgetExceeded` rather than returning a guess.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    n = g.n
    if n == 0:
        c = Coloring(k, ())
        return c, score(g, c)
    back = _back_adjacency(g)
    colors = [0] * n
    best_cost = math.inf
    best: list[int] | None = None
    visited = 0

    def dfs(v: int, cost: int, used: int):
        nonlocal best_cost, best, visited
        if v == n:
            if cost < best_cost:
                best_cost = cost
                best = colors.copy()
            return
        for col in range(1, min(k, used + 1) + 1):
            visited += 1
            if visited > budget:
                raise BudgetExceeded(f"exact coloring search exceeded {budget} nodes (n={n}, k={k})")
            extra = 0
            for u, w in back[v]:
                if colors[u] == col:
                    extra += w
            if cost + extra >= best_cost:
                continue
            colors[v] = col
            dfs(v + 1, cost + extra, max(used, col))
        colors[v] = 0

    dfs(0, 0, 0)
    c = Coloring(k, tuple(best))
    return c, score(g, c)


def is_k_colorable(g: WeightedGraph, k: int, budget: int = 2_000_000) -> bool:
    """True iff some k-coloring miscolors zero weight.

    Same search order and budget contract as :func:`exact_best_coloring`, but
    any positive partial cost is pruned and the search stops at the first hit.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    n = g.n
    back = _back_adjacency(g)
    colors = [0] * n
    visited = 0

    def dfs(v: int, used: int) -> bool:
        nonlocal visited
        if v == n:
            return True
        for col in range(1, min(k, used + 1) + 1):
            visited += 1
            if visited > budget:
                raise BudgetExceeded(f"colorability search exceeded {budget} nodes (n={n}, k={k})")
            if any(colors[u] == col for u, _ in back[v]):
                continue
            colors[v] = col
            if dfs(v + 1, max(used, col)):
                return True
        colors[v] = 0
        return False

    return dfs(0, 0)


def iter_colorings_below(
    g: WeightedGraph,
    k: int,
    threshold: Fraction,
    fixed: dict[int, int] | None = None,
    budget: int = 50_000_000,
) -> Iterator[Coloring]:
    """Yield every k-coloring with miscolored weight strictly below ``threshold``.

    Vertices in ``fixed`` keep their given color. Exhaustive: a branch is cut
    only once its partial miscolored weight already reaches the threshold.
    """
    fixed = fixed or {}
    n = g.n
    back = _back_adjacency(g)
    limit = Fraction(threshold) * g.weight_scale
    colors = [0] * n
    visited = 0

    def dfs(v: int, cost: int):
        nonlocal visited
        if v == n:
            yield Coloring(k, tuple(colors))
            return
        choices = (fixed[v],) if v in fixed else range(1, k + 1)
        for col in choices:
            visited += 1
            if visited > budget:
                raise BudgetExceeded(f"enumeration exceeded {budget} nodes")
            extra = 0
            for u, w in back[v]:
                if colors[u] == col:
                    extra += w
            if cost + extra >= limit:
                continue
            colors[v] = col
            yield from dfs(v + 1, cost + extra)
        colors[v] = 0

    yield from dfs(0, 0)


def local_search(g: WeightedGraph, k: int, start: Coloring, seed=None) -> Coloring:
    """Single-vertex recoloring descent until no move strictly helps.

    Vertices are scanned in a seeded random order each pass; a vertex moves to
    the color with the least incident miscolored weight (smallest color on
    ties) only when that is a strict improvement.
    """
    _check_cover(g, start)
    if start.k != k:
        raise ValueError("start coloring uses a different k")
    rng = np.random.default_rng(seed)
    adj: list[list[tuple[int, int]]] = [[] for _ in range(g.n)]
    for (u, v, _), w in zip(g.edges, g.integer_weights()):
        adj[u].append((v, w))
        adj[v].append((u, w))
    colors = list(start.colors)
    improved = True
    while improved:
        improved = False
        for v in rng.permutation(g.n):
            conflict = [0] * (k + 1)
            for u, w in adj[v]:
                conflict[colors[u]] += w
            cur = conflict[colors[v]]
            best = min(range(1, k + 1), key=lambda c: (conflict[c], c))
            if conflict[best] < cur:
                colors[v] = best
                improved = True
    return Coloring(k, tuple(colors))
