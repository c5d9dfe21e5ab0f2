"""3-coloring -> k-coloring lift, padding for k not divisible by 3, and
weighted -> unweighted expansion.

For k = 3K' the lifted graph H has vertices (u, i, j) with i in 1..k/3 and
j in 1..3. Between blocks, (u, i, j) ~ (v, i', j) with unit weight for every
edge uv of G and every i, i'. Inside the block B_u of size k every pair is
joined with weight (2/3) d_u.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .graph import Coloring, WeightedGraph, score

TWO_THIRDS = Fraction(2, 3)


@dataclass(frozen=True)
class TensorLayout:
    k: int
    n_source: int
    degrees: tuple[int, ...]

    @property
    def copies(self) -> int:
        return self.k // 3

    def vertex(self, u: int, i: int, j: int) -> int:
        """Id of (u, i, j); i in 1..k/3 and j in 1..3."""
        return u * self.k + (i - 1) * 3 + (j - 1)

    def triple(self, vid: int) -> tuple[int, int, int]:
        u, r = divmod(vid, self.k)
        i, j = divmod(r, 3)
        return u, i + 1, j + 1

    def block(self, u: int) -> range:
        return range(u * self.k, (u + 1) * self.k)


def tensor_weight_formula(g: WeightedGraph, k: int) -> Fraction:
    """Closed form sum_u [C(k,2)(2/3)d_u + (3/2)(k/3)^2 d_u]."""
    per = math.comb(k, 2) * TWO_THIRDS + Fraction(3, 2) * Fraction(k, 3) ** 2
    return sum((per * d for d in g.degrees), Fraction(0))


def tensor_build(g: WeightedGraph, k: int) -> tuple[WeightedGraph, TensorLayout]:
    if k < 3 or k % 3:
        raise ValueError(f"k={k} is not a positive multiple of 3; pad with pad_to_k first")
    if not g.is_unit_weight():
        raise ValueError("tensor_build needs a unit-weight graph; expand it with unweight first")
    lay = TensorLayout(k, g.n, g.degrees)
    edges = []
    for u, v, _ in g.edges:
        for j in (1, 2, 3):
            for i in range(1, lay.copies + 1):
                for i2 in range(1, lay.copies + 1):
                    edges.append((lay.vertex(u, i, j), lay.vertex(v, i2, j), Fraction(1)))
    for u in range(g.n):
        if g.degrees[u] == 0:
            continue
        w = TWO_THIRDS * g.degrees[u]
        blk = lay.block(u)
        for a in range(len(blk)):
            for b in range(a + 1, len(blk)):
                edges.append((blk[a], blk[b], w))
    labels = None
    if g.labels is not None:
        labels = tuple(f"({g.label(u)},{i},{j})" for u, i, j in map(lay.triple, range(k * g.n)))
    return WeightedGraph(k * g.n, tuple(edges), labels), lay


def _pi_power(x: int, j: int) -> int:
    for _ in range(j):
        x = x % 3 + 1
    return x


def encode_3_to_k(layout: TensorLayout, chi_g: Coloring) -> Coloring:
    """chi_H(u, i, j) = pi^j(chi_G(u)) + 3(i - 1) with pi(x) = x mod 3 + 1."""
    if len(chi_g) != layout.n_source:
        raise ValueError("source coloring has the wrong size")
    cols = [0] * (layout.k * layout.n_source)
    for vid in range(len(cols)):
        u, i, j = layout.triple(vid)
        cols[vid] = _pi_power(chi_g[u], j) + 3 * (i - 1)
    return Coloring(layout.k, tuple(cols))


@dataclass(frozen=True)
class DecodeCertificate:
    k: int
    sugg: tuple[tuple[frozenset, frozenset, frozenset], ...]  # Sugg^j_u, j = 1..3
    c_within: tuple[int, ...]  # monochromatic pairs inside each block B_u
    c_between: int  # miscolored unit edges between blocks
    between_lower: int  # sum_j sum_uv |Sugg^j_u & Sugg^j_v|
    c_total: Fraction
    expected: Fraction  # exact expectation of the randomized decoder
    chosen_c: int
    miscolored: int

    @property
    def bound(self) -> Fraction:
        return self.c_total / self.k

    def sugg_union(self, u: int) -> frozenset:
        return frozenset().union(*self.sugg[u])


def _sugg(layout: TensorLayout, chi_h: Coloring, u: int):
    per_j = []
    for j in (1, 2, 3):
        per_j.append(frozenset(chi_h[layout.vertex(u, i, j)] for i in range(1, layout.copies + 1)))
    return tuple(per_j)


def _rule_color(sugg_u, c: int) -> int | None:
    for j, s in enumerate(sugg_u, start=1):
        if c in s:
            return j
    return None


def decode_k_to_3(g: WeightedGraph, layout: TensorLayout, chi_h: Coloring) -> tuple[Coloring, DecodeCertificate]:
    """Derandomized block decoding of a k-coloring of H to a 3-coloring of G.

    For every shared color c, vertices whose Sugg set contains c take the
    smallest j with c in Sugg^j_u; the rest are fixed one by one in id order
    by conditional expectations (colour with fewest clashes against already
    fixed neighbours). The best c wins, so the result miscolors at most the
    randomized decoder's expectation, itself at most C_total / k.
    """
    k = layout.k
    if chi_h.k != k or len(chi_h) != k * g.n:
        raise ValueError("chi_h is not a k-coloring of the lifted graph")
    sugg = tuple(_sugg(layout, chi_h, u) for u in range(g.n))

    c_within = []
    for u in range(g.n):
        counts: dict[int, int] = {}
        for vid in layout.block(u):
            counts[chi_h[vid]] = counts.get(chi_h[vid], 0) + 1
        c_within.append(sum(math.comb(n, 2) for n in counts.values()))
    c_between = 0
    between_lower = 0
    for u, v, _ in g.edges:
        for j in (1, 2, 3):
            between_lower += len(sugg[u][j - 1] & sugg[v][j - 1])
            for i in range(1, layout.copies + 1):
                for i2 in range(1, layout.copies + 1):
                    c_between += chi_h[layout.vertex(u, i, j)] == chi_h[layout.vertex(v, i2, j)]
    c_total = sum((TWO_THIRDS * g.degrees[u] * c_within[u] for u in range(g.n)), Fraction(0)) + c_between

    adj: list[list[int]] = [[] for _ in range(g.n)]
    for u, v, _ in g.edges:
        adj[u].append(v)
        adj[v].append(u)

    expected = Fraction(0)
    best = None
    for c in range(1, k + 1):
        fixed = [_rule_color(sugg[u], c) for u in range(g.n)]
        for u, v, _ in g.edges:
            if fixed[u] is not None and fixed[v] is not None:
                expected += Fraction(int(fixed[u] == fixed[v]), k)
            else:
                expected += Fraction(1, 3 * k)
        cols = list(fixed)
        for u in range(g.n):
            if cols[u] is None:
                clash = [0, 0, 0, 0]
                for v in adj[u]:
                    if cols[v] is not None:
                        clash[cols[v]] += 1
                cols[u] = min((1, 2, 3), key=lambda x: (clash[x], x))
        cand = Coloring(3, tuple(cols))
        bad = int(score(g, cand).miscolored_weight)
        if best is None or bad < best[0]:
            best = (bad, c, cand)
    cert = DecodeCertificate(k, sugg, tuple(c_within), c_between, between_lower, c_total, expected, best[1], best[0])
    return best[2], cert


@dataclass(frozen=True)
class PaddingLayout:
    K: int
    L: int
    new_vertices: tuple[int, ...]
    M: Fraction

    @property
    def k(self) -> int:
        return self.K + self.L


def padding_weight_formula(M, K: int, L: int) -> Fraction:
    M = Fraction(M)
    return M + Fraction(2 * L, K) * M + M * (L - 1) / (33 * K)


def pad_to_k(g: WeightedGraph, K: int, k: int) -> tuple[WeightedGraph, PaddingLayout]:
    """Add L = k - K apex vertices so a K-coloring problem becomes a k-coloring one.

    Each apex u_i is joined to every v with weight d_v / K; for L = 2 the two
    apexes share an edge of weight M / (33K). Degrees and M are weighted,
    which coincides with the edge-count version on unit-weight inputs.
    """
    L = k - K
    if K < 3 or K % 3:
        raise ValueError("K must be a positive multiple of 3")
    if L not in (1, 2):
        raise ValueError(f"k - K = {L}; padding adds only 1 or 2 vertices")
    M = g.total_weight
    n = g.n
    new = tuple(range(n, n + L))
    edges = list(g.edges)
    for u in new:
        for v in range(n):
            d = g.weighted_degrees[v]
            if d > 0:
                edges.append((u, v, d / K))
    if L == 2 and M > 0:
        edges.append((new[0], new[1], M / (33 * K)))
    labels = None
    if g.labels is not None:
        labels = g.labels + tuple(f"u{i + 1}" for i in range(L))
    return WeightedGraph(n + L, tuple(edges), labels), PaddingLayout(K, L, new, M)


def unweight(g: WeightedGraph, cap: int = 1_000_000) -> WeightedGraph:
    """Replace each weight-w edge by w * s parallel unit edges, s the lcm of
    the weight denominators. Every coloring keeps its proper fraction."""
    s = g.weight_scale
    mult = g.integer_weights()
    if sum(mult) > cap:
        raise ValueError(f"unweighted graph would have {sum(mult)} edges, cap is {cap}")
    edges = []
    for (u, v, _), r in zip(g.edges, mult):
        edges.extend([(u, v, Fraction(1))] * r)
    return WeightedGraph(g.n, tuple(edges), g.labels)
