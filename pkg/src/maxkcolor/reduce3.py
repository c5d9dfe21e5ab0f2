"""CSP -> weighted Max 3-Colorable Subgraph reduction.

Node layout: global nodes R, T, F; one node per x and z variable; a pair
(y_j, ~y_j) per y variable; and four local nodes A, A', B, B' per constraint.
Every constraint contributes ten unit edges::

    A-T  A-x  A-B  B-Y  B-zk        (first clause:  x or Y = zk)
    A'-F A'-x A'-B' B'-Y B'-zl      (second clause: not x or Y = zl)

where Y is the node of the constraint's y literal. The global R-T-F triangle
carries weight m/2 per edge, each (y_j, ~y_j, R) triangle weight
w_j = (D(y_j) + D(~y_j))/2, and x / z nodes hang off R with weight D/2, where
D counts gadget edges incident to a node. Total weight is 33m/2.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .csp import Assignment, Constraint, CspInstance, count_satisfied, eval_constraint
from .graph import Coloring, WeightedGraph, score

# colors used by the encoder for the three global nodes
T_COLOR, F_COLOR, R_COLOR = 1, 2, 3


class MalformedColoring(ValueError):
    """The coloring does not give R, T and F three different colors."""


@dataclass(frozen=True)
class GadgetLayout:
    R: int
    T: int
    F: int
    x_nodes: tuple[int, ...]
    y_nodes: tuple[int, ...]
    ybar_nodes: tuple[int, ...]
    z_nodes: tuple[int, ...]
    gadgets: tuple[tuple[int, int, int, int], ...]  # (A, A', B, B') per constraint
    delta: tuple[int, ...]  # gadget degree of every node id

    @property
    def n(self) -> int:
        return len(self.delta)

    def literal_node(self, c: Constraint) -> int:
        return self.ybar_nodes[c.y] if c.y_negated else self.y_nodes[c.y]

    def w(self, j: int) -> Fraction:
        return Fraction(self.delta[self.y_nodes[j]] + self.delta[self.ybar_nodes[j]], 2)


@dataclass(frozen=True)
class Reduction3Output:
    graph: WeightedGraph
    layout: GadgetLayout
    m: int
    sources: tuple[str, ...]  # provenance tag for each edge of graph


def gadget_edges(layout: GadgetLayout, c: Constraint, idx: int) -> list[tuple[int, int]]:
    A, A2, B, B2 = layout.gadgets[idx]
    x = layout.x_nodes[c.x]
    Y = layout.literal_node(c)
    zk, zl = layout.z_nodes[c.zk], layout.z_nodes[c.zl]
    return [
        (A, layout.T), (A, x), (A, B), (B, Y), (B, zk),
        (A2, layout.F), (A2, x), (A2, B2), (B2, Y), (B2, zl),
    ]


def _layout(inst: CspInstance) -> GadgetLayout:
    nid = 3
    x_nodes = tuple(range(nid, nid + inst.nx))
    nid += inst.nx
    y_nodes = tuple(nid + 2 * j for j in range(inst.ny))
    ybar_nodes = tuple(nid + 2 * j + 1 for j in range(inst.ny))
    nid += 2 * inst.ny
    z_nodes = tuple(range(nid, nid + inst.nz))
    nid += inst.nz
    gadgets = tuple(tuple(range(nid + 4 * i, nid + 4 * i + 4)) for i in range(inst.m))
    n = nid + 4 * inst.m
    delta = [0] * n
    for c in inst.constraints:
        delta[x_nodes[c.x]] += 2
        Y = ybar_nodes[c.y] if c.y_negated else y_nodes[c.y]
        delta[Y] += 2
        delta[z_nodes[c.zk]] += 1
        delta[z_nodes[c.zl]] += 1
    return GadgetLayout(0, 1, 2, x_nodes, y_nodes, ybar_nodes, z_nodes, gadgets, tuple(delta))


def _labels(inst: CspInstance, layout: GadgetLayout) -> tuple[str, ...]:
    labels = [""] * layout.n
    labels[layout.R], labels[layout.T], labels[layout.F] = "R", "T", "F"
    for i, v in enumerate(layout.x_nodes):
        labels[v] = f"x{i + 1}"
    for j in range(inst.ny):
        labels[layout.y_nodes[j]] = f"y{j + 1}"
        labels[layout.ybar_nodes[j]] = f"~y{j + 1}"
    for i, v in enumerate(layout.z_nodes):
        labels[v] = f"z{i + 1}"
    for i, ids in enumerate(layout.gadgets):
        for name, v in zip(("A", "A'", "B", "B'"), ids):
            labels[v] = f"{name}{i + 1}"
    return tuple(labels)


def build_3color_instance(inst: CspInstance) -> Reduction3Output:
    layout = _layout(inst)
    m = inst.m
    edges: list[tuple[int, int, Fraction]] = []
    sources: list[str] = []

    def add(u, v, w, src):
        if w > 0:
            edges.append((u, v, Fraction(w)))
            sources.append(src)

    half_m = Fraction(m, 2)
    for u, v in ((layout.R, layout.T), (layout.T, layout.F), (layout.F, layout.R)):
        add(u, v, half_m, "global")
    for j in range(inst.ny):
        y, yb, w = layout.y_nodes[j], layout.ybar_nodes[j], layout.w(j)
        for u, v in ((y, yb), (yb, layout.R), (layout.R, y)):
            add(u, v, w, f"literal:{j}")
    for i, v in enumerate(layout.x_nodes):
        add(v, layout.R, Fraction(layout.delta[v], 2), f"spoke:x{i}")
    for i, v in enumerate(layout.z_nodes):
        add(v, layout.R, Fraction(layout.delta[v], 2), f"spoke:z{i}")
    for idx, c in enumerate(inst.constraints):
        for u, v in gadget_edges(layout, c, idx):
            add(u, v, 1, f"gadget:{idx}")
    g = WeightedGraph(layout.n, tuple(edges), _labels(inst, layout))
    return Reduction3Output(g, layout, m, tuple(sources))


def _pick_pair(sa: list[int], sb: list[int]) -> tuple[int, int] | None:
    for a, b in itertools.product(sa, sb):
        if a != b:
            return a, b
    return None


def encode_assignment(inst: CspInstance, layout: GadgetLayout, a: Assignment) -> Coloring:
    """3-coloring whose miscolored weight is at most m minus the number of
    constraints ``a`` satisfies, every miscolored edge a unit gadget edge."""
    if not a.fits(inst):
        raise ValueError("assignment does not match the instance")
    col = [0] * layout.n
    col[layout.T], col[layout.F], col[layout.R] = T_COLOR, F_COLOR, R_COLOR

    def truth(b):
        return T_COLOR if b else F_COLOR

    for i, v in enumerate(layout.x_nodes):
        col[v] = truth(a.x[i])
    for j in range(inst.ny):
        col[layout.y_nodes[j]] = truth(a.y[j])
        col[layout.ybar_nodes[j]] = truth(1 - a.y[j])
    for i, v in enumerate(layout.z_nodes):
        col[v] = truth(a.z[i])

    for idx, c in enumerate(inst.constraints):
        A, A2, B, B2 = layout.gadgets[idx]
        x = layout.x_nodes[c.x]
        Y = layout.literal_node(c)
        zk, zl = layout.z_nodes[c.zk], layout.z_nodes[c.zl]
        for anchor, left, right, z in ((layout.T, A, B, zk), (layout.F, A2, B2, zl)):
            sugg_a = [k for k in (1, 2, 3) if k not in (col[x], col[anchor])]
            sugg_b = [k for k in (1, 2, 3) if k not in (col[Y], col[z])]
            pair = _pick_pair(sugg_a, sugg_b)
            if pair is None:
                # violated half: let the anchor node copy x, costing the A-x edge
                pair = _pick_pair(sugg_a + [col[x]], sugg_b)
            col[left], col[right] = pair
    return Coloring(3, tuple(col))


@dataclass(frozen=True)
class DecodeResult:
    assignment: Assignment
    repaired: Coloring
    tau: Fraction  # miscolored weight of the input coloring
    guaranteed: bool  # tau < m/2, so satisfied >= m - tau is promised
    satisfied: int


def _incident(g: WeightedGraph) -> list[list[tuple[int, Fraction]]]:
    adj: list[list[tuple[int, Fraction]]] = [[] for _ in range(g.n)]
    for u, v, w in g.edges:
        adj[u].append((v, w))
        adj[v].append((u, w))
    return adj


def _local_cost(adj, col, nodes: dict[int, int]) -> Fraction:
    """Miscolored weight on edges touching ``nodes`` if they take the given colors."""
    total = Fraction(0)
    for v, cv in nodes.items():
        for u, w in adj[v]:
            if u in nodes and u < v:
                continue  # counted from u's side
            if nodes.get(u, col[u]) == cv:
                total += w
    return total


def decode_coloring(inst: CspInstance, layout: GadgetLayout, c: Coloring,
                    graph: WeightedGraph | None = None) -> DecodeResult:
    """Assignment satisfying at least m - tau constraints when tau < m/2.

    Variable nodes that sit on R's color, and literal pairs that are not
    colored {T, F}, are recolored; each repair tries both admissible options
    and keeps the one with smaller miscolored weight, which never increases
    the total. Variables are then read off by color: T -> 1, F -> 0.
    """
    g = graph if graph is not None else build_3color_instance(inst).graph
    if c.k != 3 or len(c) != layout.n:
        raise ValueError("decode expects a 3-coloring of the reduction graph")
    cT, cF, cR = c[layout.T], c[layout.F], c[layout.R]
    if len({cT, cF, cR}) < 3:
        raise MalformedColoring("R, T and F share a color; the R-T-F triangle alone miscolors weight >= m/2")
    tau = score(g, c).miscolored_weight
    adj = _incident(g)
    col = list(c.colors)

    for v in layout.x_nodes + layout.z_nodes:
        if col[v] == cR:
            opts = [cT, cF]
            costs = [_local_cost(adj, col, {v: o}) for o in opts]
            col[v] = opts[0] if costs[0] <= costs[1] else opts[1]
    for y, yb in zip(layout.y_nodes, layout.ybar_nodes):
        if cR in (col[y], col[yb]) or col[y] == col[yb]:
            opts = [(cT, cF), (cF, cT)]
            costs = [_local_cost(adj, col, {y: o[0], yb: o[1]}) for o in opts]
            col[y], col[yb] = opts[0] if costs[0] <= costs[1] else opts[1]

    def bit(v):
        return 1 if col[v] == cT else 0

    a = Assignment(
        tuple(bit(v) for v in layout.x_nodes),
        tuple(bit(v) for v in layout.y_nodes),
        tuple(bit(v) for v in layout.z_nodes),
    )
    repaired = Coloring(3, tuple(col))
    return DecodeResult(a, repaired, tau, tau < Fraction(inst.m, 2), count_satisfied(inst, a))


@dataclass(frozen=True)
class GadgetProfile:
    x: int
    Y: int
    zk: int
    zl: int
    satisfied: bool
    min_miscolored: int
    proper_extensions: int
    one_edge_extensions: int


def local_gadget_profile() -> list[GadgetProfile]:
    """Exhaust the 3^4 colorings of (A, A', B, B') for all 16 truth settings.

    Uses the gadget of a single built constraint (x1, y1, z1, z2) with R, T, F
    fixed to distinct colors and variable nodes colored by truth value; only
    the ten gadget edges are scored.
    """
    inst = CspInstance(1, 1, 2, (Constraint(0, 0, False, 0, 1),))
    out = build_3color_instance(inst)
    lay = out.layout
    gadget = [(u, v) for (u, v, _), s in zip(out.graph.edges, out.sources) if s == "gadget:0"]
    assert len(gadget) == 10
    A, A2, B, B2 = lay.gadgets[0]
    profiles = []
    for x, Y, zk, zl in itertools.product((0, 1), repeat=4):
        a = Assignment((x,), (Y,), (zk, zl))
        base = {lay.T: T_COLOR, lay.F: F_COLOR, lay.R: R_COLOR,
                lay.x_nodes[0]: T_COLOR if x else F_COLOR,
                lay.y_nodes[0]: T_COLOR if Y else F_COLOR,
                lay.z_nodes[0]: T_COLOR if zk else F_COLOR,
                lay.z_nodes[1]: T_COLOR if zl else F_COLOR}
        counts = []
        for cols in itertools.product((1, 2, 3), repeat=4):
            col = dict(base)
            col.update(zip((A, A2, B, B2), cols))
            counts.append(sum(col[u] == col[v] for u, v in gadget))
        profiles.append(GadgetProfile(
            x, Y, zk, zl, eval_constraint(inst.constraints[0], a),
            min(counts), counts.count(0), counts.count(1),
        ))
    return profiles
