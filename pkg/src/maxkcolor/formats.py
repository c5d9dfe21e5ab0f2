"""Text and JSON file formats for graphs, colorings, CSPs, layouts and proofs.

Graph text::

    wgraph <n> <edge-count>
    e <u> <v> <num>/<den>

Coloring text: ``k <k>`` then one ``c <v> <color>`` line per vertex.
Weights are exact (fractions or decimals); floats never appear in files.
Blank lines and ``#`` comments are ignored.
"""
from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

import numpy as np

from .csp import Assignment, Constraint, CspInstance
from .graph import Coloring, WeightedGraph
from .pcp import LabelCoverInstance, Labeling, LongCodeProof
from .reduce3 import GadgetLayout
from .reducek import PaddingLayout, TensorLayout


class FormatError(ValueError):
    """Malformed input file."""


def _lines(text: str):
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield no, line.split()


def _int(tok: str, no: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise FormatError(f"line {no}: expected an integer, got {tok!r}") from None


def _weight(tok: str, no: int) -> Fraction:
    if "e" in tok.lower():
        raise FormatError(f"line {no}: weights must be exact, got {tok!r}")
    try:
        return Fraction(tok)
    except (ValueError, ZeroDivisionError):
        raise FormatError(f"line {no}: bad weight {tok!r}") from None


def fraction_str(w: Fraction) -> str:
    w = Fraction(w)
    return f"{w.numerator}/{w.denominator}"


def dump_graph(g: WeightedGraph) -> str:
    out = [f"wgraph {g.n} {g.m}"]
    out += [f"e {u} {v} {fraction_str(w)}" for u, v, w in g.edges]
    return "\n".join(out) + "\n"


def load_graph(text: str) -> WeightedGraph:
    lines = list(_lines(text))
    if not lines or lines[0][1][0] != "wgraph" or len(lines[0][1]) != 3:
        raise FormatError("graph file must start with 'wgraph <n> <edge-count>'")
    no, head = lines[0]
    n, m = _int(head[1], no), _int(head[2], no)
    edges = []
    for no, tok in lines[1:]:
        if tok[0] != "e" or len(tok) != 4:
            raise FormatError(f"line {no}: expected 'e <u> <v> <weight>'")
        edges.append((_int(tok[1], no), _int(tok[2], no), _weight(tok[3], no)))
    if len(edges) != m:
        raise FormatError(f"header announces {m} edges, found {len(edges)}")
    try:
        return WeightedGraph(n, tuple(edges))
    except ValueError as exc:
        raise FormatError(str(exc)) from None


def dump_coloring(c: Coloring) -> str:
    return "\n".join([f"k {c.k}"] + [f"c {v} {col}" for v, col in enumerate(c.colors)]) + "\n"


def load_coloring(text: str) -> Coloring:
    lines = list(_lines(text))
    if not lines or lines[0][1][0] != "k" or len(lines[0][1]) != 2:
        raise FormatError("coloring file must start with 'k <k>'")
    k = _int(lines[0][1][1], lines[0][0])
    cols: dict[int, int] = {}
    for no, tok in lines[1:]:
        if tok[0] != "c" or len(tok) != 3:
            raise FormatError(f"line {no}: expected 'c <v> <color>'")
        v = _int(tok[1], no)
        if v in cols:
            raise FormatError(f"line {no}: vertex {v} colored twice")
        cols[v] = _int(tok[2], no)
    if sorted(cols) != list(range(len(cols))):
        raise FormatError("coloring must list every vertex 0..n-1 exactly once")
    try:
        return Coloring(k, tuple(cols[v] for v in range(len(cols))))
    except ValueError as exc:
        raise FormatError(str(exc)) from None


def _parse_json(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON: {exc}") from None


def _field(obj, key):
    if not isinstance(obj, dict) or key not in obj:
        raise FormatError(f"missing field {key!r}")
    return obj[key]


def csp_to_json(inst: CspInstance) -> dict:
    return {
        "nx": inst.nx, "ny": inst.ny, "nz": inst.nz,
        "constraints": [
            {"x": c.x, "y": c.y, "yneg": c.y_negated, "zk": c.zk, "zl": c.zl} for c in inst.constraints
        ],
    }


def csp_from_json(obj) -> CspInstance:
    try:
        cons = tuple(
            Constraint(int(_field(c, "x")), int(_field(c, "y")), bool(_field(c, "yneg")),
                       int(_field(c, "zk")), int(_field(c, "zl")))
            for c in _field(obj, "constraints")
        )
        return CspInstance(int(_field(obj, "nx")), int(_field(obj, "ny")), int(_field(obj, "nz")), cons)
    except (TypeError, ValueError) as exc:
        raise FormatError(f"bad CSP instance: {exc}") from None


def assignment_to_json(a: Assignment) -> dict:
    return {"x": list(a.x), "y": list(a.y), "z": list(a.z)}


def assignment_from_json(obj) -> Assignment:
    try:
        return Assignment(*(tuple(int(b) for b in _field(obj, key)) for key in ("x", "y", "z")))
    except (TypeError, ValueError) as exc:
        raise FormatError(f"bad assignment: {exc}") from None


def gadget_layout_to_json(lay: GadgetLayout, sources=None) -> dict:
    out = {
        "kind": "gadget",
        "R": lay.R, "T": lay.T, "F": lay.F,
        "x_nodes": list(lay.x_nodes), "y_nodes": list(lay.y_nodes),
        "ybar_nodes": list(lay.ybar_nodes), "z_nodes": list(lay.z_nodes),
        "gadgets": [list(gd) for gd in lay.gadgets],
        "delta": list(lay.delta),
    }
    if sources is not None:
        out["sources"] = list(sources)
    return out


def gadget_layout_from_json(obj) -> GadgetLayout:
    try:
        return GadgetLayout(
            int(_field(obj, "R")), int(_field(obj, "T")), int(_field(obj, "F")),
            *(tuple(int(v) for v in _field(obj, key)) for key in ("x_nodes", "y_nodes", "ybar_nodes", "z_nodes")),
            tuple(tuple(int(v) for v in gd) for gd in _field(obj, "gadgets")),
            tuple(int(d) for d in _field(obj, "delta")),
        )
    except (TypeError, ValueError) as exc:
        raise FormatError(f"bad gadget layout: {exc}") from None


def tensor_layout_to_json(lay: TensorLayout) -> dict:
    blocks = [[lay.vertex(u, i, j) for i in range(1, lay.copies + 1) for j in (1, 2, 3)]
              for u in range(lay.n_source)]
    return {"kind": "tensor", "k": lay.k, "n_source": lay.n_source, "degrees": list(lay.degrees), "blocks": blocks}


def tensor_layout_from_json(obj) -> TensorLayout:
    try:
        return TensorLayout(int(_field(obj, "k")), int(_field(obj, "n_source")),
                            tuple(int(d) for d in _field(obj, "degrees")))
    except (TypeError, ValueError) as exc:
        raise FormatError(f"bad tensor layout: {exc}") from None


def padding_layout_to_json(lay: PaddingLayout) -> dict:
    return {"kind": "padding", "K": lay.K, "L": lay.L, "k": lay.k,
            "new_vertices": list(lay.new_vertices), "M": fraction_str(lay.M)}


def label_cover_to_json(inst: LabelCoverInstance, lab: Labeling | None = None) -> dict:
    out = {
        "n_u": inst.n_u, "n_v": inst.n_v, "R": inst.R,
        "edges": [{"u": u, "v": v, "proj": list(p)} for u, v, p in inst.edges],
    }
    if lab is not None:
        out["labeling"] = {"u": list(lab.u_labels), "v": list(lab.v_labels)}
    return out


def label_cover_from_json(obj) -> tuple[LabelCoverInstance, Labeling | None]:
    try:
        edges = tuple((int(_field(e, "u")), int(_field(e, "v")), tuple(int(p) for p in _field(e, "proj")))
                      for e in _field(obj, "edges"))
        inst = LabelCoverInstance(int(_field(obj, "n_u")), int(_field(obj, "n_v")), int(_field(obj, "R")), edges)
        lab = None
        if "labeling" in obj:
            lo = obj["labeling"]
            lab = Labeling(tuple(int(a) for a in _field(lo, "u")), tuple(int(a) for a in _field(lo, "v")))
        return inst, lab
    except (TypeError, ValueError) as exc:
        raise FormatError(f"bad label cover instance: {exc}") from None


def proof_to_json(proof: LongCodeProof) -> dict:
    """Tables are flattened in C order over [k]^{2R}."""
    return {"k": proof.k, "tables": [t.reshape(-1).tolist() for t in proof.tables]}


def proof_from_json(obj, R: int) -> LongCodeProof:
    try:
        k = int(_field(obj, "k"))
        tabs = []
        for flat in _field(obj, "tables"):
            arr = np.asarray(flat, dtype=np.int64)
            if arr.size != k ** (2 * R):
                raise ValueError(f"table has {arr.size} entries, expected {k ** (2 * R)}")
            tabs.append(arr.reshape((k,) * (2 * R)))
        return LongCodeProof(k, tuple(tabs))
    except (TypeError, ValueError) as exc:
        raise FormatError(f"bad proof: {exc}") from None


def read_json(path) -> object:
    return _parse_json(Path(path).read_text())


def write_json(path, obj) -> None:
    Path(path).write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")
