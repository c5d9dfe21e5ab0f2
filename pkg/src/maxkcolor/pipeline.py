"""End-to-end verification pipeline: generate -> reduce -> solve -> decode.

Every bound is recorded as a :class:`Check` holding both sides of its
inequality, so a report can be audited without rerunning anything.
"""
from __future__ import annotations

import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import numpy as np

from .csp import exact_max_sat, generate_planted, generate_random
from .graph import Coloring, WeightedGraph, is_k_colorable, local_search, score
from .pcp import LongCodeProof, acceptance_probability, gen_label_cover
from .reduce3 import build_3color_instance, decode_coloring, encode_assignment, local_gadget_profile
from .reducek import (decode_k_to_3, encode_3_to_k, pad_to_k, padding_weight_formula, tensor_build,
                      tensor_weight_formula)
from .spectral.operators import dmr_operator, spectral_radius

SCHEMA_VERSION = "maxkcolor.pipeline/1"

_OPS = {
    "==": lambda a, b: a == b,
    "<=": lambda a, b: a <= b,
    ">=": lambda a, b: a >= b,
}


def _num(x):
    """JSON-friendly exact value: ints and floats pass, Fractions become 'p/q' strings."""
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else x.numerator
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        return float(x)
    return x


@dataclass
class Check:
    name: str
    lhs: object
    relation: str
    rhs: object
    passed: bool

    @classmethod
    def of(cls, name: str, lhs, relation: str, rhs) -> "Check":
        return cls(name, _num(lhs), relation, _num(rhs), bool(_OPS[relation](lhs, rhs)))


@dataclass
class StageRecord:
    stage: str
    params: dict
    checks: list[Check] = field(default_factory=list)
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


@dataclass
class VerifyConfig:
    seed: int = 0
    instances: int = 5  # planted and random CSP instances each
    nx: int = 3
    ny: int = 3
    nz: int = 3
    m: int = 8
    k: int = 6  # tensor-chain target, a multiple of 3
    tensor_samples: int = 20
    spectral_q: tuple[int, ...] = (6, 7, 8, 9, 10)
    pcp_instances: int = 2


@dataclass
class PipelineReport:
    config: VerifyConfig
    stages: list[StageRecord]
    seconds: float
    schema: str = SCHEMA_VERSION

    @property
    def passed(self) -> bool:
        return all(s.passed for s in self.stages)

    def failures(self) -> list[tuple[str, Check]]:
        return [(s.stage, c) for s in self.stages for c in s.checks if not c.passed]

    def to_json(self) -> dict:
        cfg = asdict(self.config)
        cfg["spectral_q"] = list(cfg["spectral_q"])
        return {
            "schema": self.schema,
            "seed": self.config.seed,
            "config": cfg,
            "passed": self.passed,
            "seconds": round(self.seconds, 3),
            "stages": [
                {"stage": s.stage, "params": s.params, "passed": s.passed, "seconds": round(s.seconds, 3),
                 "checks": [asdict(c) for c in s.checks]}
                for s in self.stages
            ],
        }

    def to_tsv(self) -> str:
        rows = ["stage\tcheck\tlhs\trelation\trhs\tpassed"]
        for s in self.stages:
            for c in s.checks:
                rows.append(f"{s.stage}\t{c.name}\t{c.lhs}\t{c.relation}\t{c.rhs}\t{int(c.passed)}")
        return "\n".join(rows) + "\n"


def _noisy(c: Coloring, rng: np.random.Generator, flips: int) -> Coloring:
    cols = list(c.colors)
    for v in rng.choice(len(cols), size=min(flips, len(cols)), replace=False):
        cols[v] = int(rng.integers(1, c.k + 1))
    return Coloring(c.k, tuple(cols))


def stage_gadget() -> StageRecord:
    rec = StageRecord("gadget", {})
    for p in local_gadget_profile():
        tag = f"x={p.x},Y={p.Y},zk={p.zk},zl={p.zl}"
        rec.checks.append(Check.of(f"proper extension iff satisfied [{tag}]",
                                   p.proper_extensions > 0, "==", p.satisfied))
        if not p.satisfied:
            rec.checks.append(Check.of(f"min miscolored edges [{tag}]", p.min_miscolored, "==", 1))
    return rec


def stage_reduce3(cfg: VerifyConfig, rng: np.random.Generator) -> StageRecord:
    rec = StageRecord("reduce3", {"instances": cfg.instances, "m": cfg.m,
                                  "pools": [cfg.nx, cfg.ny, cfg.nz]})
    for i in range(cfg.instances):
        inst, a = generate_planted(int(rng.integers(2**31)), cfg.nx, cfg.ny, cfg.nz, cfg.m)
        out = build_3color_instance(inst)
        rec.checks.append(Check.of(f"planted[{i}] total weight", out.graph.total_weight, "==",
                                   Fraction(33 * inst.m, 2)))
        c = encode_assignment(inst, out.layout, a)
        rec.checks.append(Check.of(f"planted[{i}] encoded miscolored", score(out.graph, c).miscolored_weight,
                                   "==", 0))
        d = decode_coloring(inst, out.layout, c, out.graph)
        rec.checks.append(Check.of(f"planted[{i}] decoded satisfied", d.satisfied, "==", inst.m))
    for i in range(cfg.instances):
        inst = generate_random(int(rng.integers(2**31)), cfg.nx, cfg.ny, cfg.nz, cfg.m)
        out = build_3color_instance(inst)
        best_a, opt = exact_max_sat(inst)
        start = _noisy(encode_assignment(inst, out.layout, best_a), rng, 3)
        c = local_search(out.graph, 3, start, seed=int(rng.integers(2**31)))
        cols = {out.layout.T, out.layout.F, out.layout.R}
        if len({c[v] for v in cols}) < 3:
            continue  # a collapsed global triangle already costs >= m/2; nothing is promised
        d = decode_coloring(inst, out.layout, c, out.graph)
        rec.checks.append(Check.of(f"random[{i}] repair keeps cost",
                                   score(out.graph, d.repaired).miscolored_weight, "<=", d.tau))
        if d.guaranteed:
            rec.checks.append(Check.of(f"random[{i}] satisfied vs m - tau", d.satisfied, ">=", inst.m - d.tau))
        rec.checks.append(Check.of(f"random[{i}] satisfied vs optimum", d.satisfied, "<=", opt))
    return rec


def stage_tensor(cfg: VerifyConfig, rng: np.random.Generator) -> StageRecord:
    k = cfg.k
    rec = StageRecord("tensor", {"k": k, "source": "triangle", "samples": cfg.tensor_samples})
    g = WeightedGraph.from_pairs(3, [(0, 1), (1, 2), (0, 2)])
    H, lay = tensor_build(g, k)
    rec.checks.append(Check.of("lifted vertices", H.n, "==", 3 * k))
    rec.checks.append(Check.of("lifted total weight", H.total_weight, "==", tensor_weight_formula(g, k)))
    rec.checks.append(Check.of("lifted weight vs k^2 m", H.total_weight, "<=", k * k * g.m))
    chi = encode_3_to_k(lay, Coloring(3, (1, 2, 3)))
    rec.checks.append(Check.of("encoded miscolored", score(H, chi).miscolored_weight, "==", 0))
    for i in range(cfg.tensor_samples):
        chi_h = Coloring(k, tuple(int(c) for c in rng.integers(1, k + 1, size=H.n)))
        _, cert = decode_k_to_3(g, lay, chi_h)
        rec.checks.append(Check.of(f"sample[{i}] decoded vs expectation", cert.miscolored, "<=", cert.expected))
        rec.checks.append(Check.of(f"sample[{i}] expectation vs C_total/k", cert.expected, "<=", cert.bound))
    return rec


def stage_padding() -> StageRecord:
    rec = StageRecord("padding", {"K": 3, "k": [4, 5]})
    sources = {
        "triangle": WeightedGraph.from_pairs(3, [(0, 1), (1, 2), (0, 2)]),
        "c5": WeightedGraph.from_pairs(5, [(i, (i + 1) % 5) for i in range(5)]),
    }
    for name, g in sources.items():
        for k in (4, 5):
            P, lay = pad_to_k(g, 3, k)
            rec.checks.append(Check.of(f"{name} k={k} total weight", P.total_weight, "==",
                                       padding_weight_formula(g.total_weight, 3, k - 3)))
            rec.checks.append(Check.of(f"{name} k={k} colorable", is_k_colorable(P, k), "==", True))
    return rec


def stage_spectral(cfg: VerifyConfig) -> StageRecord:
    rec = StageRecord("spectral", {"q": list(cfg.spectral_q)})
    for q in cfg.spectral_q:
        rec.checks.append(Check.of(f"q={q} spectral radius", spectral_radius(dmr_operator(q)), "<=",
                                   4 / (q - 1) + 1e-9))
    return rec


def stage_pcp(cfg: VerifyConfig, rng: np.random.Generator) -> StageRecord:
    rec = StageRecord("pcp", {"instances": cfg.pcp_instances, "R": 1, "k": [4, 6]})
    for i in range(cfg.pcp_instances):
        for k in (4, 6):
            inst, lab = gen_label_cover(int(rng.integers(2**31)), 2, 3, 2, 1)
            proof = LongCodeProof.from_labeling(inst, lab, k)
            acc = acceptance_probability(inst, proof, k)
            rec.checks.append(Check.of(f"planted[{i}] k={k} acceptance", acc, "==", 1))
    return rec


def run_verify(cfg: VerifyConfig | None = None) -> PipelineReport:
    cfg = cfg or VerifyConfig()
    if cfg.k < 3 or cfg.k % 3:
        raise ValueError(f"k={cfg.k} is not a multiple of 3")
    rng = np.random.default_rng(cfg.seed)
    t0 = time.perf_counter()
    stages = []
    for build in (stage_gadget, lambda: stage_reduce3(cfg, rng), lambda: stage_tensor(cfg, rng),
                  stage_padding, lambda: stage_spectral(cfg), lambda: stage_pcp(cfg, rng)):
        t = time.perf_counter()
        rec = build()
        rec.seconds = time.perf_counter() - t
        stages.append(rec)
    return PipelineReport(cfg, stages, time.perf_counter() - t0)
