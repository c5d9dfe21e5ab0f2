"""Measured gap between CSP satisfiability and 3-colorability of the reduction.

For small random and planted instances, compares the exact CSP optimum with
the exact minimum miscolored weight tau* of the reduction graph. Encoding an
optimal assignment gives tau* <= m - OPT; decoding gives OPT >= m - tau*
whenever tau* < m/2, so the two coincide in that regime. The best proper
fraction 1 - tau*/(33m/2) is reported next to 32/33.

    python scripts/soundness_gaps.py --instances 20 --m-max 6
"""
from __future__ import annotations

import argparse
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from maxkcolor.csp import exact_max_sat, generate_planted, generate_random
from maxkcolor.graph import BudgetExceeded, exact_best_coloring
from maxkcolor.reduce3 import MalformedColoring, build_3color_instance, decode_coloring


@dataclass
class Config:
    seed: int = 0
    instances: int = 20
    m_min: int = 2
    m_max: int = 6
    pool: int = 2
    budget: int = 5_000_000


def measure(inst, budget: int) -> dict | None:
    out = build_3color_instance(inst)
    try:
        best, rep = exact_best_coloring(out.graph, 3, budget=budget)
    except BudgetExceeded:
        return None
    _, opt = exact_max_sat(inst)
    tau = rep.miscolored_weight
    try:
        decoded = decode_coloring(inst, out.layout, best, out.graph).satisfied
    except MalformedColoring:
        decoded = None
    return {
        "m": inst.m, "opt": opt, "tau": tau, "decoded": decoded,
        "opt_frac": Fraction(opt, inst.m), "color_frac": 1 - tau / Fraction(33 * inst.m, 2),
        "identity": tau == inst.m - opt,
    }


def run(cfg: Config) -> list[dict]:
    rng = np.random.default_rng(cfg.seed)
    rows = []
    for i in range(cfg.instances):
        m = int(rng.integers(cfg.m_min, cfg.m_max + 1))
        seed = int(rng.integers(2**31))
        if i % 2:
            inst, _ = generate_planted(seed, cfg.pool, cfg.pool, cfg.pool, m)
            kind = "planted"
        else:
            inst = generate_random(seed, cfg.pool, cfg.pool, cfg.pool, m)
            kind = "random"
        row = measure(inst, cfg.budget)
        if row is not None:
            rows.append({"kind": kind, **row})
    return rows


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    for name, val in vars(Config()).items():
        p.add_argument(f"--{name.replace('_', '-')}", type=type(val), default=val)
    cfg = Config(**vars(p.parse_args()))
    rows = run(cfg)
    cols = ["kind", "m", "opt", "tau", "decoded", "opt_frac", "color_frac", "identity"]
    print("\t".join(cols))
    for r in rows:
        print("\t".join(f"{float(r[c]):.4f}" if isinstance(r[c], Fraction) and c.endswith("frac") else str(r[c])
                        for c in cols))
    worst = min((r["color_frac"] for r in rows if r["opt"] < r["m"]), default=None)
    print(f"# 32/33 = {32 / 33:.4f}; lowest best-coloring fraction on unsatisfiable instances: "
          f"{float(worst):.4f}" if worst is not None else "# every sampled instance was satisfiable")
    bad = [r for r in rows if 2 * r["tau"] < r["m"] and not r["identity"]]
    print(f"# instances with tau* < m/2 violating tau* = m - OPT: {len(bad)}")


if __name__ == "__main__":
    main()
