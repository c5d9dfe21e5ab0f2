"""Exact verifier acceptance on honest and adversarial proofs.

Proof families: the long code of a planted labeling, long codes of random
labelings, uniformly random tables, constant tables, and the "avoid" table
that colors x by the smallest value not among the first block's coordinates.
No soundness constant is asserted; the numbers are the experiment.

    python scripts/pcp_adversarial.py --k 4 --R 2 --instances 5
"""
from __future__ import annotations

import argparse
from dataclasses import dataclass

import numpy as np

from maxkcolor.pcp import (Labeling, LongCodeProof, acceptance_probability, gen_label_cover, influence_decode,
                           labeling_value, long_code_encode)


@dataclass
class Config:
    seed: int = 0
    instances: int = 5
    k: int = 4
    R: int = 2  # with R = 1 every labeling satisfies every edge
    n_u: int = 3
    n_v: int = 4
    degree: int = 2
    satisfiable: int = 0


def avoid_table(k: int, R: int) -> np.ndarray:
    """Color x by the smallest symbol outside {x_0, x_1}, shifted to 1-based colors."""
    tab = np.empty((k,) * (2 * R), dtype=np.int64)
    for x in np.ndindex(*tab.shape):
        tab[x] = next(c for c in range(k) if c not in (x[0], x[1])) + 1
    return tab


def proofs(inst, lab, cfg: Config, rng):
    if lab is not None:
        yield "planted-long-code", LongCodeProof.from_labeling(inst, lab, cfg.k)
    rand_lab = Labeling(tuple(int(a) for a in rng.integers(inst.R, size=inst.n_u)),
                        tuple(int(a) for a in rng.integers(2 * inst.R, size=inst.n_v)))
    yield "random-long-code", LongCodeProof.from_labeling(inst, rand_lab, cfg.k)
    yield "random-table", LongCodeProof.random(inst, cfg.k, int(rng.integers(2**31)))
    yield "constant", LongCodeProof.constant(inst, cfg.k)
    yield "avoid", LongCodeProof(cfg.k, tuple(avoid_table(cfg.k, inst.R) for _ in range(inst.n_v)))
    yield "dictator-0", LongCodeProof(cfg.k, tuple(long_code_encode(0, 2 * inst.R, cfg.k) for _ in range(inst.n_v)))


def run(cfg: Config) -> list[dict]:
    rng = np.random.default_rng(cfg.seed)
    rows = []
    for i in range(cfg.instances):
        inst, lab = gen_label_cover(int(rng.integers(2**31)), cfg.n_u, cfg.n_v, cfg.degree, cfg.R,
                                    satisfiable=bool(cfg.satisfiable))
        for name, proof in proofs(inst, lab, cfg, rng):
            acc = acceptance_probability(inst, proof, cfg.k)
            dec = influence_decode(inst, proof, cfg.k)
            rows.append({"instance": i, "proof": name, "acceptance": float(acc), "exact": str(acc),
                         "decoded_value": float(dec.value),
                         "planted_value": float(labeling_value(inst, lab)) if lab else float("nan")})
    return rows


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    for name, val in vars(Config()).items():
        p.add_argument(f"--{name.replace('_', '-')}", type=type(val), default=val)
    cfg = Config(**vars(p.parse_args()))
    rows = run(cfg)
    cols = list(rows[0])
    print("\t".join(cols))
    for r in rows:
        print("\t".join(f"{r[c]:.5f}" if isinstance(r[c], float) else str(r[c]) for c in cols))
    by_kind: dict[str, list[float]] = {}
    for r in rows:
        by_kind.setdefault(r["proof"], []).append(r["acceptance"])
    for kind, vals in by_kind.items():
        print(f"# {kind}: mean acceptance {np.mean(vals):.4f}, max {max(vals):.4f}")


if __name__ == "__main__":
    main()
