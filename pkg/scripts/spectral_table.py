"""Spectral radius of the pair operator against the 4/(q-1) bound.

    python scripts/spectral_table.py --q-min 6 --q-max 16 --out spectral.tsv

Each row also carries a power-iteration estimate on T^2 and numpy's
eigvalsh as independent cross-checks of the Jacobi solver.
"""
from __future__ import annotations

import argparse
import time
from dataclasses import dataclass

import numpy as np

from maxkcolor.spectral import dmr_operator, power_iteration_second, spectral_radius


@dataclass
class Config:
    q_min: int = 6
    q_max: int = 16
    power_iters: int = 5000
    out: str | None = None


def run(cfg: Config) -> list[dict]:
    rows = []
    for q in range(cfg.q_min, cfg.q_max + 1):
        op = dmr_operator(q)
        t = time.perf_counter()
        rho = spectral_radius(op)
        secs = time.perf_counter() - t
        w = np.sort(np.abs(np.linalg.eigvalsh(op.matrix)))
        power = float(np.sqrt(max(power_iteration_second(op, cfg.power_iters), 0.0)))
        rows.append({
            "q": q, "rho": rho, "bound": 4 / (q - 1), "ratio": rho * (q - 1),
            "numpy": float(w[-2]), "power": power, "jacobi_s": secs,
        })
    return rows


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--q-min", type=int, default=Config.q_min)
    p.add_argument("--q-max", type=int, default=Config.q_max)
    p.add_argument("--power-iters", type=int, default=Config.power_iters)
    p.add_argument("--out")
    cfg = Config(**vars(p.parse_args()))
    rows = run(cfg)
    cols = list(rows[0])
    lines = ["\t".join(cols)]
    for r in rows:
        lines.append("\t".join(f"{r[c]:.6g}" if isinstance(r[c], float) else str(r[c]) for c in cols))
    text = "\n".join(lines) + "\n"
    print(text, end="")
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)


if __name__ == "__main__":
    main()
