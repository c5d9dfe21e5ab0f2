"""maxkcolor command line.

Exit codes: 0 ok, 1 input error, 2 budget refusal, 3 lemma-check failure.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import formats
from .csp import count_satisfied, exact_max_sat, generate_planted, generate_random
from .graph import BudgetExceeded, Coloring, score
from .pcp import (LongCodeProof, acceptance_probability, gen_label_cover, influence_decode,
                  monte_carlo_acceptance)
from .pipeline import SCHEMA_VERSION, VerifyConfig, _num, run_verify
from .reduce3 import build_3color_instance
from .reducek import pad_to_k, tensor_build, unweight
from .spectral.operators import dmr_operator, power_iteration_second, spectral_radius

EXIT_OK, EXIT_INPUT, EXIT_BUDGET, EXIT_LEMMA = 0, 1, 2, 3


class LemmaFailure(RuntimeError):
    pass


def _report(kind: str, body: dict, seed=None) -> dict:
    return {"schema": SCHEMA_VERSION.replace("pipeline", kind), "seed": seed, **body}


def _tsv(report: dict) -> str:
    """Flatten a report; a list of flat dicts under ``rows`` becomes a table."""
    rows = report.get("rows")
    if isinstance(rows, list) and rows and all(isinstance(r, dict) for r in rows):
        cols = list(rows[0])
        return "\n".join(["\t".join(cols)] + ["\t".join(str(r[c]) for c in cols) for r in rows]) + "\n"
    lines = ["key\tvalue"]
    for key, val in report.items():
        lines.append(f"{key}\t{json.dumps(val) if isinstance(val, (dict, list)) else val}")
    return "\n".join(lines) + "\n"


def _emit(args, report: dict, tsv: str | None = None, name: str = "report") -> None:
    text_json = json.dumps(report, indent=2, sort_keys=True) + "\n"
    text_tsv = tsv if tsv is not None else _tsv(report)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / f"{name}.json").write_text(text_json)
        (out / f"{name}.tsv").write_text(text_tsv)
    sys.stdout.write(text_tsv if args.format == "tsv" else text_json)


def _out_dir(args) -> Path | None:
    if not args.out:
        return None
    p = Path(args.out)
    p.mkdir(parents=True, exist_ok=True)
    return p


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise formats.FormatError(f"cannot read {path}: {exc.strerror}") from None


# ---------------------------------------------------------------- csp


def cmd_csp_gen(args) -> int:
    if args.planted:
        inst, a = generate_planted(args.seed, args.nx, args.ny, args.nz, args.m)
    else:
        inst, a = generate_random(args.seed, args.nx, args.ny, args.nz, args.m), None
    doc = formats.csp_to_json(inst)
    out = _out_dir(args)
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if out:
        (out / "csp.json").write_text(text)
        if a is not None:
            formats.write_json(out / "assignment.json", formats.assignment_to_json(a))
    sys.stdout.write(text)
    return EXIT_OK


def cmd_csp_solve(args) -> int:
    inst = formats.csp_from_json(formats._parse_json(_read(args.instance)))
    a, best = exact_max_sat(inst, budget=args.budget)
    _emit(args, _report("csp-solve", {"m": inst.m, "satisfied": best,
                                      "assignment": formats.assignment_to_json(a)}, args.seed))
    return EXIT_OK


# ---------------------------------------------------------------- reduce


def _write_graph(out: Path | None, g, layout_json: dict | None):
    if out:
        (out / "graph.txt").write_text(formats.dump_graph(g))
        if layout_json is not None:
            formats.write_json(out / "layout.json", layout_json)


def cmd_reduce_3color(args) -> int:
    inst = formats.csp_from_json(formats._parse_json(_read(args.instance)))
    red = build_3color_instance(inst)
    expected = Fraction(33 * inst.m, 2)
    _write_graph(_out_dir(args), red.graph, formats.gadget_layout_to_json(red.layout, red.sources))
    rep = _report("reduce-3color", {"m": inst.m, "n": red.graph.n, "edges": red.graph.m,
                                    "total_weight": _num(red.graph.total_weight), "expected": _num(expected),
                                    "identity_holds": red.graph.total_weight == expected}, args.seed)
    _emit(args, rep)
    if red.graph.total_weight != expected:
        raise LemmaFailure("total weight differs from 33m/2")
    return EXIT_OK


def cmd_reduce_kcolor(args) -> int:
    if args.k < 3 or args.k % 3:
        raise ValueError(f"k={args.k} is not a multiple of 3; reduce to K = 3*floor(k/3) "
                         f"and add k - K vertices with 'reduce pad'")
    g = formats.load_graph(_read(args.graph))
    H, lay = tensor_build(g, args.k)
    _write_graph(_out_dir(args), H, formats.tensor_layout_to_json(lay))
    _emit(args, _report("reduce-kcolor", {"k": args.k, "n_source": g.n, "m_source": g.m, "n": H.n,
                                          "edges": H.m, "total_weight": _num(H.total_weight),
                                          "k2m_bound": args.k ** 2 * g.m}, args.seed))
    return EXIT_OK


def cmd_reduce_pad(args) -> int:
    g = formats.load_graph(_read(args.graph))
    P, lay = pad_to_k(g, args.K, args.k)
    _write_graph(_out_dir(args), P, formats.padding_layout_to_json(lay))
    _emit(args, _report("reduce-pad", {"K": args.K, "k": args.k, "M": _num(g.total_weight),
                                       "total_weight": _num(P.total_weight), "n": P.n}, args.seed))
    return EXIT_OK


def cmd_reduce_unweight(args) -> int:
    g = formats.load_graph(_read(args.graph))
    U = unweight(g, cap=args.budget)
    _write_graph(_out_dir(args), U, None)
    rng = np.random.default_rng(args.seed)
    c = Coloring(args.k, tuple(int(x) for x in rng.integers(1, args.k + 1, size=g.n)))
    before, after = score(g, c).fraction_proper, score(U, c).fraction_proper
    rep = _report("reduce-unweight", {"n": U.n, "edges": U.m, "scale": g.weight_scale,
                                      "sample_fraction_weighted": _num(before),
                                      "sample_fraction_unweighted": _num(after)}, args.seed)
    _emit(args, rep)
    if before != after:
        raise LemmaFailure("unweighting changed the proper fraction of a sampled coloring")
    return EXIT_OK


# ---------------------------------------------------------------- verify


def cmd_verify(args) -> int:
    cfg = VerifyConfig(seed=args.seed, instances=args.instances, m=args.m, k=args.k)
    rep = run_verify(cfg)
    _emit(args, rep.to_json(), rep.to_tsv())
    if not rep.passed:
        for stage, c in rep.failures():
            print(f"FAILED {stage}: {c.name}: {c.lhs} {c.relation} {c.rhs}", file=sys.stderr)
        return EXIT_LEMMA
    return EXIT_OK


# ---------------------------------------------------------------- spectral


def _q_values(spec: str) -> list[int]:
    out = []
    for part in spec.split(","):
        lo, _, hi = part.partition("-")
        out.extend(range(int(lo), int(hi or lo) + 1))
    return out


def cmd_spectral_report(args) -> int:
    rows = []
    for q in _q_values(args.q):
        op = dmr_operator(q)
        rho = spectral_radius(op)
        row = {"q": q, "spectral_radius": rho, "bound": 4 / (q - 1), "holds": rho <= 4 / (q - 1) + 1e-9}
        if args.power_check:
            row["power_iteration"] = float(np.sqrt(max(power_iteration_second(op), 0.0)))
        rows.append(row)
    _emit(args, _report("spectral", {"rows": rows}, args.seed))
    return EXIT_OK if all(r["holds"] for r in rows) else EXIT_LEMMA


# ---------------------------------------------------------------- pcp


def cmd_pcp_gen(args) -> int:
    inst, lab = gen_label_cover(args.seed, args.n_u, args.n_v, args.degree, args.R, not args.unsat)
    out = _out_dir(args)
    doc = formats.label_cover_to_json(inst, lab)
    if out:
        formats.write_json(out / "instance.json", doc)
        if lab is not None:
            proof = LongCodeProof.from_labeling(inst, lab, args.k)
        else:
            proof = LongCodeProof.random(inst, args.k, args.seed)
        formats.write_json(out / "proof.json", formats.proof_to_json(proof))
    sys.stdout.write(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    return EXIT_OK


def cmd_pcp_simulate(args) -> int:
    inst, _ = formats.label_cover_from_json(formats._parse_json(_read(args.instance)))
    if args.R is not None and args.R != inst.R:
        raise ValueError(f"--R {args.R} does not match the instance (R = {inst.R})")
    proof = formats.proof_from_json(formats._parse_json(_read(args.proof)), inst.R)
    acc = acceptance_probability(inst, proof, args.k, budget=args.budget)
    body = {"k": args.k, "R": inst.R, "acceptance": _num(acc), "acceptance_float": float(acc)}
    if args.samples:
        mean, se = monte_carlo_acceptance(inst, proof, args.k, args.samples, args.seed)
        body["monte_carlo"] = {"mean": mean, "stderr": se, "samples": args.samples}
    dec = influence_decode(inst, proof, args.k, t=args.t, delta=args.delta)
    body["influence_decode"] = {
        "t": dec.t, "delta": dec.delta,
        "sugg_u": [list(s) for s in dec.sugg_u], "sugg_v": [list(s) for s in dec.sugg_v],
        "u_labels": list(dec.labeling.u_labels), "v_labels": list(dec.labeling.v_labels),
        "value": _num(dec.value),
    }
    _emit(args, _report("pcp-simulate", body, args.seed))
    return EXIT_OK


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--format", choices=("json", "tsv"), default="json")
    common.add_argument("--out", help="directory for output files")

    p = argparse.ArgumentParser(prog="maxkcolor", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    csp = sub.add_parser("csp").add_subparsers(dest="action", required=True)
    g = csp.add_parser("gen", parents=[common])
    g.add_argument("--nx", type=int, default=4)
    g.add_argument("--ny", type=int, default=4)
    g.add_argument("--nz", type=int, default=4)
    g.add_argument("--m", type=int, default=6)
    g.add_argument("--planted", action="store_true", help="plant a satisfying assignment")
    g.set_defaults(fn=cmd_csp_gen)
    s = csp.add_parser("solve", parents=[common])
    s.add_argument("instance")
    s.add_argument("--budget", type=int, default=1 << 20)
    s.set_defaults(fn=cmd_csp_solve)

    red = sub.add_parser("reduce").add_subparsers(dest="action", required=True)
    r = red.add_parser("3color", parents=[common])
    r.add_argument("instance")
    r.set_defaults(fn=cmd_reduce_3color)
    r = red.add_parser("kcolor", parents=[common])
    r.add_argument("graph")
    r.add_argument("--k", type=int, required=True)
    r.set_defaults(fn=cmd_reduce_kcolor)
    r = red.add_parser("pad", parents=[common])
    r.add_argument("graph")
    r.add_argument("--K", type=int, default=3)
    r.add_argument("--k", type=int, required=True)
    r.set_defaults(fn=cmd_reduce_pad)
    r = red.add_parser("unweight", parents=[common])
    r.add_argument("graph")
    r.add_argument("--k", type=int, default=3, help="colors of the sampled check coloring")
    r.add_argument("--budget", type=int, default=1_000_000, help="maximum number of unit edges")
    r.set_defaults(fn=cmd_reduce_unweight)

    v = sub.add_parser("verify", parents=[common])
    v.add_argument("--k", type=int, default=6)
    v.add_argument("--m", type=int, default=8)
    v.add_argument("--instances", type=int, default=5)
    v.set_defaults(fn=cmd_verify)

    sp = sub.add_parser("spectral").add_subparsers(dest="action", required=True)
    r = sp.add_parser("report", parents=[common])
    r.add_argument("--q", default="6-16", help="e.g. 6-16 or 6,8,10")
    r.add_argument("--power-check", action="store_true", help="add a power-iteration cross-check")
    r.set_defaults(fn=cmd_spectral_report)

    pc = sub.add_parser("pcp").add_subparsers(dest="action", required=True)
    r = pc.add_parser("gen", parents=[common])
    r.add_argument("--R", type=int, default=1)
    r.add_argument("--k", type=int, default=4)
    r.add_argument("--n-u", type=int, default=2)
    r.add_argument("--n-v", type=int, default=3)
    r.add_argument("--degree", type=int, default=2)
    r.add_argument("--unsat", action="store_true", help="no planted labeling; random proof")
    r.set_defaults(fn=cmd_pcp_gen)
    r = pc.add_parser("simulate", parents=[common])
    r.add_argument("instance")
    r.add_argument("--proof", required=True)
    r.add_argument("--k", type=int, required=True)
    r.add_argument("--R", type=int)
    r.add_argument("--budget", type=int, default=10**9)
    r.add_argument("--samples", type=int, default=0, help="Monte-Carlo samples (0 = skip)")
    r.add_argument("--t", type=int, default=1)
    r.add_argument("--delta", type=float, default=0.1)
    r.set_defaults(fn=cmd_pcp_simulate)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except BudgetExceeded as exc:
        print(f"budget refusal: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except LemmaFailure as exc:
        print(f"check failed: {exc}", file=sys.stderr)
        return EXIT_LEMMA
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
