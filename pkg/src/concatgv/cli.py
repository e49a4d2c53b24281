"""Command-line interface.

Subcommands: field, sample-code, concat, distance, nice-check, soft-check,
entropy-check, moment-check, gv-compare, sweep.  Every subcommand accepts
--seed, --budget, --out and --format (ignored where they have no meaning);
reports echo seeds and budgets so runs can be reproduced from their outputs.
If the environment variable CONCATGV_OUTDIR is set, relative --out paths are
resolved inside it.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .bounds import gv_rate, zyablov_rate
from .certify import (
    C_TILDE_DEFAULT,
    bernoulli_p,
    check_nice,
    d_pmf,
    entropy_hypothesis,
    soft_condition,
)
from .codes import BinaryCode, ConcatCode, OuterCode, min_distance
from .field import make_field
from .fileio import dumps_code, load_binary_code, load_outer_code, save_code
from .linalg import sample_binary_code, sample_field_code
from .moments import moment_direct, moment_dual
from .sweep import config_from_dict, report_emit, run_sweep


def _resolve_out(path: str | None) -> Path | None:
    if path is None:
        return None
    p = Path(path)
    outdir = os.environ.get("CONCATGV_OUTDIR")
    if outdir and not p.is_absolute():
        p = Path(outdir) / p
    return p


def _emit(args, doc: dict) -> None:
    text = json.dumps(doc, indent=2) + "\n"
    out = _resolve_out(args.out)
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text, encoding="ascii")


def _load_concat(args) -> ConcatCode:
    return ConcatCode(load_outer_code(args.outer), load_binary_code(args.inner))


def cmd_field(args) -> int:
    ctx = make_field(args.k0)
    _emit(args, {"field": ctx.descriptor()})
    return 0


def cmd_sample_code(args) -> int:
    if args.k0 is not None:
        ctx = make_field(args.k0)
        code = OuterCode(sample_field_code(ctx, args.n, args.k, args.seed))
    else:
        code = BinaryCode(sample_binary_code(args.n, args.k, args.seed))
    out = _resolve_out(args.out)
    if out is None:
        sys.stdout.write(dumps_code(code))
    else:
        save_code(out, code)
    return 0


def cmd_concat(args) -> int:
    cc = _load_concat(args)
    _emit(
        args,
        {
            "field": cc.ctx.descriptor(),
            "outer": {"n": cc.outer.n, "k": cc.outer.k},
            "inner": {"n0": cc.inner.n0, "k0": cc.inner.k0},
            "N": cc.N,
            "K": cc.K,
            "rate": cc.rate,
            "omega": [f"{b:#x}" for b in cc.omega],
        },
    )
    return 0


def cmd_distance(args) -> int:
    if args.code:
        code = load_binary_code(args.code)
        size = 1 << code.k0
        desc = {"code": args.code}
    else:
        code = _load_concat(args)
        size = 1 << code.K
        desc = {"outer": args.outer, "inner": args.inner}
    mode = args.mode
    if mode == "auto":
        mode = "exact" if size <= args.budget else "montecarlo"
    d, is_exact = min_distance(code, mode, args.budget, args.seed)
    length = code.n0 if isinstance(code, BinaryCode) else code.N
    _emit(
        args,
        {
            **desc,
            "mode": mode,
            "seed": args.seed,
            "budget": args.budget,
            "distance": d,
            "rel_distance": d / length,
            "is_exact": is_exact,
        },
    )
    return 0


def cmd_nice_check(args) -> int:
    inner = load_binary_code(args.inner)
    rep = check_nice(inner, args.tau, args.budget)
    _emit(args, {"inner": args.inner, "budget": args.budget, **rep.as_dict()})
    return 0


def cmd_soft_check(args) -> int:
    cc = _load_concat(args)
    eps = cc.inner.k0 / cc.inner.n0
    p = args.p if args.p is not None else bernoulli_p(args.c_tilde, eps)
    pmf = d_pmf(cc.ctx, cc.omega, p)
    rep = soft_condition(cc.outer, pmf, args.mode, args.budget, args.seed)
    _emit(
        args,
        {
            "outer": args.outer,
            "inner": args.inner,
            "p": p,
            "c_tilde": args.c_tilde,
            "eps": eps,
            "mode": args.mode,
            "seed": args.seed,
            "budget": args.budget,
            **rep.as_dict(),
        },
    )
    return 0


def cmd_entropy_check(args) -> int:
    outer = load_outer_code(args.outer)
    rep = entropy_hypothesis(
        outer,
        args.c_gamma,
        args.c_eta,
        args.budget,
        n0=args.n0,
        halved_tv=(args.tv_convention == "halved"),
    )
    _emit(
        args,
        {
            "outer": args.outer,
            "c_gamma": args.c_gamma,
            "c_eta": args.c_eta,
            "tv_convention": args.tv_convention,
            "budget": args.budget,
            **rep.as_dict(),
        },
    )
    return 0


def cmd_moment_check(args) -> int:
    cc = _load_concat(args)
    records = []
    for r in args.r:
        direct = moment_direct(cc, r, args.budget)
        dual = moment_dual(cc, r, args.budget)
        records.append(
            {
                "instance": {
                    "outer": args.outer,
                    "inner": args.inner,
                    "n": cc.outer.n,
                    "k": cc.outer.k,
                    "n0": cc.inner.n0,
                    "k0": cc.inner.k0,
                },
                "r": r,
                "direct": str(direct),
                "dual": str(dual),
                "equal": direct == dual,
            }
        )
    _emit(args, {"budget": args.budget, "records": records})
    return 0


def cmd_gv_compare(args) -> int:
    outdir = _resolve_out(args.out) or Path(".")
    outdir.mkdir(parents=True, exist_ok=True)
    grid = args.grid
    gv_lines = ["# concatgv-curve-v1 gv"]
    zy_lines = ["# concatgv-curve-v1 zyablov"]
    for i in range(grid):
        d = 0.5 * i / grid
        gv_lines.append(f"{d!r} {gv_rate(d)!r}")
        zy_lines.append(f"{d!r} {zyablov_rate(d)!r}")
    (outdir / "gv_curve.dat").write_text("\n".join(gv_lines) + "\n", encoding="ascii")
    (outdir / "zyablov_curve.dat").write_text("\n".join(zy_lines) + "\n", encoding="ascii")
    if args.points:
        measured = ["# concatgv-curve-v1 measured"]
        for line in Path(args.points).read_text(encoding="ascii").splitlines():
            if line.startswith("#") or line.startswith("trial,") or not line.strip():
                continue
            cells = line.split(",")
            # sweep CSV columns: trial,seed_inner,seed_outer,rate,distance,rel_distance,...
            measured.append(f"{cells[5]} {cells[3]}")
        (outdir / "measured_points.dat").write_text(
            "\n".join(measured) + "\n", encoding="ascii"
        )
    return 0


def cmd_sweep(args) -> int:
    with open(args.config, "r", encoding="ascii") as fh:
        data = json.load(fh)
    cfg = config_from_dict(data)
    rows, agg = run_sweep(cfg)
    out = _resolve_out(args.out)
    if out is None:
        from .sweep import emit_csv, emit_json

        text = emit_csv(rows, cfg) if args.format == "csv" else emit_json(rows, agg, cfg)
        sys.stdout.write(text)
    else:
        report_emit(rows, agg, cfg, args.format, out)
    total = sum(r.wall_time_s for r in rows)
    print(
        f"sweep: {len(rows)} trials, total {total:.2f}s, "
        f"median rel distance {agg['median_rel_distance']}",
        file=sys.stderr,
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="concatgv",
        description="Concatenated binary linear codes: construction, certification, experiments.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, **kwargs):
        p = sub.add_parser(name, **kwargs)
        p.set_defaults(fn=fn)
        p.add_argument("--seed", type=int, default=0, help="PRNG seed (64-bit)")
        p.add_argument("--budget", type=int, default=1 << 20, help="enumeration budget")
        p.add_argument("--out", type=str, default=None, help="output path (default stdout)")
        p.add_argument("--format", choices=("csv", "json"), default="json")
        return p

    p = add("field", cmd_field, help="print a field descriptor")
    p.add_argument("--k0", type=int, required=True)

    p = add("sample-code", cmd_sample_code, help="sample a uniform random linear code")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--k0", type=int, default=None, help="field degree for outer codes; omit for binary")

    p = add("concat", cmd_concat, help="describe a concatenated code")
    p.add_argument("--outer", required=True)
    p.add_argument("--inner", required=True)

    p = add("distance", cmd_distance, help="minimum distance of a code")
    p.add_argument("--code", default=None, help="binary code file")
    p.add_argument("--outer", default=None)
    p.add_argument("--inner", default=None)
    p.add_argument("--mode", choices=("exact", "montecarlo", "auto"), default="auto")

    p = add("nice-check", cmd_nice_check, help="tau-niceness of an inner code")
    p.add_argument("--inner", required=True)
    p.add_argument("--tau", type=float, required=True)

    p = add("soft-check", cmd_soft_check, help="soft-decoding condition on an outer code")
    p.add_argument("--outer", required=True)
    p.add_argument("--inner", required=True)
    p.add_argument("--p", type=float, default=None, help="explicit Bernoulli parameter")
    p.add_argument("--c-tilde", type=float, default=C_TILDE_DEFAULT)
    p.add_argument("--mode", choices=("exact", "montecarlo"), default="exact")

    p = add("entropy-check", cmd_entropy_check, help="smooth min-entropy condition")
    p.add_argument("--outer", required=True)
    p.add_argument("--c-gamma", type=float, required=True)
    p.add_argument("--c-eta", type=float, required=True)
    p.add_argument("--n0", type=int, default=None, help="inner length for the n0 diagnostic")
    p.add_argument("--tv-convention", choices=("halved", "unhalved"), default="halved")

    p = add("moment-check", cmd_moment_check, help="verify the moment identity")
    p.add_argument("--outer", required=True)
    p.add_argument("--inner", required=True)
    p.add_argument("--r", type=lambda s: [int(x) for x in s.split(",")], default=[1, 2, 3])

    p = add("gv-compare", cmd_gv_compare, help="emit (delta, R) curve data files")
    p.add_argument("--grid", type=int, default=1000)
    p.add_argument("--points", default=None, help="sweep CSV to extract measured points from")

    p = add("sweep", cmd_sweep, help="run a seeded parameter sweep from a JSON config")
    p.add_argument("--config", required=True)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "distance" and not args.code and not (args.outer and args.inner):
        print("distance: need --code or both --outer and --inner", file=sys.stderr)
        return 2
    try:
        return args.fn(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
