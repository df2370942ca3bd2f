"""Command-line interface: one subcommand per experiment, csv/jsonl output.

Every output starts with a header carrying the full run configuration (comment
lines for csv, a preamble record for jsonl), so a run can be reproduced from
its own output.  Data sections are byte-identical across runs with the same
configuration and seed.

Exit codes: 0 success, 2 usage or malformed input, 3 numeric parameter out of
range, 4 unwritable output path.
"""

from __future__ import annotations

import argparse
import io
import json
import sys
from dataclasses import asdict

from .birch import birch_model, birch_moment, birch_sample, three_series_sim
from .errors import SurfrankError
from .experiments import (
    RANK_BANNER,
    avg_rank_survey,
    crt_experiment,
    rho_estimate,
    rho_sweep,
)
from .families import FamilySpec, enumerate_family
from .lfunction import surface_record
from .nagao import (
    CurveQ,
    bsd_partial_product,
    heathbrown_sum,
    nagao_sum,
    rubinstein_estimate,
)
from .seeding import unit_rng
from .surfaces import format_surface_text, parse_surface_text, reduce_mod

__all__ = ["main", "emit", "format_float"]

USAGE_ERROR = 2
RANGE_ERROR = 3
OUTPUT_ERROR = 4

# Parameters beyond this are rejected (exit 3) before any work starts.
MAX_PARAM = 2**62


def format_float(x) -> str:
    if isinstance(x, float):
        return format(x, ".17g")
    return str(x)


def emit(records: list[dict], config: dict, fmt: str, out, columns=None) -> None:
    """Write records with a reproducibility header; fmt is 'csv' or 'jsonl'.

    columns fixes the csv header order (and keeps it present for an empty
    stream); by default columns are collected from the records in first-seen
    order.
    """
    if fmt == "jsonl":
        out.write(json.dumps({"_config": config}, sort_keys=True) + "\n")
        for rec in records:
            out.write(json.dumps(rec, sort_keys=True, default=str) + "\n")
        return
    out.write("# config " + json.dumps(config, sort_keys=True) + "\n")
    keys = list(columns) if columns else []
    for rec in records:
        for k in rec:
            if k not in keys:
                keys.append(k)
    if keys:
        out.write(",".join(keys) + "\n")
    for rec in records:
        out.write(",".join(format_float(rec.get(k, "")) for k in keys) + "\n")


def _check_range(args) -> None:
    for key, value in vars(args).items():
        if isinstance(value, int) and abs(value) > MAX_PARAM:
            raise OverflowError(f"parameter --{key} out of range: {value}")


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--out", default="-")
    common.add_argument("--format", choices=("csv", "jsonl"), default="csv")
    common.add_argument("--checkpoint", default=None)

    top = argparse.ArgumentParser(prog="surfrank", description=__doc__, parents=[common])
    sub = top.add_subparsers(dest="command", required=True)

    def add_parser(name, **kw):
        return sub.add_parser(name, parents=[common], **kw)

    p = add_parser("nagao", help="Nagao rank estimate for a surface over Q")
    p.add_argument("--surface", required=True)
    p.add_argument("--xmax", type=int, required=True)
    p.add_argument("--terms", action="store_true", help="emit per-prime terms")

    p = add_parser("curve-sums", help="trace-sum estimators for a fixed curve")
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--b", type=int, required=True)
    p.add_argument("--xmax", type=int, required=True)

    p = add_parser("lfun", help="exact L-polynomial of a surface over F_ell")
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--surface", required=True)
    p.add_argument("--sections", type=int, default=None,
                   help="also search sections up to this x-degree")

    p = add_parser("rho", help="positive-rank proportion over F_ell")
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--mode", choices=("exhaustive", "mc"), default="exhaustive")
    p.add_argument("--budget", type=int, default=None)

    p = add_parser("rho-sweep", help="rho over a grid file of ell,m,n cells")
    p.add_argument("--grid", required=True)
    p.add_argument("--mode", choices=("exhaustive", "mc"), default="exhaustive")
    p.add_argument("--budget", type=int, default=None)

    p = add_parser("crt", help="CRT product consistency experiment")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--M", type=int, required=True)
    p.add_argument("--samples", type=int, required=True)

    p = add_parser("birch", help="per-prime trace distribution model")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--moments", type=int, default=None)
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--mode", choices=("table", "direct"), default="table")

    p = add_parser("threeseries", help="normalized double-sum trajectories")
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--grid", required=True, help="comma-separated cutoffs")
    p.add_argument("--trials", type=int, required=True)

    p = add_parser("enumerate", help="enumerate a surface family")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--M", type=int, required=True)
    p.add_argument("--ordering", choices=("height", "mahler"), default="height")

    p = add_parser("survey", help="average Nagao estimate over a sampled family")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--M", type=int, required=True)
    p.add_argument("--xmax", type=int, required=True)
    p.add_argument("--samples", type=int, required=True)

    return top


def _run(args) -> list[dict]:
    cmd = args.command
    if cmd == "nagao":
        s = parse_surface_text(args.surface)
        est = nagao_sum(s, args.xmax, threads=args.threads, keep_terms=args.terms)
        records = [{
            "surface": format_surface_text(s),
            "X": est.X,
            "value": est.value,
            "rank_estimate": -est.value,
        }]
        if args.terms:
            records.extend({"p": p, "term": t} for p, t in est.per_prime_terms)
        return records

    if cmd == "curve-sums":
        e = CurveQ(args.a, args.b)
        return [{
            "a": e.a,
            "b": e.b,
            "X": args.xmax,
            "heathbrown": heathbrown_sum(e, args.xmax, threads=args.threads),
            "bsd_product": bsd_partial_product(e, args.xmax),
            "rubinstein": rubinstein_estimate(e, args.xmax),
        }]

    if cmd == "lfun":
        s = reduce_mod(parse_surface_text(args.surface), args.ell)
        return [surface_record(s, section_search_deg=args.sections)]

    if cmd == "rho":
        est = rho_estimate(args.ell, args.m, args.n, mode=args.mode,
                           budget=args.budget, seed=args.seed, threads=args.threads)
        for line in est.report_lines():
            print(line, file=sys.stderr)
        rec = asdict(est)
        rec["distance_to_limit"] = est.distance_to_limit
        rec["banner"] = RANK_BANNER
        return [rec]

    if cmd == "rho-sweep":
        cells = []
        with open(args.grid, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                ell, m, n = (int(x) for x in line.split(","))
                cells.append((ell, m, n))
        ells = sorted({c[0] for c in cells})
        mns = sorted({(c[1], c[2]) for c in cells})
        ests = rho_sweep(ells, mns, mode=args.mode, budget=args.budget,
                         seed=args.seed, checkpoint_path=args.checkpoint,
                         threads=args.threads)
        return [asdict(e) for e in ests]

    if cmd == "crt":
        rep = crt_experiment(args.N, args.m, args.n, args.M, args.samples, seed=args.seed)
        for line in rep.report_lines():
            print(line, file=sys.stderr)
        rec = asdict(rep)
        rec["rhos"] = ";".join(f"{r.ell}:{format_float(r.rho_hat)}" for r in rep.rhos)
        rec["degree_drop_rates"] = ";".join(f"{ell}:{format_float(r)}"
                                            for ell, r in rep.degree_drop_rates)
        return [rec]

    if cmd == "birch":
        if (args.moments is None) == (args.samples is None):
            raise ValueError("birch needs exactly one of --moments or --samples")
        if args.moments is not None:
            return [
                {"p": args.p, "k": k, "moment": str(birch_moment(args.p, k))}
                for k in range(args.moments + 1)
            ]
        model = birch_model(args.p, args.mode)
        rng = unit_rng(args.seed, "cli-birch", args.p)
        draws = birch_sample(model, rng, size=args.samples)
        from collections import Counter

        hist = Counter(int(t) for t in draws)
        return [{"p": args.p, "trace": t, "count": c} for t, c in sorted(hist.items())]

    if cmd == "threeseries":
        grid = tuple(int(x) for x in args.grid.split(","))
        trajs, summary = three_series_sim(args.eps, grid, args.seed, args.trials)
        records = []
        for i, traj in enumerate(trajs):
            for x, v in zip(traj.x_grid, traj.normalized_values):
                records.append({"trial": i, "X": x, "normalized": v})
        for j, x in enumerate(summary.x_grid):
            records.append({"trial": "median_abs", "X": x,
                            "normalized": summary.median_abs[j]})
            records.append({"trial": "var_half_eps", "X": x,
                            "normalized": summary.var_half_eps[j]})
        return records

    if cmd == "enumerate":
        spec = FamilySpec(args.m, args.n, args.M, args.ordering)
        return [{"surface": format_surface_text(s)} for s in enumerate_family(spec)]

    if cmd == "survey":
        spec = FamilySpec(args.m, args.n, args.M, "height")
        rep = avg_rank_survey(spec, args.xmax, args.samples, seed=args.seed,
                              threads=args.threads)
        for line in rep.report_lines():
            print(line, file=sys.stderr)
        rec = {
            "m": spec.m, "n": spec.n, "M": spec.M, "X": rep.X,
            "sample_size": rep.sample_size,
            "mean_estimate": rep.mean_estimate,
            "se": rep.se,
            "histogram": ";".join(f"{k}:{v}" for k, v in rep.histogram),
            "banner": "evidence-grade estimates, not proven ranks",
        }
        return [rec]

    raise AssertionError(f"unhandled command {cmd}")


def _config_of(args) -> dict:
    cfg = {k: v for k, v in vars(args).items() if v is not None}
    return cfg


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else USAGE_ERROR
    try:
        _check_range(args)
    except OverflowError as exc:
        print(f"surfrank: {exc}", file=sys.stderr)
        return RANGE_ERROR
    try:
        records = _run(args)
    except OverflowError as exc:
        print(f"surfrank: {exc}", file=sys.stderr)
        return RANGE_ERROR
    except (SurfrankError, ValueError) as exc:
        print(f"surfrank: {exc}", file=sys.stderr)
        return USAGE_ERROR

    config = _config_of(args)
    buf = io.StringIO()
    emit(records, config, args.format, buf)
    payload = buf.getvalue()
    if args.out == "-":
        sys.stdout.write(payload)
    else:
        try:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(payload)
        except OSError as exc:
            print(f"surfrank: cannot write {args.out!r}: {exc}", file=sys.stderr)
            return OUTPUT_ERROR
    return 0


if __name__ == "__main__":
    sys.exit(main())
