"""Command-line front end.

Exit codes: 0 success, 1 domain error (bad matrix, inapplicable operation,
budget exhausted), 2 usage error.  Row/column indices in reports are 1-based;
generator and pool positions are 0-based list offsets.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

from . import classes as cl
from .config import CliConfig
from .consensus import decide_consensus
from .construct import CLASS_TAGS, GALLERY_NAMES, PARAMETRIC, breaker, gallery, random_in_class
from .matrix import (
    load_matrix,
    matrix_to_csv,
    matrix_to_json,
    pattern_of,
    save_matrix,
)
from .simulate import ScheduleSpec, simulate

COMMANDS = ("classify", "index", "consensus", "gallery", "breaker", "simulate", "maxindex", "sample")


def _bits_one_based(bits: int, n: int) -> list[int]:
    return [j + 1 for j in range(n) if bits >> j & 1]


def _emit(report: dict, cfg: CliConfig, out) -> None:
    if cfg.output_format == "json":
        out.write(json.dumps(report, indent=2) + "\n")
        return
    for key, value in report.items():
        if isinstance(value, (dict, list)):
            value = json.dumps(value)
        out.write(f"{key}: {value}\n")


def _config(args) -> CliConfig:
    return CliConfig(
        eps=args.eps,
        row_sum_tol=args.row_sum_tol,
        closure_budget=args.closure_budget,
        g_budget=args.g_budget,
        index_budget=args.index_budget,
        seed=args.seed,
        tolerance=args.tolerance,
        output_format=args.output,
        threads=args.threads,
    )


def _load(path, cfg: CliConfig):
    return load_matrix(path, row_sum_tol=cfg.row_sum_tol)


# ---------------------------------------------------------------------------
# subcommands

def cmd_classify(args, cfg, out):
    m = _load(args.input, cfg)
    _emit(cl.classify(m, eps=cfg.eps, g_budget=cfg.g_budget).to_dict(), cfg, out)


def cmd_index(args, cfg, out):
    p = pattern_of(_load(args.input, cfg), cfg.eps)
    index, pair = cl.sia_index_with_pair(p)
    report = {"sia": index is not None, "sia_index": index}
    if pair is not None:
        report["worst_pair"] = [_bits_one_based(pair[0], p.n), _bits_one_based(pair[1], p.n)]
    _emit(report, cfg, out)


def cmd_consensus(args, cfg, out):
    mats = [_load(path, cfg) for path in args.inputs]
    decision = decide_consensus(mats, budget=cfg.closure_budget, eps=cfg.eps)
    _emit(decision.to_dict(), cfg, out)


def cmd_gallery(args, cfg, out):
    if args.list or args.name is None:
        _emit({"names": list(GALLERY_NAMES), "parametric": sorted(PARAMETRIC)}, cfg, out)
        return
    entry = gallery(args.name, args.n)
    if args.out_dir:
        folder = Path(args.out_dir)
        folder.mkdir(parents=True, exist_ok=True)
        written = []
        for k, m in enumerate(entry.matrices, start=1):
            stem = entry.name if len(entry.matrices) == 1 else f"{entry.name}_{k}"
            path = folder / f"{stem}.{args.format}"
            save_matrix(m, path)
            written.append(str(path))
        _emit({"name": entry.name, "written": written}, cfg, out)
        return
    if args.format == "csv":
        out.write("\n".join(matrix_to_csv(m) for m in entry.matrices))
        return
    _emit({
        "name": entry.name,
        "note": entry.note,
        "matrices": [matrix_to_json(m) for m in entry.matrices],
        "expected": list(entry.expected),
    }, cfg, out)


def cmd_breaker(args, cfg, out):
    p = pattern_of(_load(args.input, cfg), cfg.eps)
    res = breaker(p)
    if args.write:
        save_matrix(res.q, args.write)
    _emit({
        "q": matrix_to_json(res.q),
        "witness_pair": [res.witness_pair.a.one_based(), res.witness_pair.b.one_based()],
        "q_index": res.q_index,
    }, cfg, out)


def cmd_simulate(args, cfg, out):
    if args.spec:
        raw = json.loads(Path(args.spec).read_text())
        if not isinstance(raw, dict):
            raise ValueError("schedule spec must be a JSON object")
        pool_paths = raw.get("pool", args.pool)
        raw.setdefault("seed", cfg.seed)
        spec = ScheduleSpec.from_dict(raw, [_load(p, cfg) for p in pool_paths or []])
    else:
        if not args.pool:
            raise ValueError("simulate needs --pool or --spec")
        spec = ScheduleSpec(
            pool=[_load(p, cfg) for p in args.pool],
            sarymsakov_indices=list(args.sarymsakov),
            gap=args.gap,
            steps=args.steps,
            seed=cfg.seed,
            mode=args.schedule,
            sequence=args.sequence,
        )
    report = simulate(
        spec,
        tolerance=cfg.tolerance,
        report_every=args.report_every,
        renormalize_every=args.renormalize_every,
        eps=cfg.eps,
    )
    if args.trace_csv:
        Path(args.trace_csv).write_text(report.trace_csv())
    _emit(report.to_dict(), cfg, out)


def cmd_maxindex(args, cfg, out):
    budget = args.budget or cfg.index_budget
    rep = cl.max_sia_index(args.n, mode=args.mode, budget=budget, seed=cfg.seed, workers=cfg.threads)
    _emit(rep.to_dict(), cfg, out)


def cmd_sample(args, cfg, out):
    m = random_in_class(args.cls, args.n, seed=cfg.seed, max_tries=args.max_tries, eps=cfg.eps)
    if args.write:
        save_matrix(m, args.write)
    _emit(matrix_to_json(m), cfg, out)


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    d = CliConfig()
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("numeric configuration")
    g.add_argument("--eps", type=float, default=d.eps, help="positivity threshold (default %(default)g)")
    g.add_argument("--row-sum-tol", type=float, default=d.row_sum_tol)
    g.add_argument("--closure-budget", type=int, default=d.closure_budget)
    g.add_argument("--g-budget", type=int, default=d.g_budget)
    g.add_argument("--index-budget", type=int, default=d.index_budget)
    g.add_argument("--seed", type=int, default=d.seed)
    g.add_argument("--tolerance", type=float, default=d.tolerance)
    g.add_argument("--output", choices=("json", "text"), default=d.output_format)
    g.add_argument("--threads", type=int, default=d.threads)

    parser = argparse.ArgumentParser(prog="sarymsakov", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, metavar="{" + ",".join(COMMANDS) + "}")

    s = sub.add_parser("classify", parents=[common], help="class memberships of one matrix")
    s.add_argument("--input", required=True)
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("index", parents=[common], help="SIA index and the pair attaining it")
    s.add_argument("--input", required=True)
    s.set_defaults(func=cmd_index)

    s = sub.add_parser("consensus", parents=[common], help="decide whether a finite set is a consensus set")
    s.add_argument("--inputs", nargs="+", required=True)
    s.set_defaults(func=cmd_consensus)

    s = sub.add_parser("gallery", parents=[common], help="print or write a named example matrix")
    s.add_argument("name", nargs="?", choices=GALLERY_NAMES)
    s.add_argument("--n", type=int)
    s.add_argument("--list", action="store_true")
    s.add_argument("--format", choices=("json", "csv"), default="json")
    s.add_argument("--out-dir")
    s.set_defaults(func=cmd_gallery)

    s = sub.add_parser("breaker", parents=[common], help="matrix Q making PQ and QP non-SIA")
    s.add_argument("--input", required=True)
    s.add_argument("--write", help="also save Q to this .json/.csv path")
    s.set_defaults(func=cmd_breaker)

    s = sub.add_parser("simulate", parents=[common], help="simulate a left-product schedule")
    s.add_argument("--schedule", choices=("theorem7", "iid", "custom"), default="theorem7")
    s.add_argument("--pool", nargs="+")
    s.add_argument("--sarymsakov", nargs="*", type=int, default=[],
                   help="0-based pool positions of the Sarymsakov matrices")
    s.add_argument("--gap", type=int, default=1)
    s.add_argument("--steps", type=int, default=10_000)
    s.add_argument("--sequence", nargs="+", type=int, help="custom mode: pool positions, repeated")
    s.add_argument("--spec", help="schedule spec JSON (overrides the schedule flags)")
    s.add_argument("--report-every", type=int, default=1)
    s.add_argument("--renormalize-every", type=int)
    s.add_argument("--trace-csv")
    s.set_defaults(func=cmd_simulate)

    s = sub.add_parser("maxindex", parents=[common], help="largest SIA index over n x n patterns")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--mode", choices=("exact", "sampled"), default="exact")
    s.add_argument("--budget", type=int)
    s.set_defaults(func=cmd_maxindex)

    s = sub.add_parser("sample", parents=[common], help="random matrix from a class")
    s.add_argument("--class", dest="cls", choices=CLASS_TAGS, required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--max-tries", type=int, default=10_000)
    s.add_argument("--write")
    s.set_defaults(func=cmd_sample)
    return parser


def dispatch(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = _config(args)
    except ValueError as exc:
        err.write(f"usage error: {exc}\n")
        return 2
    try:
        args.func(args, cfg, out)
    except (ValueError, KeyError, RuntimeError, OSError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        err.write(f"error: {msg}\n")
        return 1
    return 0


def main() -> None:
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
