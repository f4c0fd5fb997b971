"""Command-line front end.

Subcommands: design, evaluate, tables, codec-encode, codec-decode, sweep
and sample.  Data goes to stdout (or ``--out``); diagnostics and errors go
to stderr.  Exit status is 0 on success and 2 on any violated precondition.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .design import LAYOUTS, MODELS, Codebook, design
from .errors import DomainError
from .evaluation import (INFINITE_SQNR, empirical_sqnr, evaluate_codebook, mismatch_sqnr,
                         write_csv)
from .samples_io import read_indices, read_samples, write_indices, write_samples
from .source import LaplacianSource

PAPER_N = (16, 32)


def _levels(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _fmt(v) -> str:
    if v is None:
        return "-"
    if v == INFINITE_SQNR:
        return "inf"
    return f"{v:.6g}"


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _note(msg: str, out: str | None) -> None:
    # keep stdout clean when it carries the data
    print(msg, file=sys.stdout if out else sys.stderr)


def _models(args) -> list[str]:
    return [args.model] if args.model else ["pusq", "plsq"]


def _load_codebook(path) -> Codebook:
    try:
        return Codebook.from_json(Path(path).read_text())
    except (KeyError, TypeError, json.JSONDecodeError) as exc:
        raise DomainError(f"{path}: not a valid codebook file ({exc})") from None


def _codebook_from_args(args) -> Codebook:
    if args.codebook:
        return _load_codebook(args.codebook)
    return design(args.model or "pusq", args.N[0], args.L, args.sigma, args.layout)


def _pretty_reports(reports) -> str:
    head = f"{'model':6} {'layout':10} {'N':>4} {'L':>3} {'SQNR_B[dB]':>11} {'SQNR_X[dB]':>11} {'SQNR_MC[dB]':>11} {'delta':>9}"
    lines = [head]
    for r in reports:
        lines.append(f"{r.kind:6} {r.layout:10} {r.N:>4} {r.L:>3} {_fmt(r.SQNR_bennett):>11} "
                     f"{_fmt(r.SQNR_exact):>11} {_fmt(r.SQNR_mc):>11} {_fmt(r.delta):>9}")
    return "\n".join(lines) + "\n"


def _render(reports, fmt: str, extra=None) -> str:
    if fmt == "json":
        return json.dumps([r.to_dict() for r in reports], indent=2) + "\n"
    if fmt == "csv":
        return write_csv(reports, extra)
    return _pretty_reports(reports)


def cmd_design(args) -> int:
    cb = design(args.model or "pusq", args.N[0], args.L, args.sigma, args.layout)
    _emit(cb.to_json() + "\n", args.out)
    _note(f"{cb.model} N={cb.N} L={cb.L} layout={cb.layout}: x_max={cb.x_max:.6g} "
          f"N_i={list(cb.allocation.counts)} shares={[round(s, 4) for s in cb.allocation.shares]} "
          f"k={cb.step:.6g}", args.out)
    return 0


def cmd_evaluate(args) -> int:
    if args.inp:
        reports = [evaluate_codebook(_load_codebook(args.inp), args.samples, args.seed, args.workers)]
    else:
        reports = [
            evaluate_codebook(design(m, n, args.L, args.sigma, args.layout),
                              args.samples, args.seed, args.workers)
            for m in _models(args) for n in args.N
        ]
    _emit(_render(reports, args.format), args.out)
    return 0


def tables_reports(N_list, L, sigma, samples=0, seed=0, workers=1):
    """Reports for both models and both layouts, companded first."""
    return [
        evaluate_codebook(design(m, n, L, sigma, lay), samples, seed, workers)
        for lay in ("companded", "segmented") for n in N_list for m in ("pusq", "plsq")
    ]


def _pretty_tables(reports) -> str:
    by = {(r.layout, r.kind, r.N): r for r in reports}
    Ns = sorted({r.N for r in reports})
    lines = ["Table 1: Bennett SQNR and approximation error",
             f"{'N':>4} {'SQNR_u[dB]':>11} {'SQNR_l[dB]':>11} {'delta_u':>9} {'delta_l':>9}"]
    for n in Ns:
        u, l = by["companded", "pusq", n], by["companded", "plsq", n]
        lines.append(f"{n:>4} {_fmt(u.SQNR_bennett):>11} {_fmt(l.SQNR_bennett):>11} "
                     f"{_fmt(u.delta):>9} {_fmt(l.delta):>9}")
    lines += ["", "Table 2: SQNR from the exact granular distortion",
              f"{'N':>4} {'SQNR_u[dB]':>11} {'SQNR_l[dB]':>11} {'seg_u[dB]':>11} {'seg_l[dB]':>11}"]
    for n in Ns:
        u, l = by["companded", "pusq", n], by["companded", "plsq", n]
        su, sl = by["segmented", "pusq", n], by["segmented", "plsq", n]
        lines.append(f"{n:>4} {_fmt(u.SQNR_exact):>11} {_fmt(l.SQNR_exact):>11} "
                     f"{_fmt(su.SQNR_exact):>11} {_fmt(sl.SQNR_exact):>11}")
    lines.append("(seg_*: segment-aligned layout with integer cells per segment)")
    return "\n".join(lines) + "\n"


def cmd_tables(args) -> int:
    reports = tables_reports(args.N or list(PAPER_N), args.L, args.sigma,
                             args.samples, args.seed, args.workers)
    if args.format == "pretty":
        text = _pretty_tables(reports)
    else:
        text = _render(reports, args.format, extra=["layout"])
    _emit(text, args.out)
    return 0


def cmd_codec_encode(args) -> int:
    cb = _codebook_from_args(args)
    x = read_samples(args.inp)
    idx = cb.encode(x)
    write_indices(args.out, idx) if args.out else sys.stdout.write(
        "".join(f"{int(i)}\n" for i in np.atleast_1d(idx)))
    if len(x):
        q = empirical_sqnr(cb, x)
        shown = "inf" if q == INFINITE_SQNR else f"{q:.6f}"
        print(f"encoded {len(x)} samples; empirical SQNR = {shown} dB", file=sys.stderr)
    return 0


def cmd_codec_decode(args) -> int:
    cb = _codebook_from_args(args)
    idx = read_indices(args.inp)
    y = np.atleast_1d(cb.decode(idx)) if len(idx) else np.empty(0)
    if args.out:
        write_samples(args.out, y, binary=args.binary)
    else:
        if args.binary:
            raise DomainError("binary output needs --out")
        sys.stdout.write("".join(f"{v!r}\n" for v in y.tolist()))
    return 0


def cmd_sweep(args) -> int:
    cb = _codebook_from_args(args)
    lines = ["variance_dB,SQNR_dB"]
    if args.step <= 0:
        raise DomainError("--step must be positive")
    count = int(np.floor((args.stop - args.start) / args.step + 1e-9)) + 1
    for i in range(max(count, 0)):
        v_db = args.start + i * args.step
        sigma = cb.sigma * 10.0 ** (v_db / 20.0)
        lines.append(f"{v_db!r},{mismatch_sqnr(cb, sigma)!r}")
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def cmd_sample(args) -> int:
    if not args.out:
        raise DomainError("sample needs --out")
    x = LaplacianSource(args.sigma).sample(args.samples, args.seed)
    write_samples(args.out, x, binary=args.binary)
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--model", choices=sorted(MODELS), help="quantizer model (default: both / pusq)")
    common.add_argument("-N", type=_levels, default=None, help="level count(s), comma separated")
    common.add_argument("-L", type=int, default=2, help="segments per quadrant")
    common.add_argument("--sigma", type=float, default=1.0)
    common.add_argument("--layout", choices=LAYOUTS, default="companded", help="threshold layout")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--samples", type=int, default=0, help="Monte Carlo / sample count")
    common.add_argument("--workers", type=int, default=1)
    common.add_argument("--format", choices=("json", "csv", "pretty"), default="pretty")
    common.add_argument("--in", dest="inp", default=None)
    common.add_argument("--out", default=None)
    common.add_argument("--codebook", default=None, help="codebook JSON (codec, sweep)")
    common.add_argument("--binary", action="store_true", help="write CQ01 binary samples")

    p = argparse.ArgumentParser(prog="lapcompand", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("design", parents=[common], help="write a codebook JSON").set_defaults(func=cmd_design)
    sub.add_parser("evaluate", parents=[common], help="distortion/SQNR report").set_defaults(func=cmd_evaluate)
    sub.add_parser("tables", parents=[common], help="Bennett vs exact SQNR tables").set_defaults(func=cmd_tables)
    sub.add_parser("codec-encode", parents=[common], help="samples -> indices").set_defaults(func=cmd_codec_encode)
    sub.add_parser("codec-decode", parents=[common], help="indices -> amplitudes").set_defaults(func=cmd_codec_decode)
    sw = sub.add_parser("sweep", parents=[common], help="SQNR under variance mismatch (CSV)")
    sw.add_argument("--start", type=float, default=-20.0, help="first variance offset in dB")
    sw.add_argument("--stop", type=float, default=20.0)
    sw.add_argument("--step", type=float, default=1.0)
    sw.set_defaults(func=cmd_sweep)
    sub.add_parser("sample", parents=[common], help="write seeded Laplacian samples").set_defaults(func=cmd_sample)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.N is None:
        args.N = [] if args.command == "tables" else [16]
    try:
        if args.command in ("codec-encode", "codec-decode") and not args.inp:
            raise DomainError(f"{args.command} needs --in")
        return args.func(args)
    except (DomainError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
