"""Command line front end.

Exit codes: 0 success, 1 validation failure, 2 usage error, 3 I/O error.
"""
from __future__ import annotations

import argparse
import sys
import time

import numpy as np

from . import oracle
from .rng import RngStream
from .sampler import sample_many, sample_with_steps
from .stats import HistogramSpec, build_histogram

EXIT_OK, EXIT_FAILED, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3


def _positive(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def _seed(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must lie in [0, 2**64)")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="perpetuity",
        description="Perfect sampling from the fixed point of Y = UY + U(1-U).")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help, n_default):
        p = sub.add_parser(name, help=help)
        p.add_argument("--n", type=_positive, default=n_default, help=f"sample count (default {n_default})")
        p.add_argument("--seed", type=_seed, default=1, help="stream seed (default 1)")
        p.add_argument("--out", default="-", help="output file, '-' for stdout")
        return p

    add("sample", "write samples, one per line", 10)
    hist = add("hist", "write an area-normalised histogram as CSV", 10**7)
    hist.add_argument("--bins", type=_positive, default=200)
    val = add("validate", "run the validation suite", oracle.REFERENCE_N)
    val.add_argument("--csv", action="store_true", help="CSV report instead of text")
    add("bench", "time the sampler", 10**7)
    return parser


def _write(out, text):
    if out == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        with open(out, "w", newline="") as fh:
            fh.write(text)


def cmd_sample(args):
    values = sample_many(RngStream(args.seed), args.n)
    _write(args.out, "".join(f"{v!r}\n" for v in values.tolist()))
    return EXIT_OK


def cmd_hist(args):
    values = sample_many(RngStream(args.seed), args.n)
    hist = build_histogram(values, HistogramSpec(bins=args.bins))
    _write(args.out, hist.to_csv())
    return EXIT_OK


def cmd_validate(args):
    if args.n < oracle.ROUND_TRIP_COUNT:
        print(f"validate needs --n >= {oracle.ROUND_TRIP_COUNT}", file=sys.stderr)
        return EXIT_USAGE
    report = oracle.run_validation_suite(args.seed, args.n)
    _write(args.out, report.to_csv() if args.csv else report.to_text())
    return EXIT_OK if report.passed else EXIT_FAILED


def cmd_bench(args):
    sample_many(RngStream(args.seed), 1)  # JIT warm-up, not timed
    start = time.perf_counter()
    _, steps = sample_with_steps(RngStream(args.seed), args.n)
    wall = time.perf_counter() - start
    lines = [
        f"samples: {args.n}",
        f"wall_time_s: {wall:.3f}",
        f"samples_per_s: {args.n / wall:.0f}" if wall > 0 else "samples_per_s: inf",
        f"mean_N: {np.mean(steps):.6f}",
        f"mean_uniforms_per_sample: {np.mean(steps + 1):.6f}",
    ]
    _write(args.out, "\n".join(lines) + "\n")
    return EXIT_OK


COMMANDS = {"sample": cmd_sample, "hist": cmd_hist, "validate": cmd_validate, "bench": cmd_bench}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except OSError as exc:
        print(f"perpetuity: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
