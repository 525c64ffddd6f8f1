"""Command line entry point: ``invhull <command> [options]``.

Exit codes: 0 on success, 2 for invalid arguments or data, 3 for I/O errors.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

from . import curves, experiments, heuristic, stats
from .hull import ALGORITHMS, compute_hull

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_IO = 3


class UsageError(Exception):
    pass


def _dump(payload: dict) -> None:
    json.dump(payload, sys.stdout, indent=2, sort_keys=True)
    sys.stdout.write("\n")


def cmd_hull(args) -> int:
    if args.n < 2:
        raise UsageError(f"--n must be >= 2, got {args.n}")
    res = compute_hull(args.n, args.algorithm)
    if args.format == "json":
        _dump(res.to_json())
    else:
        sys.stdout.write("a,b\n")
        sys.stdout.write("".join(f"{a},{b}\n" for a, b in res.vertices))
    return EXIT_OK


def cmd_batch(args) -> int:
    state = experiments.run_batch(args.start, args.stop, args.out, args.workers, args.resume)
    _dump(state.__dict__)
    return EXIT_OK


def cmd_sample(args) -> int:
    _, summary = experiments.run_sample(
        args.count, args.min, args.max, args.seed, args.out, args.primes_only, args.workers
    )
    _dump({k: v for k, v in summary.items() if not k.startswith("histogram")})
    return EXIT_OK


def cmd_average(args) -> int:
    report = experiments.run_average(
        args.to, args.checkpoints, args.out, args.workers, args.resume, args.fit_from
    )
    _dump(report.to_json())
    return EXIT_OK


def cmd_constants(args) -> int:
    eta = heuristic.eta_constant(args.prime_bound)
    values = [
        ("eta", eta),
        ("delta", heuristic.delta_constant()),
        ("psi_3_4", heuristic.psi_three_quarters()),
        ("H_intercept", heuristic.H_intercept(eta)),
    ]
    for name, value in values:
        print(f"{name}={value:.6f}")
    return EXIT_OK


def cmd_curves(args) -> int:
    records, summary = curves.run_curve_experiment(
        args.count, args.nmin, args.nmax, args.degree, args.seed, args.primes, args.workers
    )
    payload = summary.to_json()
    if args.out is not None:
        curves.write_csv(args.out, records)
        out = Path(args.out)
        out.with_name(out.stem + ".summary.json").write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    _dump(payload)
    return EXIT_OK


def _read_column(path: str, column: str) -> list[float]:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        names = reader.fieldnames or []
        if column in names:
            return [float(row[column]) for row in reader]
        if column == "rel_diff" and {"v", "h"} <= set(names):
            return [(float(row["v"]) - float(row["h"])) / float(row["h"]) for row in reader]
    raise UsageError(f"column {column!r} not found in {path}")


def cmd_fit(args) -> int:
    data = _read_column(args.input, args.column)
    models = ("lognormal", "loglogistic") if args.model == "both" else (args.model,)
    fits = [stats.fit(data, m, args.shift) for m in models]
    if len(fits) == 1:
        _dump(fits[0].to_json())
    else:
        best = min(fits, key=lambda f: f.gof)
        _dump({"fits": [f.to_json() for f in fits], "smaller_ks": best.model})
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="invhull", description="Convex hulls of modular inversion graphs.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("hull", help="vertices of the hull of G_n")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--algorithm", choices=ALGORITHMS, default="auto")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(func=cmd_hull)

    p = sub.add_parser("batch", help="one record per n over a contiguous range")
    p.add_argument("--from", dest="start", type=int, required=True)
    p.add_argument("--to", dest="stop", type=int, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--resume", action="store_true")
    p.set_defaults(func=cmd_batch)

    p = sub.add_parser("sample", help="records for uniformly sampled moduli")
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--min", type=int, default=10**6)
    p.add_argument("--max", type=int, default=10**8)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.add_argument("--primes-only", action="store_true")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("average", help="V(N) at log-spaced N with a fit in log N")
    p.add_argument("--to", type=int, required=True)
    p.add_argument("--checkpoints", type=int, default=25)
    p.add_argument("--out")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--resume", action="store_true")
    p.add_argument("--fit-from", type=int, default=100)
    p.set_defaults(func=cmd_average)

    p = sub.add_parser("constants", help="eta, delta, psi(3/4) and the H(N) intercept")
    p.add_argument("--prime-bound", type=int, default=heuristic.DEFAULT_ETA_BOUND)
    p.set_defaults(func=cmd_constants)

    p = sub.add_parser("curves", help="hulls of random polynomial graphs mod n")
    p.add_argument("--degree", type=int, choices=(2, 3), default=2)
    p.add_argument("--count", type=int, default=1000)
    p.add_argument("--nmin", type=int)
    p.add_argument("--nmax", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--primes", action="store_true")
    p.add_argument("--out")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_curves)

    p = sub.add_parser("fit", help="fit a distribution to a CSV column")
    p.add_argument("--input", required=True)
    p.add_argument("--column", required=True)
    p.add_argument("--model", choices=(*stats.MODELS, "both"), default="lognormal")
    p.add_argument("--shift", type=float, default=0.0)
    p.set_defaults(func=cmd_fit)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
