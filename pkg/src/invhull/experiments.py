"""Per-modulus records, contiguous sweeps, random samples and the V(N) average.

Every runner fans work out to a process pool but writes results in key
order from a single place, so output files do not depend on the number of
workers.  Long sweeps keep a JSON sidecar next to the output
(``<out>.ckpt.json``) and can be resumed after an interruption.
"""

from __future__ import annotations

import json
import os
from collections import Counter
from concurrent.futures import Executor, ProcessPoolExecutor
from contextlib import contextmanager
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Callable, Iterator, Sequence

import numpy as np

from . import heuristic as heur
from . import numtheory as nt
from . import rng
from .hull import compute_hull
from .stats import histogram

BATCH_CHUNK = 1000
AVERAGE_CHUNK = 10**5
MIN_SIG_DIGITS = 6


@dataclass(frozen=True)
class ExperimentRecord:
    n: int
    v: int
    tau_nm1: int
    h: float
    M: int
    T_num: int
    T_den: int
    t: int
    g1: float
    g2: float
    diff: int
    diff_mod4_zero: bool
    algorithm: str


CSV_COLUMNS = tuple(f.name for f in fields(ExperimentRecord))
CSV_HEADER = ",".join(CSV_COLUMNS)


def format_real(x: float) -> str:
    """Shortest %g form, with at least six significant digits, that reads back as ``x``."""
    for p in range(MIN_SIG_DIGITS, 18):
        s = f"{x:.{p}g}"
        if float(s) == x:
            return s
    return repr(x)


def _cell(value) -> str:
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, float):
        return format_real(value)
    return str(value)


def csv_row(rec: ExperimentRecord) -> str:
    return ",".join(_cell(getattr(rec, c)) for c in CSV_COLUMNS)


def parse_row(line: str) -> ExperimentRecord:
    parts = line.rstrip("\n").split(",")
    if len(parts) != len(CSV_COLUMNS):
        raise ValueError(f"expected {len(CSV_COLUMNS)} fields, got {len(parts)}")
    kw = dict(zip(CSV_COLUMNS, parts))
    return ExperimentRecord(
        n=int(kw["n"]),
        v=int(kw["v"]),
        tau_nm1=int(kw["tau_nm1"]),
        h=float(kw["h"]),
        M=int(kw["M"]),
        T_num=int(kw["T_num"]),
        T_den=int(kw["T_den"]),
        t=int(kw["t"]),
        g1=float(kw["g1"]),
        g2=float(kw["g2"]),
        diff=int(kw["diff"]),
        diff_mod4_zero=kw["diff_mod4_zero"] == "1",
        algorithm=kw["algorithm"],
    )


def experiment_record(n: int, algorithm: str = "auto") -> ExperimentRecord:
    res = compute_hull(n, algorithm)
    tau = nt.tau(n - 1)
    T = nt.t_ratio(n - 1)
    diff = res.v - 2 * (tau - 1)
    return ExperimentRecord(
        n=n,
        v=res.v,
        tau_nm1=tau,
        h=heur.h_of_n(n),
        M=0 if res.degenerate else res.max_diff,
        T_num=T.numerator,
        T_den=T.denominator,
        t=(T.numerator + 3 * T.denominator) // (4 * T.denominator),
        g1=heur.g1(n),
        g2=heur.g2(n),
        diff=diff,
        diff_mod4_zero=diff % 4 == 0,
        algorithm=res.algorithm,
    )


def read_records(path) -> list[ExperimentRecord]:
    with open(path) as fh:
        header = fh.readline().rstrip("\n")
        if header != CSV_HEADER:
            raise ValueError(f"{path}: unexpected header {header!r}")
        return [parse_row(line) for line in fh if line.strip()]


# --- plumbing ------------------------------------------------------------------


class _Serial(Executor):
    def map(self, fn, *iterables, timeout=None, chunksize=1):
        return map(fn, *iterables)


@contextmanager
def _executor(workers: int) -> Iterator[Executor]:
    if workers <= 1:
        yield _Serial()
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            yield pool


def _chunksize(items: int, workers: int) -> int:
    return max(1, items // (8 * max(1, workers)))


def checkpoint_path(out) -> Path:
    return Path(f"{out}.ckpt.json")


def _write_json_atomic(path: Path, payload: dict) -> None:
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(json.dumps(payload, sort_keys=True) + "\n")
    os.replace(tmp, path)


def _truncate_to(out: Path, last_n: int) -> None:
    """Keep the header and the complete rows with n <= last_n."""
    keep = 0
    with open(out, "rb") as fh:
        header = fh.readline()
        if not header.endswith(b"\n"):
            raise ValueError(f"{out}: missing header")
        keep = len(header)
        for line in fh:
            if not line.endswith(b"\n"):
                break
            try:
                n = int(line.split(b",", 1)[0])
            except ValueError:
                break
            if n > last_n:
                break
            keep += len(line)
    with open(out, "r+b") as fh:
        fh.truncate(keep)


# --- contiguous sweep ------------------------------------------------------------


@dataclass(frozen=True)
class BatchState:
    last_n: int
    partial_sum: int
    count: int


def run_batch(
    start: int,
    stop: int,
    out,
    workers: int = 1,
    resume: bool = False,
    chunk: int = BATCH_CHUNK,
    on_chunk: Callable[[BatchState], None] | None = None,
) -> BatchState:
    """Write one record per n in [start, stop] to ``out``, in ascending order.

    After each chunk the rows are flushed and the sidecar records the last
    n written, the running sum of v and the row count.  With ``resume`` an
    existing sidecar is honoured: rows past its last_n (including a torn
    final line) are cut off and the sweep continues from there.
    """
    if not 2 <= start <= stop:
        raise ValueError(f"need 2 <= start <= stop, got [{start}, {stop}]")
    out = Path(out)
    ckpt = checkpoint_path(out)
    state = BatchState(start - 1, 0, 0)
    if resume and ckpt.exists() and out.exists():
        saved = json.loads(ckpt.read_text())
        state = BatchState(saved["last_n"], saved["partial_sum"], saved["count"])
        _truncate_to(out, state.last_n)
        mode = "a"
    else:
        mode = "w"
    with open(out, mode, newline="\n") as fh, _executor(workers) as pool:
        if mode == "w":
            fh.write(CSV_HEADER + "\n")
        n0 = state.last_n + 1
        while n0 <= stop:
            n1 = min(stop, n0 + chunk - 1)
            ns = range(n0, n1 + 1)
            recs = list(pool.map(experiment_record, ns, chunksize=_chunksize(len(ns), workers)))
            fh.write("".join(csv_row(r) + "\n" for r in recs))
            fh.flush()
            os.fsync(fh.fileno())
            state = BatchState(n1, state.partial_sum + sum(r.v for r in recs), state.count + len(recs))
            _write_json_atomic(ckpt, state.__dict__)
            if on_chunk is not None:
                on_chunk(state)
            n0 = n1 + 1
    return state


# --- random sample -----------------------------------------------------------------


def _sample_record(args: tuple[int, int, int, int, bool]) -> ExperimentRecord:
    seed, index, lo, hi, primes = args
    gen = rng.stream(seed, index)
    n = rng.uniform_prime(gen, lo, hi) if primes else rng.uniform_int(gen, lo, hi)
    return experiment_record(n)


def sample_summary(records: Sequence[ExperimentRecord], seed: int, lo: int, hi: int, primes: bool) -> dict:
    count = len(records)
    zero = [r for r in records if r.diff == 0]
    failures = [r.n for r in records if not r.diff_mod4_zero]
    t_dist = Counter(r.t for r in zero)
    rel = [(r.v - r.h) / r.h for r in records]
    return {
        "seed": seed,
        "count": count,
        "min": lo,
        "max": hi,
        "primes_only": primes,
        "sampling": "uniform with replacement",
        "v_lt_h": sum(r.v < r.h for r in records),
        "fraction_v_lt_h": sum(r.v < r.h for r in records) / count,
        "diff_zero": len(zero),
        "fraction_diff_zero": len(zero) / count,
        "fraction_diff_mod4_zero": 1 - len(failures) / count,
        "mod4_failures": failures,
        "t_distribution_diff_zero": {str(k): t_dist[k] for k in sorted(t_dist)},
        "fraction_t_le_2_diff_zero": (t_dist[1] + t_dist[2]) / len(zero) if zero else None,
        "histogram_rel_diff": histogram(rel).to_json(),
        "histogram_v": histogram([r.v for r in records]).to_json(),
    }


def summary_path(out) -> Path:
    out = Path(out)
    return out.with_name(out.stem + ".summary.json")


def run_sample(
    count: int,
    lo: int,
    hi: int,
    seed: int,
    out=None,
    primes: bool = False,
    workers: int = 1,
) -> tuple[list[ExperimentRecord], dict]:
    """Records for ``count`` moduli drawn uniformly (with replacement) from [lo, hi].

    Sample i uses its own random stream, so the result is fixed by the seed.
    With ``out`` the rows go to that CSV and the summary to
    ``<stem>.summary.json`` beside it.
    """
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    if not 2 <= lo <= hi:
        raise ValueError(f"need 2 <= min <= max, got [{lo}, {hi}]")
    if primes:
        rng.check_prime_range(lo, hi)
    jobs = [(seed, i, lo, hi, primes) for i in range(count)]
    with _executor(workers) as pool:
        records = list(pool.map(_sample_record, jobs, chunksize=_chunksize(count, workers)))
    summary = sample_summary(records, seed, lo, hi, primes)
    if out is not None:
        with open(out, "w", newline="\n") as fh:
            fh.write(CSV_HEADER + "\n")
            fh.write("".join(csv_row(r) + "\n" for r in records))
        summary_path(out).write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")
    return records, summary


# --- V(N) -----------------------------------------------------------------------------


def log_checkpoints(to: int, count: int = 25, start: int = 10) -> list[int]:
    """About ``count`` integers spaced evenly in log N from ``start`` to ``to``."""
    if to < start:
        raise ValueError(f"need to >= {start}, got {to}")
    grid = np.geomspace(start, to, max(2, count))
    return sorted({int(round(x)) for x in grid} | {to})


def _vertex_count(n: int) -> int:
    return compute_hull(n).v


@dataclass(frozen=True)
class AverageReport:
    to: int
    checkpoints: tuple[tuple[int, float], ...]
    fit: heur.LogFit
    fit_from: int

    def to_json(self) -> dict:
        return {
            "to": self.to,
            "checkpoints": [
                {"N": N, "V": V, "H": heur.H_of_N(N)} for N, V in self.checkpoints
            ],
            "fit": {
                "slope": self.fit.slope,
                "intercept": self.fit.intercept,
                "residual_rms": self.fit.residual_rms,
                "sample_count": self.fit.sample_count,
                "fit_from": self.fit_from,
            },
            "H_slope": 8.0 / 3.0,
            "H_intercept": heur.H_intercept(),
        }


def run_average(
    to: int,
    checkpoints: int = 25,
    out=None,
    workers: int = 1,
    resume: bool = False,
    fit_from: int = 100,
    chunk: int = AVERAGE_CHUNK,
) -> AverageReport:
    """V(N) = mean of v(n) over 2 <= n <= N at log-spaced N, and a fit in log N.

    The running sum is saved every ``chunk`` moduli when ``out`` is given,
    so a sweep towards several million can be resumed.
    """
    if to < 10:
        raise ValueError(f"to must be >= 10, got {to}")
    marks = log_checkpoints(to, checkpoints)
    mark_set = set(marks)
    ckpt = checkpoint_path(out) if out is not None else None
    last, total, seen = 1, 0, 0
    values: dict[int, float] = {}
    if resume and ckpt is not None and ckpt.exists():
        saved = json.loads(ckpt.read_text())
        last, total, seen = saved["last_n"], saved["partial_sum"], saved["count"]
        values = {int(k): v for k, v in saved.get("values", {}).items()}
    with _executor(workers) as pool:
        n0 = last + 1
        while n0 <= to:
            n1 = min(to, n0 + chunk - 1)
            ns = range(n0, n1 + 1)
            vs = pool.map(_vertex_count, ns, chunksize=_chunksize(len(ns), workers))
            for n, v in zip(ns, vs):
                total += v
                seen += 1
                if n in mark_set:
                    values[n] = total / seen
            if ckpt is not None:
                _write_json_atomic(
                    ckpt,
                    {"last_n": n1, "partial_sum": total, "count": seen, "values": {str(k): values[k] for k in sorted(values)}},
                )
            n0 = n1 + 1
    pts = tuple((N, values[N]) for N in marks if N in values)
    fit = heur.least_squares_log_fit([(N, V) for N, V in pts if N >= fit_from])
    report = AverageReport(to, pts, fit, fit_from)
    if out is not None:
        Path(out).write_text(json.dumps(report.to_json(), indent=2, sort_keys=True) + "\n")
    return report
