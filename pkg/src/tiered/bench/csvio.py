"""CSV emission and parse-back for benchmark results.

Rows that did not produce a timing carry ``unsupported`` or ``error`` in the
``ns_per_op`` column.  Extended mode appends ns_min, ns_max and message.
"""
from __future__ import annotations

import csv
import io
from pathlib import Path
from typing import IO, Iterable

from .workloads import BenchResult

HEADER = ("structure", "workload", "n", "config", "ops", "reps", "ns_per_op", "bytes_used", "probes_per_op")
EXTENDED = HEADER + ("ns_min", "ns_max", "message")


def _num(x) -> str:
    return "" if x is None else repr(x)


def to_row(r: BenchResult, extended: bool = False) -> list[str]:
    ns = _num(r.ns_per_op) if r.status == "ok" else r.status
    row = [r.structure, r.workload, str(r.n), r.config, str(r.ops), str(r.reps), ns,
           _num(r.bytes_used), _num(r.probes_per_op)]
    if extended:
        row += [_num(r.ns_min), _num(r.ns_max), r.message]
    return row


def write_csv(results: Iterable[BenchResult], out: IO[str], extended: bool = False) -> None:
    w = csv.writer(out, lineterminator="\n")
    w.writerow(EXTENDED if extended else HEADER)
    for r in results:
        w.writerow(to_row(r, extended))


def emit_csv(results: Iterable[BenchResult], destination: str | Path | IO[str], extended: bool = False) -> None:
    """Write results in input order to a path or an open text stream."""
    if hasattr(destination, "write"):
        write_csv(results, destination, extended)
        return
    try:
        with open(destination, "w", newline="") as fh:
            write_csv(results, fh, extended)
    except OSError as exc:
        raise OSError(f"cannot write CSV to {destination}: {exc.strerror or exc}") from exc


def to_text(results: Iterable[BenchResult], extended: bool = False) -> str:
    buf = io.StringIO()
    write_csv(results, buf, extended)
    return buf.getvalue()


def _opt(text: str, cast):
    return None if text == "" else cast(text)


def parse_csv(text: str) -> list[BenchResult]:
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or tuple(rows[0][: len(HEADER)]) != HEADER:
        raise ValueError("missing or unexpected CSV header")
    extended = len(rows[0]) == len(EXTENDED)
    out = []
    for row in rows[1:]:
        ns = row[6]
        status = ns if ns in ("unsupported", "error") else "ok"
        r = BenchResult(row[0], row[1], int(row[2]), row[3], int(row[4]), int(row[5]),
                        None if status != "ok" else _opt(ns, float),
                        _opt(row[7], int), _opt(row[8], float), status=status)
        if extended:
            r.ns_min, r.ns_max, r.message = _opt(row[9], float), _opt(row[10], float), row[11]
        out.append(r)
    return out
