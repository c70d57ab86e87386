"""Workload specs, preload and the timed runner for tiered vectors and both baselines."""
from __future__ import annotations

import sys
import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from sortedcontainers import SortedList

from .. import _layout as lay
from ..config import TierConfig, as_config
from ..errors import CapacityError
from ..positions import PositionStream, seed_state
from ..storage import VARIANTS, ProbeCounters
from ..vector import TieredVec
from . import kernels as K

KINDS = ("access", "dd-access", "range-access", "insert", "insert-end", "delete", "successor", "memory")
BASELINES = ("array", "multiset")
STRUCTURES = VARIANTS + BASELINES
ELEMENT = np.int32

DEFAULT_N = 10**6
DEFAULT_RANGE = 10_000


def default_ops(kind: str, structure: str) -> int:
    """Desk-scale op counts: 10^6 reads, 10^4 edits (10^3 on the contiguous array)."""
    if kind == "memory":
        return 0
    if kind in ("insert", "delete"):
        return 10**3 if structure == "array" else 10**4
    if kind == "insert-end":
        return 10**4
    return 10**6


@dataclass
class WorkloadSpec:
    kind: str
    structure: str = "implicit"
    config: TierConfig = field(default_factory=lambda: TierConfig((32, 32, 16, 128)))
    n: int = DEFAULT_N
    ops: int | None = None
    range_len: int = DEFAULT_RANGE
    seed: int = 1
    reps: int = 10
    scramble: bool = False
    probes: bool = True

    def __post_init__(self) -> None:
        self.config = as_config(self.config)
        if self.kind not in KINDS:
            raise ValueError(f"unknown workload {self.kind!r}; choose from {', '.join(KINDS)}")
        if self.structure not in STRUCTURES:
            raise ValueError(f"unknown structure {self.structure!r}; choose from {', '.join(STRUCTURES)}")
        if self.ops is None:
            self.ops = default_ops(self.kind, self.structure)
        if self.reps < 1:
            raise ValueError("reps must be >= 1")
        if self.kind != "memory" and self.ops < 1:
            raise ValueError("ops must be >= 1")
        if self.kind == "range-access" and not 1 <= self.range_len <= self.n:
            raise ValueError(f"range_len must lie in [1, n], got {self.range_len}")


@dataclass
class BenchResult:
    structure: str
    workload: str
    n: int
    config: str
    ops: int
    reps: int
    ns_per_op: float | None = None
    bytes_used: int | None = None
    probes_per_op: float | None = None
    ns_min: float | None = None
    ns_max: float | None = None
    status: str = "ok"
    message: str = ""


def _state(seed: int) -> np.uint64:
    return np.uint64(seed_state(seed))


# -- preload


def preload(tv: TieredVec, n: int, scramble_seed: int | None = None) -> TieredVec:
    """Append 0..n-1 (uncounted), optionally scrambling full nodes afterwards."""
    if n > tv.capacity() - len(tv):
        raise CapacityError(
            f"cannot preload {n} elements into {tv.config} (capacity {tv.capacity()}); "
            f"use a config with capacity >= {n}, e.g. {scaled_default(n)}")
    K.tv_extend(tv._S, lay.no_count(), n)
    if scramble_seed is not None:
        tv.scramble(scramble_seed)
    return tv


def scaled_default(n: int) -> str:
    from .sweeps import scale_config
    return str(scale_config(TierConfig((64, 64, 64, 512)), n))


def _array(n: int, extra: int) -> np.ndarray:
    arr = np.empty(n + extra, ELEMENT)
    K.arr_extend(arr, n)
    return arr


# -- one repetition per structure family; each returns (elapsed seconds, ops counted)


def _tiered_rep(spec: WorkloadSpec, ctr: np.ndarray) -> tuple[float, int, TieredVec]:
    tv = TieredVec(spec.config, spec.structure, dtype=ELEMENT)
    preload(tv, spec.n, spec.seed if spec.scramble else None)
    S, st, ops = tv._S, _state(spec.seed), spec.ops
    kind = spec.kind
    if kind == "range-access":
        m = spec.range_len
        out = np.empty(m, ELEMENT)
        t0 = time.perf_counter()
        K.tv_range(S, ctr, ops, st, m, out)
        return time.perf_counter() - t0, (ops // m) * m, tv
    fn: Callable = {
        "access": K.tv_access, "dd-access": K.tv_dd_access, "insert": K.tv_insert,
        "insert-end": K.tv_insert_end, "successor": K.tv_successor,
    }.get(kind)
    if kind == "delete":
        fill = ELEMENT(0)
        t0 = time.perf_counter()
        K.tv_delete(S, ctr, ops, st, fill)
    else:
        t0 = time.perf_counter()
        fn(S, ctr, ops, st)
    return time.perf_counter() - t0, ops, tv


def _array_rep(spec: WorkloadSpec) -> tuple[float, int, np.ndarray]:
    kind, n, ops, st = spec.kind, spec.n, spec.ops, _state(spec.seed)
    arr = _array(n, ops if kind in ("insert", "insert-end") else 0)
    if kind == "range-access":
        m = spec.range_len
        out = np.empty(m, ELEMENT)
        t0 = time.perf_counter()
        K.arr_range(arr, n, ops, st, m, out)
        return time.perf_counter() - t0, (ops // m) * m, arr
    fn = {
        "access": K.arr_access, "dd-access": K.arr_dd_access, "insert": K.arr_insert,
        "insert-end": K.arr_insert_end, "delete": K.arr_delete, "successor": K.arr_successor,
    }[kind]
    t0 = time.perf_counter()
    fn(arr, n, ops, st)
    return time.perf_counter() - t0, ops, arr


def multiset_bytes(sl: SortedList) -> int:
    """Best effort: sublist and index containers plus one boxed int per element."""
    total = sys.getsizeof(sl) + sys.getsizeof(sl._lists) + sys.getsizeof(sl._maxes) + sys.getsizeof(sl._index)
    total += sum(sys.getsizeof(s) for s in sl._lists)
    return total + sum(sys.getsizeof(x) for x in sl._maxes) + len(sl) * sys.getsizeof(1 << 20)


def _multiset_rep(spec: WorkloadSpec) -> tuple[float, int, SortedList]:
    """Value-keyed analogues: a read is a successor lookup of a drawn value."""
    kind, n, ops = spec.kind, spec.n, spec.ops
    sl = SortedList(range(n))
    pos = PositionStream(spec.seed)
    draw = pos.next
    acc = 0
    t0 = time.perf_counter()
    if kind in ("access", "successor"):
        for _ in range(ops):
            acc += sl.bisect_left(draw(n))
    elif kind == "dd-access":
        x = 0
        for _ in range(ops):
            k = sl.bisect_left((x + draw(n)) % n)
            x = sl[k]
            acc += x
    elif kind == "range-access":
        m = spec.range_len
        for _ in range(ops // m):
            k = sl.bisect_left(draw(n - m + 1))
            for x in sl.islice(k, k + m):
                acc += x
        ops = (ops // m) * m
    elif kind == "insert":
        for t in range(ops):
            sl.add(draw(n + t + 1))
    elif kind == "insert-end":
        for t in range(ops):
            sl.add(n + t)
    elif kind == "delete":
        for t in range(ops):
            del sl[draw(n - t)]
    return time.perf_counter() - t0, ops, sl


def _unsupported(spec: WorkloadSpec) -> str | None:
    if spec.scramble and spec.structure in BASELINES:
        return "scramble applies to tiered structures only"
    if spec.scramble and spec.kind == "successor":
        return "successor needs sorted content; scramble reorders it"
    if spec.kind == "delete" and spec.ops > spec.n:
        return f"cannot delete {spec.ops} of {spec.n} elements"
    return None


def run_workload(spec: WorkloadSpec) -> BenchResult:
    """Mean ns/op over ``reps`` timed repetitions after one untimed warm-up.

    Mutating workloads start every repetition from a fresh preload.  Probe
    counts come from a separate counted run so the timed loops carry no
    counter updates.  Range access reports ns and probes per element read.
    """
    cfg = str(spec.config) if spec.structure in VARIANTS else ""
    res = BenchResult(spec.structure, spec.kind, spec.n, cfg, spec.ops, spec.reps)
    reason = _unsupported(spec)
    if reason:
        res.status, res.message = "unsupported", reason
        return res
    try:
        return _run(spec, res)
    except (CapacityError, ValueError, MemoryError) as exc:
        res.status, res.message = "error", str(exc)
        return res


def _run(spec: WorkloadSpec, res: BenchResult) -> BenchResult:
    tiered = spec.structure in VARIANTS
    if tiered and spec.n + (spec.ops if spec.kind in ("insert", "insert-end") else 0) > spec.config.capacity:
        raise CapacityError(
            f"{spec.kind} needs capacity {spec.n + spec.ops}, {spec.config} has {spec.config.capacity}")
    if spec.kind == "memory":
        res.ops, res.reps = 0, 1
        if tiered:
            tv = preload(TieredVec(spec.config, spec.structure, dtype=ELEMENT), spec.n)
            res.bytes_used = tv.bytes_used()
        elif spec.structure == "array":
            res.bytes_used = _array(spec.n, 0).nbytes
        else:
            res.bytes_used = multiset_bytes(SortedList(range(spec.n)))
        return res

    if tiered:
        rep = lambda: _tiered_rep(spec, lay.no_count())
    elif spec.structure == "array":
        rep = lambda: _array_rep(spec)
    else:
        rep = lambda: _multiset_rep(spec)
    rep()  # warm-up, also triggers compilation
    times = []
    counted = spec.ops
    for _ in range(spec.reps):
        dt, counted, obj = rep()
        times.append(dt * 1e9 / counted)
    res.ns_per_op = float(np.mean(times))
    res.ns_min, res.ns_max = float(min(times)), float(max(times))
    if tiered:
        res.bytes_used = obj.bytes_used()
        if spec.probes:
            ctr = np.zeros(lay.N_COUNTERS, np.int64)
            _, counted, _ = _tiered_rep(spec, ctr)
            res.probes_per_op = ProbeCounters.from_array(ctr).total / counted
    elif spec.structure == "array":
        res.bytes_used = obj.nbytes
    else:
        res.bytes_used = multiset_bytes(obj)
    return res


def best_time(fn: Callable[[], object], reps: int = 5) -> float:
    """Fastest of ``reps`` calls in seconds, after one warm-up call."""
    fn()
    best = float("inf")
    for _ in range(reps):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best
