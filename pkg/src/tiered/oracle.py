"""Naive reference sequence and the harnesses that check tiered vectors against it."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

from .config import as_config
from .positions import PositionStream
from .vector import TieredVec

OP_KINDS = ("insert", "remove", "set", "get", "get_range", "push_front", "push_back")
_MUTATING = {"insert", "remove", "set", "push_front", "push_back"}
# cumulative weights of the random op mix, in OP_KINDS order
_MIX = (25, 45, 55, 75, 85, 92, 100)
VALUE_RANGE = 1 << 20


class OracleSeq:
    """A plain list with definitional semantics; the fixed point of trust."""

    def __init__(self, items: Sequence = ()) -> None:
        self.items = list(items)

    def __len__(self) -> int:
        return len(self.items)

    def _check(self, i: int, limit: int) -> None:
        if not 0 <= i < limit:
            raise IndexError(f"position {i} out of range for length {len(self.items)}")

    def get(self, i: int):
        self._check(i, len(self.items))
        return self.items[i]

    def set(self, i: int, x):
        self._check(i, len(self.items))
        old = self.items[i]
        self.items[i] = x
        return old

    def insert(self, i: int, x) -> None:
        self._check(i, len(self.items) + 1)
        self.items.insert(i, x)

    def remove(self, i: int):
        self._check(i, len(self.items))
        return self.items.pop(i)

    def push_back(self, x) -> None:
        self.items.append(x)

    def push_front(self, x) -> None:
        self.items.insert(0, x)

    def get_range(self, i: int, m: int) -> list:
        if i < 0 or m < 0 or i + m > len(self.items):
            raise IndexError(f"range [{i}, {i + m}) out of bounds")
        return self.items[i:i + m]

    def successor(self, x):
        for p, y in enumerate(self.items):
            if y >= x:
                return p
        return None

    def to_list(self) -> list:
        return list(self.items)


@dataclass
class OpTrace:
    """A replayable op sequence; every position is valid at its point of replay."""

    seed: int
    ops: list[tuple[str, tuple[int, ...]]] = field(default_factory=list)

    @classmethod
    def generate(cls, seed: int, op_count: int, capacity: int, range_len: int = 64) -> "OpTrace":
        rng = PositionStream(seed)
        ops: list[tuple[str, tuple[int, ...]]] = []
        n = 0
        for _ in range(op_count):
            roll = rng.next(100)
            kind = next(k for k, edge in zip(OP_KINDS, _MIX) if roll < edge)
            if kind in ("remove", "set", "get", "get_range") and n == 0:
                kind = "push_back"
            if kind in ("insert", "push_front", "push_back") and n >= capacity:
                kind = "remove"
            if kind == "insert":
                ops.append((kind, (rng.next(n + 1), rng.next(VALUE_RANGE))))
                n += 1
            elif kind == "remove":
                ops.append((kind, (rng.next(n),)))
                n -= 1
            elif kind == "set":
                ops.append((kind, (rng.next(n), rng.next(VALUE_RANGE))))
            elif kind == "get":
                ops.append((kind, (rng.next(n),)))
            elif kind == "get_range":
                i = rng.next(n)
                ops.append((kind, (i, rng.next(min(range_len, n - i) + 1))))
            else:
                ops.append((kind, (rng.next(VALUE_RANGE),)))
                n += 1
        return cls(seed, ops)

    def to_text(self) -> str:
        lines = [f"# seed {self.seed}"]
        lines += [" ".join([kind, *map(str, args)]) for kind, args in self.ops]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "OpTrace":
        seed = 0
        ops = []
        for line in text.splitlines():
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                parts = line[1:].split()
                if len(parts) == 2 and parts[0] == "seed":
                    seed = int(parts[1])
                continue
            kind, *args = line.split()
            if kind not in OP_KINDS:
                raise ValueError(f"unknown op {kind!r}")
            ops.append((kind, tuple(int(a) for a in args)))
        return cls(seed, ops)


def apply_op(target, kind: str, args: tuple[int, ...]):
    """Run one trace op on an OracleSeq or a TieredVec and return a comparable result."""
    if kind == "get_range":
        return [int(v) for v in target.get_range(*args)]
    result = getattr(target, kind)(*args)
    return None if result is None else int(result)


@dataclass
class Divergence:
    step: int
    op: tuple[str, tuple[int, ...]] | None
    reason: str
    expected: object = None
    actual: object = None
    oracle_readout: list = field(default_factory=list)
    tiered_readout: list = field(default_factory=list)


@dataclass
class DiffReport:
    variant: str
    config: str
    seed: int
    ops_run: int = 0
    comparisons: int = 0
    divergence: Divergence | None = None

    @property
    def ok(self) -> bool:
        return self.divergence is None


def differential_run(seed: int, op_count: int, config, variant: str, readout_every: int = 1000,
                     check: bool = True, fault: Callable[[TieredVec], None] | None = None,
                     fault_at: int = -1, trace: OpTrace | None = None) -> DiffReport:
    """Replay a random trace against the oracle and a TieredVec, stopping at the first divergence.

    ``fault`` is called on the tiered side just before op ``fault_at`` (test hook).
    """
    config = as_config(config)
    tv = TieredVec(config, variant)
    oracle = OracleSeq()
    if trace is None:
        trace = OpTrace.generate(seed, op_count, config.capacity)
    report = DiffReport(variant, str(config), seed)

    def readouts(step, op, reason, expected=None, actual=None) -> DiffReport:
        report.divergence = Divergence(step, op, reason, expected, actual, oracle.to_list(), tv.to_list())
        return report

    for step, (kind, args) in enumerate(trace.ops):
        if step == fault_at and fault is not None:
            fault(tv)
        expected = apply_op(oracle, kind, args)
        try:
            actual = apply_op(tv, kind, args)
        except Exception as exc:  # report, do not crash the harness
            return readouts(step, (kind, args), f"raised {exc!r}", expected)
        report.ops_run += 1
        report.comparisons += 1
        if actual != expected:
            return readouts(step, (kind, args), "result differs", expected, actual)
        if check and kind in _MUTATING:
            problem = tv.validate()
            if problem:
                return readouts(step, (kind, args), f"invalid structure: {problem}")
        if readout_every and (step + 1) % readout_every == 0:
            report.comparisons += 1
            if len(tv) != len(oracle) or tv.to_list() != oracle.items:
                return readouts(step, (kind, args), "readout differs")
    if trace.ops:
        report.comparisons += 1
        if tv.to_list() != oracle.items:
            return readouts(len(trace.ops) - 1, None, "final readout differs")
    return report


def brute_shift_oracle(flat: Sequence, e, i: int, m: int) -> tuple[object, list]:
    """Literal array shift: ``A[i+1:i+m+1] = A[i:i+m]``, ``A[i] = e``; returns (old A[i+m], new A)."""
    if i < 0 or m < 0 or i + m >= len(flat):
        raise IndexError("shift must leave slot i + m inside the array")
    a = list(flat)
    old = a[i + m]
    a[i + 1:i + m + 1] = a[i:i + m]
    a[i] = e
    return old, a


def root_slots(tv: TieredVec) -> list:
    """Every logical root slot, live or not (``None`` where the leaf has no block)."""
    return [None if (v := tv.peek_slot(p)) is None else int(v) for p in range(tv.capacity())]


__all__ = [
    "OracleSeq", "OpTrace", "DiffReport", "Divergence", "differential_run",
    "brute_shift_oracle", "root_slots", "apply_op", "OP_KINDS",
]
