"""Tiered vector: a fixed-capacity sequence with fast positional insert and delete."""
from __future__ import annotations

import random
from typing import Iterable

import numpy as np

from . import _layout as lay
from . import _ops
from .config import TierConfig, as_config
from .errors import CapacityError, StructureError
from .storage import ProbeCounters, Storage, make_storage

_MESSAGES = {
    _ops.BAD_SIZE: "size outside [0, capacity]",
    _ops.BAD_OFFSET: "offset outside [0, capacity of its node)",
    _ops.BAD_HANDLE: "child handle does not name a node record",
    _ops.LIVE_UNALLOCATED: "leaf holds live elements but has no block",
    _ops.EMPTY_ALLOCATED: "empty leaf still holds a block",
    _ops.BLOCK_COUNT: "allocated block count disagrees with the leaves",
    _ops.TOO_MANY_BLOCKS: "more leaf blocks than n // leaf_width + 2**(tiers - 1)",
    _ops.LIVE_OVERLAP: "live elements are not consecutive in rotated order",
    _ops.SHARED_BLOCK: "leaf block handle invalid or shared",
}


class TieredVec:
    """A sequence stored in a constant-height tree of rotated circular arrays.

    ``variant`` picks the storage layout (see ``storage.VARIANTS``).  With
    ``debug=True`` the structure is validated after every mutation.
    """

    def __init__(self, config: TierConfig | str | Iterable[int], variant: str = "implicit",
                 dtype=np.int64, release_empty: bool = True, debug: bool = False) -> None:
        self.config = as_config(config)
        self.variant = variant
        self.storage: Storage = make_storage(variant, self.config, dtype, release_empty)
        self.debug = debug
        self._S = self.storage.state
        self._ctr = self.storage.ctr
        self._hdr = self._S[lay.HDR]
        self._cast = self.storage.dtype.type

    # -- accessors

    def __len__(self) -> int:
        return int(self._hdr[lay.H_SIZE])

    @property
    def dtype(self) -> np.dtype:
        return self.storage.dtype

    def capacity(self) -> int:
        return self.config.capacity

    def bytes_used(self) -> int:
        return self.storage.bytes_used()

    def counters(self) -> ProbeCounters:
        return self.storage.counters()

    def reset_counters(self) -> None:
        self.storage.reset_counters()

    def __repr__(self) -> str:
        return f"TieredVec({str(self.config)!r}, {self.variant!r}, len={len(self)})"

    def _index(self, i: int, limit: int) -> int:
        i = int(i)
        if not 0 <= i < limit:
            raise IndexError(f"position {i} out of range for length {len(self)}")
        return i

    def _room(self) -> None:
        if len(self) >= self.config.capacity:
            raise CapacityError(f"structure is full (capacity {self.config.capacity})")

    def _check(self) -> None:
        if self.debug:
            problem = self.validate()
            if problem:
                raise StructureError(problem)

    # -- operations

    def get(self, i: int):
        return _ops.get(self._S, self._ctr, self._index(i, len(self)))

    __getitem__ = get

    def set(self, i: int, x):
        old = _ops.set_at(self._S, self._ctr, self._index(i, len(self)), self._cast(x))
        self._check()
        return old

    __setitem__ = set

    def get_range(self, i: int, m: int) -> np.ndarray:
        i, m = int(i), int(m)
        if i < 0 or m < 0 or i + m > len(self):
            raise IndexError(f"range [{i}, {i + m}) out of bounds for length {len(self)}")
        out = np.empty(m, self.dtype)
        _ops.get_range(self._S, self._ctr, i, m, out)
        return out

    def to_array(self) -> np.ndarray:
        return self.get_range(0, len(self))

    def to_list(self) -> list:
        return self.to_array().tolist()

    def __iter__(self):
        return iter(self.to_list())

    def shift(self, e, i: int, m: int):
        """Move ``A[i:i+m]`` one place right, put ``e`` at ``i`` and return the old ``A[i+m]``.

        Low-level: the size is left unchanged.
        """
        i, m = int(i), int(m)
        if i < 0 or m < 0:
            raise IndexError("negative shift arguments")
        if i + m >= self.config.capacity:
            raise CapacityError(f"shift reaches slot {i + m}, capacity is {self.config.capacity}")
        return _ops.shift(self._S, self._ctr, self._cast(e), i, m)

    def insert(self, i: int, x) -> None:
        """Insert ``x`` before position ``i`` (``i == len`` appends)."""
        self._index(i, len(self) + 1)
        self._room()
        _ops.insert(self._S, self._ctr, int(i), self._cast(x))
        self._check()

    def remove(self, i: int):
        old = _ops.remove(self._S, self._ctr, self._index(i, len(self)), self._cast(0))
        self._check()
        return old

    def push_back(self, x) -> None:
        self._room()
        _ops.push_back(self._S, self._ctr, self._cast(x))
        self._check()

    append = push_back

    def push_front(self, x) -> None:
        self._room()
        _ops.push_front(self._S, self._ctr, self._cast(x))
        self._check()

    def extend(self, values) -> None:
        values = np.ascontiguousarray(values, dtype=self.dtype)
        if len(self) + len(values) > self.config.capacity:
            raise CapacityError(
                f"{len(values)} more elements exceed capacity {self.config.capacity} of {self.config}")
        _ops.extend(self._S, self._ctr, values)
        self._check()

    def successor(self, x) -> int | None:
        """Smallest position whose element is >= ``x`` in a sorted sequence, else None."""
        p = _ops.successor(self._S, self._ctr, self._cast(x))
        return None if p < 0 else int(p)

    # -- structure

    def validate(self) -> str | None:
        code, d, idx = _ops.validate(self._S)
        if code == _ops.OK:
            return None
        return f"node ({d}, {idx}): {_MESSAGES[code]}"

    def scramble(self, seed: int) -> None:
        """Give every node whose subtree is full a random offset; the structure stays valid."""
        rng = random.Random(seed)
        _, _, _, cnts = _ops.live_counts(self._S)
        cfg = self.config
        depths, idxs, vals = [], [], []
        for d in range(cfg.tiers):
            cap = cfg.capacities[d]
            start = cfg.level_starts[d]
            for idx in range(cfg.level_sizes[d]):
                if cnts[start + idx] == cap:
                    depths.append(d)
                    idxs.append(idx)
                    vals.append(rng.randrange(cap))
        if depths:
            _ops.poke_offsets(self._S, np.array(depths, np.int64), np.array(idxs, np.int64),
                              np.array(vals, np.int64))
        self._check()

    def poke_offset(self, depth: int, index: int, value: int) -> None:
        """Overwrite one offset without any checks (fault injection in tests)."""
        _ops.write_offset_at(self._S, lay.no_count(), int(depth), int(index), int(value))

    def locate(self, i: int) -> tuple[int, int]:
        """(leaf index, physical slot) currently holding position ``i``."""
        leaf, slot = _ops.locate(self._S, self._index(i, len(self)))
        return int(leaf), int(slot)

    def peek_slot(self, p: int):
        """Raw content of logical slot ``p`` of the root, live or not; None if its leaf has no block."""
        ok, value = _ops.peek_slot(self._S, self._index(p, self.config.capacity))
        return value if ok else None

    def dump(self) -> str:
        """Text picture of the tree: offset and live count per node, leaf slots in physical order."""
        refs, offs, starts, cnts = _ops.live_counts(self._S)
        cfg = self.config
        lines = [f"{cfg} {self.variant} n={len(self)}"]
        L = cfg.tiers

        def visit(d: int, idx: int) -> None:
            slot = cfg.level_starts[d] + idx
            head = f"{'  ' * d}[{d}:{idx}] off={offs[slot]} live={cnts[slot]}"
            if d < L - 1:
                lines.append(head)
                for k in range(cfg.widths[d]):
                    visit(d + 1, idx * cfg.widths[d] + k)
                return
            if not self.storage.is_allocated(idx):
                lines.append(head + " (no block)")
                return
            w = cfg.leaf_width
            live = {(starts[slot] + offs[slot] + t) % w for t in range(cnts[slot])}
            base = _ops.leaf_block(self._S, idx, lay.PEEK)
            el = self._S[lay.ELEMS]
            cells = [str(el[base + s]) if s in live else "." for s in range(w)]
            lines.append(head + " | " + " ".join(cells))

        visit(0, 0)
        return "\n".join(lines)
