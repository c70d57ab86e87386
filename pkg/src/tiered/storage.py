"""The six physical layouts behind one storage contract.

Each storage owns a state tuple of numpy arrays consumed by the compiled
kernels in ``_ops``; the subclasses only differ in how they build it and in
how they account for their bytes.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import ClassVar

import numpy as np

from . import _layout as lay
from . import _ops
from .config import PACKED_LEAF_LIMIT, NodeCoord, TierConfig, as_config, field_width, node_count
from .errors import ConfigError, ContractError

_I64 = np.int64
_EMPTY_I = np.zeros(1, _I64)


@dataclass(frozen=True)
class ProbeCounters:
    offset_reads: int = 0
    offset_writes: int = 0
    child_handle_reads: int = 0
    leaf_handle_reads: int = 0
    element_reads: int = 0
    element_writes: int = 0
    colocated_pair_reads: int = 0
    elements_physically_moved: int = 0

    @classmethod
    def from_array(cls, ctr: np.ndarray) -> "ProbeCounters":
        c = [int(v) for v in ctr]
        return cls(
            offset_reads=c[lay.C_OFF_R],
            offset_writes=c[lay.C_OFF_W],
            child_handle_reads=c[lay.C_CHILD],
            leaf_handle_reads=c[lay.C_LEAFH],
            element_reads=c[lay.C_EL_R],
            element_writes=c[lay.C_EL_W],
            colocated_pair_reads=c[lay.C_PAIR],
            elements_physically_moved=c[lay.C_MOVED],
        )

    @property
    def reads(self) -> int:
        """Counted read probes (a colocated pair counts as one touch)."""
        return (self.offset_reads + self.child_handle_reads + self.leaf_handle_reads
                + self.element_reads + self.colocated_pair_reads)

    @property
    def total(self) -> int:
        return self.reads + self.offset_writes + self.element_writes

    def as_dict(self) -> dict[str, int]:
        return asdict(self)


def _geometry(config: TierConfig) -> np.ndarray:
    L = config.tiers
    geo = np.zeros((lay.GEO_ROWS, L), _I64)
    wstart = 0
    for d in range(L):
        cap = config.capacities[d]
        geo[lay.G_W, d] = config.widths[d]
        geo[lay.G_CAP, d] = cap
        geo[lay.G_MASK, d] = cap - 1
        geo[lay.G_SH, d] = cap.bit_length() - 1
        geo[lay.G_LSTART, d] = config.level_starts[d]
        geo[lay.G_LSIZE, d] = config.level_sizes[d]
        fw = field_width(cap)
        geo[lay.G_FW, d] = fw
        geo[lay.G_WSTART, d] = wstart
        wstart += -(-config.level_sizes[d] * fw // 64)
    return geo


class Storage:
    """Common state and the storage contract; subclasses fill in the layout arrays."""

    layout: ClassVar[int]
    name: ClassVar[str]
    lazy: ClassVar[bool] = True

    def __init__(self, config, dtype=np.int64, release_empty: bool = True) -> None:
        self.config = as_config(config)
        self.dtype = np.dtype(dtype)
        self.release_empty = release_empty
        self._check()
        cfg = self.config
        hdr = np.zeros(lay.HDR_LEN, _I64)
        hdr[lay.H_LAYOUT] = self.layout
        hdr[lay.H_RELEASE] = int(release_empty)
        hdr[lay.H_TIERS] = cfg.tiers
        hdr[lay.H_POW2] = int(cfg.pow2)
        nleaves = cfg.leaf_count
        arrays = {
            "offs": _EMPTY_I,
            "bits": np.zeros(1, np.uint64),
            "nodes": _EMPTY_I,
            "lh": _EMPTY_I,
            "lword": np.zeros(1, np.uint64),
            "loff": _EMPTY_I,
            "free": _EMPTY_I,
        }
        if self.lazy:
            arrays["free"] = np.arange(nleaves - 1, -1, -1, dtype=_I64)
            hdr[lay.H_FREE_TOP] = nleaves
        arrays.update(self._build())
        # calloc'd: pages of unallocated leaves are never touched
        elems = np.zeros(nleaves * cfg.leaf_width, self.dtype)
        stack_rows = sum(w + 1 for w in cfg.widths[:-1]) + 4
        self.state = (
            hdr, _geometry(cfg), arrays["offs"], arrays["bits"], arrays["nodes"],
            arrays["lh"], arrays["lword"], arrays["loff"], elems, arrays["free"],
            np.zeros((stack_rows, 6), _I64), lay.no_count(),
            lay.marker(self.layout, cfg.pow2),
        )
        self.ctr = np.zeros(lay.N_COUNTERS, _I64)

    def _check(self) -> None:
        pass

    def _build(self) -> dict[str, np.ndarray]:
        raise NotImplementedError

    # -- contract

    def _coord(self, v: NodeCoord | tuple[int, int]) -> NodeCoord:
        v = NodeCoord(*v)
        if not (0 <= v.depth < self.config.tiers and 0 <= v.index < self.config.level_sizes[v.depth]):
            raise ConfigError(f"{v} is not a node of {self.config}")
        return v

    def read_offset(self, v) -> int:
        v = self._coord(v)
        return int(_ops.read_offset_at(self.state, self.ctr, v.depth, v.index))

    def write_offset(self, v, x: int) -> None:
        v = self._coord(v)
        if not 0 <= x < self.config.capacities[v.depth]:
            raise ConfigError(f"offset {x} out of range for depth {v.depth}")
        _ops.write_offset_at(self.state, self.ctr, v.depth, v.index, x)

    def _leaf(self, leaf: int, slot: int = 0) -> None:
        if not 0 <= leaf < self.config.leaf_count:
            raise ConfigError(f"no leaf {leaf}")
        if not 0 <= slot < self.config.leaf_width:
            raise ConfigError(f"no slot {slot} in a leaf of width {self.config.leaf_width}")

    def read_element(self, leaf: int, slot: int):
        self._leaf(leaf, slot)
        return _ops.read_element_at(self.state, self.ctr, leaf, slot)

    def write_element(self, leaf: int, slot: int, e) -> None:
        self._leaf(leaf, slot)
        _ops.write_element_at(self.state, self.ctr, leaf, slot, self.dtype.type(e))

    def ensure_leaf(self, leaf: int) -> None:
        self._leaf(leaf)
        _ops.leaf_block(self.state, leaf, lay.WRITE)

    def release_leaf(self, leaf: int) -> None:
        self._leaf(leaf)
        if not self.lazy:
            return
        cnts = _ops.live_counts(self.state)[3]
        if cnts[self.config.level_starts[-1] + leaf]:
            raise ContractError(f"leaf {leaf} still holds live elements")
        _ops.release_at(self.state, leaf)

    def is_allocated(self, leaf: int) -> bool:
        self._leaf(leaf)
        return bool(_ops.leaf_block(self.state, leaf, lay.PEEK) >= 0)

    def allocated_blocks(self) -> int:
        if not self.lazy:
            return self.config.leaf_count
        return int(self.state[lay.HDR][lay.H_NALLOC])

    def counters(self) -> ProbeCounters:
        return ProbeCounters.from_array(self.ctr)

    def reset_counters(self) -> None:
        self.ctr[:] = 0

    def _block_bytes(self) -> int:
        return self.allocated_blocks() * self.config.leaf_width * self.dtype.itemsize

    def _header_bytes(self) -> int:
        return self.state[lay.HDR].nbytes + self.state[lay.GEO].nbytes

    def bytes_used(self) -> int:
        raise NotImplementedError

    def offset_bits(self) -> int:
        """Bits of storage holding node offsets (all levels, root included)."""
        return 64 * node_count(self.config)


class ImplicitStorage(Storage):
    layout = lay.IMPLICIT
    name = "implicit"
    lazy = False

    def _build(self):
        return {"offs": np.zeros(node_count(self.config), _I64)}

    def bytes_used(self) -> int:
        S = self.state
        return self._header_bytes() + S[lay.OFFS].nbytes + S[lay.ELEMS].nbytes


class PackedImplicitStorage(Storage):
    layout = lay.PACKED_IMPLICIT
    name = "packed-implicit"
    lazy = False

    def _build(self):
        words = sum(-(-size * field_width(cap) // 64)
                    for size, cap in zip(self.config.level_sizes, self.config.capacities))
        return {"bits": np.zeros(words, np.uint64)}

    def offset_bits(self) -> int:
        return sum(size * field_width(cap)
                   for size, cap in zip(self.config.level_sizes, self.config.capacities))

    def bytes_used(self) -> int:
        S = self.state
        return self._header_bytes() + S[lay.BITS].nbytes + S[lay.ELEMS].nbytes


class LazyStorage(Storage):
    layout = lay.LAZY
    name = "lazy"

    def _build(self):
        return {
            "offs": np.zeros(node_count(self.config), _I64),
            "lh": np.full(self.config.leaf_count, -1, _I64),
        }

    def bytes_used(self) -> int:
        S = self.state
        return (self._header_bytes() + S[lay.OFFS].nbytes + S[lay.LH].nbytes
                + S[lay.FREE].nbytes + self._block_bytes())


class PackedLazyStorage(Storage):
    layout = lay.PACKED_LAZY
    name = "packed-lazy"

    def _check(self) -> None:
        if self.config.leaf_width > PACKED_LEAF_LIMIT:
            raise ConfigError(
                f"packed-lazy stores leaf offsets in 16 bits; leaf width {self.config.leaf_width} is too large")

    def _build(self):
        cfg = self.config
        return {
            "offs": np.zeros(cfg.level_starts[-1], _I64),
            "lword": np.full(cfg.leaf_count, lay.NULL48, np.uint64),
        }

    def offset_bits(self) -> int:
        cfg = self.config
        return 64 * cfg.level_starts[-1] + 16 * cfg.leaf_count

    def bytes_used(self) -> int:
        S = self.state
        return (self._header_bytes() + S[lay.OFFS].nbytes + S[lay.LWORD].nbytes
                + S[lay.FREE].nbytes + self._block_bytes())


def _record_starts(config: TierConfig, size_of) -> tuple[list[np.ndarray], int]:
    """Level-ordered record starts for the internal levels of a pointer layout."""
    starts = []
    pos = 0
    for d in range(config.tiers - 1):
        rec = size_of(config.widths[d])
        n = config.level_sizes[d]
        starts.append(pos + rec * np.arange(n, dtype=_I64))
        pos += rec * n
    return starts, pos


class OriginalStorage(Storage):
    """Records of [offset, child handles...]; leaf records are arena blocks with a separate offset cell."""

    layout = lay.ORIGINAL
    name = "original"

    def _build(self):
        cfg = self.config
        starts, total = _record_starts(cfg, lambda w: 1 + w)
        nodes = np.zeros(total, _I64)
        for d in range(cfg.tiers - 1):
            w = cfg.widths[d]
            slots = starts[d][:, None] + 1 + np.arange(w, dtype=_I64)[None, :]
            if d + 2 < cfg.tiers:
                nodes[slots.ravel()] = starts[d + 1]
            else:
                nodes[slots.ravel()] = -1
        return {"nodes": nodes, "loff": np.zeros(cfg.leaf_count, _I64)}

    def offset_bits(self) -> int:
        return 64 * (self.config.level_starts[-1] + self.allocated_blocks())

    def bytes_used(self) -> int:
        S = self.state
        leaf_records = self.allocated_blocks() * S[lay.LOFF].itemsize
        return (self._header_bytes() + S[lay.NODES].nbytes + S[lay.FREE].nbytes
                + leaf_records + self._block_bytes())


class OptimizedOriginalStorage(Storage):
    """Records of w adjacent (child offset, child handle) pairs; root offset in the header."""

    layout = lay.OPT_ORIGINAL
    name = "opt-original"

    def _build(self):
        cfg = self.config
        starts, total = _record_starts(cfg, lambda w: 2 * w)
        nodes = np.zeros(total, _I64)
        for d in range(cfg.tiers - 1):
            w = cfg.widths[d]
            slots = starts[d][:, None] + 2 * np.arange(w, dtype=_I64)[None, :] + 1
            if d + 2 < cfg.tiers:
                nodes[slots.ravel()] = starts[d + 1]
            else:
                nodes[slots.ravel()] = -1
        return {"nodes": nodes}

    def offset_bits(self) -> int:
        return 64 * (node_count(self.config) - 1)

    def bytes_used(self) -> int:
        S = self.state
        return self._header_bytes() + S[lay.NODES].nbytes + S[lay.FREE].nbytes + self._block_bytes()


STORAGES: dict[str, type[Storage]] = {
    cls.name: cls
    for cls in (OriginalStorage, OptimizedOriginalStorage, ImplicitStorage,
                PackedImplicitStorage, LazyStorage, PackedLazyStorage)
}
VARIANTS: tuple[str, ...] = tuple(STORAGES)


def make_storage(variant: str, config, dtype=np.int64, release_empty: bool = True) -> Storage:
    try:
        cls = STORAGES[variant]
    except KeyError:
        raise ConfigError(f"unknown variant {variant!r}; expected one of {', '.join(VARIANTS)}") from None
    return cls(config, dtype=dtype, release_empty=release_empty)
