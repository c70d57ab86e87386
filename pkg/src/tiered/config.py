"""Index arithmetic for the tier tree.

Depth 0 is the root, depth ``tiers - 1`` is the leaf level.  ``widths[d]`` is
the out-degree of a node at depth ``d`` for internal depths and the number of
element slots per leaf for the last depth.  Flat layouts number nodes
left-to-right, level by level, starting with the root at slot 0.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, NamedTuple, Sequence

from .errors import ConfigError

INDEX_LIMIT = 1 << 62
PACKED_LEAF_LIMIT = 1 << 16


def _is_pow2(x: int) -> bool:
    return x > 0 and x & (x - 1) == 0


@dataclass(frozen=True)
class TierConfig:
    widths: tuple[int, ...]

    def __post_init__(self) -> None:
        widths = tuple(int(w) for w in self.widths)
        object.__setattr__(self, "widths", widths)
        if len(widths) < 2:
            raise ConfigError(f"need at least 2 tiers, got {len(widths)}")
        if any(w < 2 for w in widths):
            raise ConfigError(f"every width must be >= 2: {self}")
        if math.prod(widths) >= INDEX_LIMIT:
            raise ConfigError(f"capacity of {self} overflows the index type")

    @classmethod
    def parse(cls, text: str) -> "TierConfig":
        """Parse a dash-separated width string such as ``"64-64-64-512"``."""
        try:
            widths = tuple(int(part) for part in text.strip().split("-"))
        except ValueError:
            raise ConfigError(f"malformed config string {text!r}") from None
        return cls(widths)

    def __str__(self) -> str:
        return "-".join(map(str, self.widths))

    @property
    def tiers(self) -> int:
        return len(self.widths)

    @property
    def leaf_width(self) -> int:
        return self.widths[-1]

    @cached_property
    def capacities(self) -> tuple[int, ...]:
        caps = [1] * self.tiers
        acc = 1
        for d in range(self.tiers - 1, -1, -1):
            acc *= self.widths[d]
            caps[d] = acc
        return tuple(caps)

    @property
    def capacity(self) -> int:
        return self.capacities[0]

    @cached_property
    def level_sizes(self) -> tuple[int, ...]:
        sizes = [1]
        for w in self.widths[:-1]:
            sizes.append(sizes[-1] * w)
        return tuple(sizes)

    @cached_property
    def level_starts(self) -> tuple[int, ...]:
        starts = [0]
        for size in self.level_sizes[:-1]:
            starts.append(starts[-1] + size)
        return tuple(starts)

    @property
    def leaf_count(self) -> int:
        return self.level_sizes[-1]

    @property
    def pow2(self) -> bool:
        """True when every width is a power of two (mask/shift fast path)."""
        return all(_is_pow2(w) for w in self.widths)


class NodeCoord(NamedTuple):
    depth: int
    index: int


def _check_depth(config: TierConfig, depth: int) -> None:
    if not 0 <= depth < config.tiers:
        raise ConfigError(f"depth {depth} outside [0, {config.tiers})")


def _check_coord(config: TierConfig, coord: NodeCoord) -> None:
    _check_depth(config, coord.depth)
    if not 0 <= coord.index < config.level_sizes[coord.depth]:
        raise ConfigError(f"{coord} is not a node of {config}")


def capacity_at(config: TierConfig, depth: int) -> int:
    """Number of element slots in the subtree of a node at ``depth``."""
    _check_depth(config, depth)
    return config.capacities[depth]


def wrap(i: int, off: int, cap: int) -> int:
    """``(i + off) mod cap`` with a non-negative remainder."""
    if cap & (cap - 1) == 0:
        return (i + off) & (cap - 1)
    return (i + off) % cap


def circ_range(i: int, m: int, cap: int) -> Iterator[int]:
    for k in range(m):
        yield wrap(i, k, cap)


def child_of(i_prime: int, config: TierConfig, depth: int) -> tuple[int, int]:
    """Split a rotated index at ``depth`` into (child ordinal, index inside the child)."""
    if depth >= config.tiers - 1:
        raise ConfigError("leaves have no children")
    return divmod(i_prime, capacity_at(config, depth + 1))


def node_count(config: TierConfig) -> int:
    return sum(config.level_sizes)


def offset_slot(config: TierConfig, coord: NodeCoord) -> int:
    _check_coord(config, coord)
    return config.level_starts[coord.depth] + coord.index


def coord_of_slot(config: TierConfig, slot: int) -> NodeCoord:
    for d in range(config.tiers - 1, -1, -1):
        if slot >= config.level_starts[d]:
            coord = NodeCoord(d, slot - config.level_starts[d])
            _check_coord(config, coord)
            return coord
    raise ConfigError(f"negative slot {slot}")


def leaf_ordinal(config: TierConfig, coord: NodeCoord) -> int:
    _check_coord(config, coord)
    if coord.depth != config.tiers - 1:
        raise ConfigError(f"{coord} is not a leaf")
    return coord.index


def child_coord(config: TierConfig, coord: NodeCoord, k: int) -> NodeCoord:
    _check_coord(config, coord)
    w = config.widths[coord.depth]
    if coord.depth >= config.tiers - 1 or not 0 <= k < w:
        raise ConfigError(f"{coord} has no child {k}")
    return NodeCoord(coord.depth + 1, coord.index * w + k)


def field_width(cap: int) -> int:
    """Bits needed to store any offset in ``[0, cap)``."""
    return max(1, (cap - 1).bit_length())


def as_config(value: TierConfig | str | Sequence[int]) -> TierConfig:
    if isinstance(value, TierConfig):
        return value
    if isinstance(value, str):
        return TierConfig.parse(value)
    return TierConfig(tuple(value))
