"""Tiered vectors: constant-height trees of rotated arrays for fast positional edits."""
from .config import NodeCoord, TierConfig
from .errors import CapacityError, ConfigError, ContractError, StructureError
from .storage import VARIANTS, ProbeCounters, make_storage
from .vector import TieredVec

__all__ = [
    "TierConfig", "NodeCoord", "TieredVec", "ProbeCounters", "VARIANTS", "make_storage",
    "ConfigError", "CapacityError", "ContractError", "StructureError",
]
