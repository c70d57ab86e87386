"""Config sweeps over width, height and storage variant."""
from __future__ import annotations

import math
from dataclasses import replace

from ..config import TierConfig
from ..storage import VARIANTS
from .workloads import BenchResult, WorkloadSpec, run_workload

# full-scale sets, capacity 2^27 each
WIDTH_CONFIGS = ("32-32-32-4096", "32-32-64-2048", "32-64-64-1024", "64-64-64-512",
                 "64-64-128-256", "64-128-128-128")
HEIGHT_CONFIGS = ("8192-16384", "512-512-512", "64-64-64-512", "16-16-32-32-512", "8-8-16-16-16-512")
SWEEPS = ("width", "height", "variant")


def target_exponent(n: int) -> int:
    """Smallest e with 2^e >= 2n: room for n preloaded elements plus as many inserts."""
    return max(1, math.ceil(math.log2(max(2 * n, 2))))


def scale_config(config: TierConfig, n: int) -> TierConfig:
    """Shrink a power-of-two config to capacity about 2n, keeping its width proportions.

    Width exponents are scaled by the same factor and rounded by largest
    remainder so they sum to the target exponent.  Configs already small
    enough, or with non-power-of-two widths, are returned unchanged.
    """
    exps = [w.bit_length() - 1 for w in config.widths]
    if any(1 << e != w for e, w in zip(exps, config.widths)):
        return config
    total, target = sum(exps), max(target_exponent(n), config.tiers)
    if target >= total:
        return config
    raw = [e * target / total for e in exps]
    scaled = [max(1, math.floor(r)) for r in raw]
    order = sorted(range(len(raw)), key=lambda d: (scaled[d] - raw[d], d))
    for d in order[: max(0, target - sum(scaled))]:
        scaled[d] += 1
    return TierConfig(tuple(1 << e for e in scaled))


def sweep_configs(kind: str, n: int) -> list[TierConfig]:
    names = WIDTH_CONFIGS if kind == "width" else HEIGHT_CONFIGS
    return [scale_config(TierConfig.parse(c), n) for c in names]


def sweep(kind: str, base: WorkloadSpec) -> list[BenchResult]:
    """One result per sweep cell, run sequentially."""
    if kind not in SWEEPS:
        raise ValueError(f"unknown sweep {kind!r}; choose from {', '.join(SWEEPS)}")
    if kind == "variant":
        specs = [replace(base, structure=v) for v in VARIANTS]
    else:
        specs = [replace(base, config=c) for c in sweep_configs(kind, base.n)]
    return [run_workload(s) for s in specs]
