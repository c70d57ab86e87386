"""``bench`` command: run workloads or sweeps and emit CSV."""
from __future__ import annotations

import argparse
import sys

from ..config import TierConfig
from ..errors import ConfigError
from ..positions import INCREMENT, MULTIPLIER
from .csvio import emit_csv
from .sweeps import SWEEPS, scale_config, sweep
from .workloads import BASELINES, DEFAULT_N, DEFAULT_RANGE, KINDS, STRUCTURES, WorkloadSpec, run_workload

EPILOG = f"""\
Positions come from a 64-bit LCG, state = state * {MULTIPLIER} + {INCREMENT} (mod 2^64),
position = (state >> 16) mod size; every structure sees the same stream for a seed.
Without --config the 64-64-64-512 shape is scaled to capacity about 2n.
Range access reports time and probes per element read.
"""


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="bench", description="Tiered vector benchmarks with CSV output.",
                                epilog=EPILOG, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--variant", default="implicit", choices=STRUCTURES, help="structure to measure")
    p.add_argument("--config", default=None, help="dash-separated widths, leaf width last")
    p.add_argument("--workload", default="access", choices=KINDS + ("all",))
    p.add_argument("--n", type=int, default=DEFAULT_N, help="preloaded elements")
    p.add_argument("--ops", type=int, default=None, help="operations per repetition (default depends on workload)")
    p.add_argument("--range-len", type=int, default=DEFAULT_RANGE)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--reps", type=int, default=10)
    p.add_argument("--scramble", action="store_true", help="randomize offsets of full nodes after preload")
    p.add_argument("--csv", default=None, help="output path (default: stdout)")
    p.add_argument("--sweep", default=None, choices=SWEEPS)
    p.add_argument("--extended", action="store_true", help="add ns_min, ns_max and message columns")
    p.add_argument("--no-probes", action="store_true", help="skip the counted probe run")
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = TierConfig.parse(args.config) if args.config else scale_config(TierConfig((64, 64, 64, 512)), args.n)
    except ConfigError as exc:
        print(f"bench: {exc}", file=sys.stderr)
        return 2
    kinds = KINDS if args.workload == "all" else (args.workload,)
    results = []
    for kind in kinds:
        try:
            spec = WorkloadSpec(kind, args.variant, config, args.n, args.ops, args.range_len, args.seed,
                                args.reps, args.scramble, not args.no_probes)
        except ValueError as exc:
            print(f"bench: {exc}", file=sys.stderr)
            return 2
        shape = f" {config}" if args.variant not in BASELINES or args.sweep else ""
        print(f"bench: {kind} on {args.variant}{shape} n={args.n}", file=sys.stderr)
        results.extend(sweep(args.sweep, spec) if args.sweep else [run_workload(spec)])
    emit_csv(results, args.csv if args.csv else sys.stdout, args.extended)
    return 0 if all(r.status != "error" for r in results) else 1


if __name__ == "__main__":
    sys.exit(main())
