"""Benchmark harness: workloads, baselines, sweeps, CSV output and the ``bench`` command."""
