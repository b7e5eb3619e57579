"""Median wall time of a single inversion as the size parameter grows.

    python scripts/benchmark_scaling.py --sizes 100 10000 1000000 --csv scaling.csv
"""

from __future__ import annotations

import argparse
import csv
import statistics
import time
from dataclasses import dataclass

from binv.binomial_inv import invert
from binv.negbinomial import nb_invert


@dataclass(frozen=True)
class ScalingBenchmark:
    distribution: str = "binomial"
    sizes: tuple[int, ...] = (100, 1_000, 10_000, 100_000, 1_000_000)
    p: float = 0.4
    alpha: float = 0.51
    repeats: int = 1000


@dataclass(frozen=True)
class Timing:
    size: int
    median_seconds: float
    ratio: float
    refinement_steps: int
    fallback: bool


def run(cfg: ScalingBenchmark) -> list[Timing]:
    fn = invert if cfg.distribution == "binomial" else nb_invert
    raw = []
    for size in cfg.sizes:
        res = fn(size, cfg.p, cfg.alpha)  # warm-up, also records the path taken
        times = []
        for _ in range(cfg.repeats):
            t0 = time.perf_counter()
            fn(size, cfg.p, cfg.alpha)
            times.append(time.perf_counter() - t0)
        raw.append((size, statistics.median(times), res.refinement_steps, res.fallback_used))
    base = raw[0][1]
    return [Timing(s, t, t / base, k, fb) for s, t, k, fb in raw]


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--dist", choices=("binomial", "negbinomial"), default=ScalingBenchmark.distribution)
    parser.add_argument("--sizes", type=int, nargs="+", default=list(ScalingBenchmark.sizes))
    parser.add_argument("--p", type=float, default=ScalingBenchmark.p)
    parser.add_argument("--alpha", type=float, default=ScalingBenchmark.alpha)
    parser.add_argument("--repeats", type=int, default=ScalingBenchmark.repeats)
    parser.add_argument("--csv", help="also write the table to this file")
    args = parser.parse_args(argv)
    rows = run(ScalingBenchmark(args.dist, tuple(args.sizes), args.p, args.alpha, args.repeats))
    for r in rows:
        note = "  fallback" if r.fallback else ""
        print(f"{r.size:>10}  {r.median_seconds * 1e6:9.1f} us  x{r.ratio:5.2f}  probes={r.refinement_steps}{note}")
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(("size", "median_seconds", "ratio", "refinement_steps", "fallback"))
            for r in rows:
                w.writerow((r.size, format(r.median_seconds, ".17g"), format(r.ratio, ".17g"),
                            r.refinement_steps, str(r.fallback).lower()))
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
