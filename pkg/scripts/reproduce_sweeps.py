"""Error sweeps of the asymptotic real quantile against the beta-inversion oracle.

For every (distribution, size, alpha) the sweep over the p-grid is written
to ``<out_dir>/sweep_<dist>_<size>_<alpha>.csv`` and the median relative
error is printed, followed by the small/large size ratio for each alpha.

    python scripts/reproduce_sweeps.py --out-dir sweeps
"""

from __future__ import annotations

import argparse
import os
from dataclasses import dataclass, field

from binv.cli import emit_sweep_csv
from binv.oracle import SweepSpec, default_p_grid, median_error, run_sweep


@dataclass(frozen=True)
class SweepExperiment:
    distributions: tuple[str, ...] = ("binomial", "negbinomial")
    sizes: tuple[int, ...] = (100, 1000)
    alphas: tuple[float, ...] = (0.35, 0.85)
    p_grid: tuple[float, ...] = field(default_factory=lambda: tuple(default_p_grid()))
    out_dir: str | None = "sweeps"
    threads: int | None = None


def run(cfg: SweepExperiment) -> dict[tuple[str, int, float], float]:
    """Median relative error per (distribution, size, alpha)."""
    if cfg.out_dir:
        os.makedirs(cfg.out_dir, exist_ok=True)
    medians = {}
    for dist in cfg.distributions:
        for size in cfg.sizes:
            for alpha in cfg.alphas:
                rows = run_sweep(SweepSpec(dist, size, alpha, cfg.p_grid), threads=cfg.threads)
                if cfg.out_dir:
                    emit_sweep_csv(rows, os.path.join(cfg.out_dir, f"sweep_{dist}_{size}_{alpha}.csv"))
                medians[dist, size, alpha] = median_error(rows)
                flagged = sum(r.fallback for r in rows)
                print(f"{dist:<12} size={size:<6} alpha={alpha:<5} median={medians[dist, size, alpha]:.3e}"
                      f"  fallback rows={flagged}")
    small, large = min(cfg.sizes), max(cfg.sizes)
    if small != large:
        for dist in cfg.distributions:
            for alpha in cfg.alphas:
                ratio = medians[dist, small, alpha] / medians[dist, large, alpha]
                print(f"{dist:<12} alpha={alpha:<5} median ratio size {small}/{large}: {ratio:.1f}")
    return medians


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", type=int, nargs="+", default=list(SweepExperiment.sizes))
    parser.add_argument("--alphas", type=float, nargs="+", default=list(SweepExperiment.alphas))
    parser.add_argument("--dist", nargs="+", choices=("binomial", "negbinomial"),
                        default=list(SweepExperiment.distributions))
    parser.add_argument("--out-dir", default=SweepExperiment.out_dir, help="'' to skip writing CSV files")
    parser.add_argument("--threads", type=int)
    args = parser.parse_args(argv)
    run(SweepExperiment(tuple(args.dist), tuple(args.sizes), tuple(args.alphas),
                        out_dir=args.out_dir or None, threads=args.threads))
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
