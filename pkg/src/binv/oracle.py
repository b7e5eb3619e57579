"""Real-valued reference quantiles and error sweeps of the asymptotic inversion."""

from __future__ import annotations

import enum
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from scipy.optimize import brentq

from .beta_asym import DEFAULT_CONFIG, AsymptoticConfig
from .binomial import BinomialParams
from .binomial_inv import check_alpha, invert
from .errors import OutOfRangeError
from .negbinomial import NegBinomialParams, nb_invert, nb_scan_cap
from .special_fn import inc_beta_ref

XTOL = 1e-12
_EDGE = 1e-9


class Distribution(str, enum.Enum):
    BINOMIAL = "binomial"
    NEGBINOMIAL = "negbinomial"


class ErrorMetric(str, enum.Enum):
    RELATIVE_X_ERROR = "relative_x_error"
    ACHIEVED_ALPHA_ERROR = "achieved_alpha_error"


def default_p_grid() -> list[float]:
    """p = 0.05, 0.055, ..., 0.95 (181 points)."""
    return [round(0.05 + 0.005 * i, 12) for i in range(181)]


@dataclass(frozen=True)
class SweepSpec:
    distribution: Distribution
    size_param: int
    alpha: float
    p_grid: tuple[float, ...] = field(default_factory=lambda: tuple(default_p_grid()))
    output: ErrorMetric = ErrorMetric.RELATIVE_X_ERROR

    def __post_init__(self):
        object.__setattr__(self, "distribution", Distribution(self.distribution))
        object.__setattr__(self, "output", ErrorMetric(self.output))
        object.__setattr__(self, "p_grid", tuple(float(p) for p in self.p_grid))
        check_alpha(self.alpha)
        if self.size_param < 1:
            raise ValueError(f"size_param must be at least 1, got {self.size_param!r}")
        grid = self.p_grid
        if any(not (0.0 < p < 1.0) for p in grid):
            raise ValueError("p_grid must lie strictly inside (0, 1)")
        if any(b <= a for a, b in zip(grid, grid[1:])):
            raise ValueError("p_grid must be strictly increasing")


@dataclass(frozen=True)
class SweepRow:
    distribution: str
    size_param: int
    alpha: float
    p: float
    x_asym: float
    x_oracle: float
    rel_error: float
    fallback: bool


def real_cdf(distribution: Distribution | str, size: float, p: float, x: float) -> float:
    """The distribution function continued to real x > -1 through I_y(a, b)."""
    if Distribution(distribution) is Distribution.BINOMIAL:
        if x >= size:
            return 1.0
        return inc_beta_ref(1.0 - p, size - x, x + 1.0)
    return inc_beta_ref(p, size, x + 1.0)


def real_quantile_oracle(
    distribution: Distribution | str, size: float, p: float, alpha: float, xtol: float = XTOL
) -> float:
    """Real x with P(x) = alpha, found by Brent's method on the continued fraction.

    Binomial: I_{1-p}(n - x, x + 1) = alpha on (-1, n).  Negative binomial:
    I_p(r, x + 1) = alpha on (-1, cap), with cap the scan cap whose upper
    tail is negligible.
    """
    distribution = Distribution(distribution)
    check_alpha(alpha)
    if distribution is Distribution.BINOMIAL:
        BinomialParams(int(size), p, 0)
        lo, hi = -1.0 + _EDGE, size - _EDGE
    else:
        NegBinomialParams(size, p, 0)
        lo, hi = -1.0 + _EDGE, float(nb_scan_cap(size, p))

    def g(x: float) -> float:
        return real_cdf(distribution, size, p, x) - alpha

    g_lo, g_hi = g(lo), g(hi)
    if not (g_lo < 0.0 <= g_hi):
        raise OutOfRangeError(
            f"alpha={alpha!r} is outside the attainable range [{g_lo + alpha:.6g}, {g_hi + alpha:.6g}]"
        )
    if g_hi == 0.0:
        return hi
    return brentq(g, lo, hi, xtol=xtol, rtol=4.0 * 2.220446049250313e-16, maxiter=500)


def _sweep_point(spec: SweepSpec, p: float, cfg: AsymptoticConfig) -> SweepRow:
    dist, size, alpha = spec.distribution, spec.size_param, spec.alpha
    try:
        res = invert(size, p, alpha, cfg) if dist is Distribution.BINOMIAL else nb_invert(size, p, alpha, cfg)
        x_asym = res.x_real
    except OutOfRangeError:
        x_asym = math.nan
    fallback = math.isnan(x_asym)
    try:
        x_oracle = real_quantile_oracle(dist, size, p, alpha)
    except OutOfRangeError:
        x_oracle = math.nan
    if fallback or math.isnan(x_oracle):
        err = math.nan
    elif spec.output is ErrorMetric.RELATIVE_X_ERROR:
        err = abs(x_asym - x_oracle) / abs(x_oracle)
    else:
        err = abs(real_cdf(dist, size, p, x_asym) - alpha)
    return SweepRow(dist.value, size, alpha, p, x_asym, x_oracle, err, fallback)


def sweep_threads() -> int:
    """Worker count: ``BINV_THREADS`` when set, else the CPU count."""
    env = os.environ.get("BINV_THREADS")
    if env:
        try:
            n = int(env)
        except ValueError:
            raise ValueError(f"BINV_THREADS must be an integer, got {env!r}") from None
        return max(1, n)
    return os.cpu_count() or 1


def run_sweep(spec: SweepSpec, cfg: AsymptoticConfig = DEFAULT_CONFIG, threads: int | None = None) -> list[SweepRow]:
    """Error of the asymptotic real quantile at every grid point, in grid order.

    Points whose inversion fell back to the integer search are kept with
    ``fallback=True`` and NaN errors.
    """
    workers = min(threads or sweep_threads(), max(len(spec.p_grid), 1))
    if workers <= 1:
        return [_sweep_point(spec, p, cfg) for p in spec.p_grid]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda p: _sweep_point(spec, p, cfg), spec.p_grid))


def median_error(rows: list[SweepRow]) -> float:
    """Median of the finite errors; NaN when there are none."""
    vals = sorted(r.rel_error for r in rows if math.isfinite(r.rel_error))
    if not vals:
        return math.nan
    m = len(vals) // 2
    return vals[m] if len(vals) % 2 else 0.5 * (vals[m - 1] + vals[m])


__all__ = [
    "Distribution",
    "ErrorMetric",
    "SweepRow",
    "SweepSpec",
    "default_p_grid",
    "median_error",
    "real_cdf",
    "real_quantile_oracle",
    "run_sweep",
    "sweep_threads",
]
