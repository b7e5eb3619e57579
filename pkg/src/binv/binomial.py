"""Binomial distribution function and its eta-variable expansions.

P(n, p, x) = I_{1-p}(n - x, x + 1) and Q = 1 - P = I_p(x + 1, n - x).
With nu = n + 1 and xi = (x + 1) / nu the eta variable of the
incomplete-beta expansion becomes

    -eta**2 / 2 = xi log(p / xi) + (1 - xi) log((1 - p) / (1 - xi)),
    sign(eta) = sign(p - xi).
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass
from typing import Literal

from . import beta_asym
from .beta_asym import DEFAULT_CONFIG, AsymptoticConfig
from .errors import AccuracyWarning, DomainError, OutOfRangeError
from .special_fn import inc_beta_ref, log1pmx, log_gamma_star

_LOG_2PI = math.log(2.0 * math.pi)
_SUM_RTOL = 1e-17

Method = Literal["auto", "exact", "beta_ref", "beta_asym"]


@dataclass(frozen=True)
class BinomialParams:
    n: int
    p: float
    x: float

    def __post_init__(self):
        if isinstance(self.n, bool) or int(self.n) != self.n or self.n < 1:
            raise DomainError(f"n must be a positive integer, got {self.n!r}")
        if not (0.0 < self.p < 1.0):
            raise DomainError(f"p must lie in (0, 1), got {self.p!r}")
        if not (0 <= self.x <= self.n):
            raise DomainError(f"x must lie in [0, n], got {self.x!r}")

    @property
    def is_integer(self) -> bool:
        return float(self.x).is_integer()


# ---------------------------------------------------------------------------
# exact summation


def _bd0(x: float, m: float) -> float:
    """x log(x / m) + m - x, free of cancellation near x = m."""
    t = (x - m) / m
    if abs(t) < 0.5:
        return m * (log1pmx(t) + t * math.log1p(t))
    return x * math.log(x / m) + m - x


def binom_pmf(k: float, n: float, p: float, q: float | None = None) -> float:
    """Binomial probability C(n, k) p^k q^(n-k), saddle-point form.

    Works for real 0 <= k <= n; the Gamma* corrections keep relative
    accuracy near 1e-15 even when n is large.
    """
    if q is None:
        q = 1.0 - p
    if k == 0:
        return math.exp(n * math.log1p(-p)) if p < 0.5 else q**n
    if k == n:
        return math.exp(n * math.log1p(-q)) if q < 0.5 else p**n
    nk = n - k
    # log Gamma*(m) is the Stirling remainder of log m!
    lc = (
        log_gamma_star(n)
        - log_gamma_star(k)
        - log_gamma_star(nk)
        - _bd0(k, n * p)
        - _bd0(nk, n * q)
    )
    lf = _LOG_2PI + math.log(k) + math.log1p(-k / n)
    return math.exp(lc - 0.5 * lf)


def _tail_sum(start: int, stop: int, step: int, term: float, ratio) -> float:
    """Sum a unimodal run of terms from ``start`` towards ``stop``."""
    terms = [term]
    s = term
    k = start
    while k != stop and term > 0.0:
        r = ratio(k)
        term *= r
        k += step
        terms.append(term)
        s += term
        if r < 1.0 and term * r / (1.0 - r) <= _SUM_RTOL * s:
            break
    return math.fsum(terms)


def _tails(n: int, p: float, x: int) -> tuple[float, float, str]:
    """(P, Q, branch) with the smaller tail summed directly."""
    q = 1.0 - p
    if x >= n:
        return 1.0, 0.0, "Q"
    if x < 0:
        return 0.0, 1.0, "P"
    if p == 0.5 and 2 * x + 1 == n:
        # I_{1/2}(a, a) = 1/2 exactly; keep the tie exact
        return 0.5, 0.5, "P"
    if p > (x + 1.0) / (n + 1.0):
        lower = _tail_sum(x, 0, -1, binom_pmf(x, n, p, q), lambda k: k * q / ((n - k + 1) * p))
        return lower, 1.0 - lower, "P"
    upper = _tail_sum(
        x + 1, n, 1, binom_pmf(x + 1, n, p, q), lambda k: (n - k) * p / ((k + 1) * q)
    )
    return 1.0 - upper, upper, "Q"


def _require_integer(params: BinomialParams) -> int:
    if not params.is_integer:
        raise DomainError(f"exact summation needs integer x, got {params.x!r}")
    return int(params.x)


def cdf_exact(n: int, p: float, x: int) -> float:
    """P(n, p, x) by direct summation of the smaller tail."""
    params = BinomialParams(n, p, x)
    return _tails(params.n, params.p, _require_integer(params))[0]


def sf_exact(n: int, p: float, x: int) -> float:
    """Q(n, p, x) = 1 - P(n, p, x) by direct summation."""
    params = BinomialParams(n, p, x)
    return _tails(params.n, params.p, _require_integer(params))[1]


def cdf_branch(n: int, p: float, x: float) -> str:
    """Which tail is the smaller one: ``"P"`` when p > (x + 1)/(n + 1), else ``"Q"``."""
    return "P" if p > (x + 1.0) / (n + 1.0) else "Q"


def cdf(
    n: int,
    p: float,
    x: float,
    method: Method = "auto",
    cfg: AsymptoticConfig = DEFAULT_CONFIG,
) -> float:
    """P(n, p, x) through the chosen route.

    ``auto`` sums exactly for integer x and uses the continued-fraction
    incomplete beta for real x; both evaluate the smaller of P and Q.
    ``beta_asym`` uses the uniform asymptotic expansion and accepts real x.
    """
    params = BinomialParams(n, p, x)
    if method == "exact" or (method == "auto" and params.is_integer):
        return _tails(params.n, params.p, _require_integer(params))[0]
    if x >= n:
        return 1.0
    if method in ("auto", "beta_ref"):
        if p == 0.5 and 2.0 * x + 1.0 == n:
            return 0.5
        if cdf_branch(n, p, x) == "P":
            return inc_beta_ref(1.0 - p, n - x, x + 1.0)
        return 1.0 - inc_beta_ref(p, x + 1.0, n - x)
    if method == "beta_asym":
        return beta_asym.inc_beta_asym_terms(1.0 - p, n - x, x + 1.0, cfg, xc=p)[0]
    raise ValueError(f"unknown method {method!r}")


# ---------------------------------------------------------------------------
# eta variable and its series


class SeriesKind(enum.Enum):
    XI_OF_ETA = "a"
    P_OF_ETA = "b"
    F_OF_ETA = "c"
    XI_OF_RHO = "r"
    P_OF_RHO = "s"


@dataclass(frozen=True)
class SeriesCoefficients:
    """A pinned coefficient table; ``values[0]`` multiplies t**first_power."""

    kind: SeriesKind
    values: tuple[float, ...]
    anchor: float

    @property
    def first_power(self) -> int:
        return 0 if self.kind is SeriesKind.F_OF_ETA else 1

    def evaluate(self, t: float, k_max: int | None = None) -> float:
        vals = self.values if k_max is None else self.values[:k_max]
        s = 0.0
        for c in reversed(vals):
            s = s * t + c
        return s * t**self.first_power


def _b_values(xi: float) -> tuple[float, ...]:
    return (
        1.0,
        (1.0 - 2.0 * xi) / 3.0,
        (13.0 * xi * xi - 13.0 * xi + 1.0) / 36.0,
        -(2.0 * xi - 1.0) * (23.0 * xi * xi - 23.0 * xi - 1.0) / 270.0,
        (313.0 * xi**4 - 626.0 * xi**3 + 339.0 * xi**2 - 26.0 * xi + 1.0) / 4320.0,
    )


def coefficients(kind: SeriesKind, anchor: float) -> SeriesCoefficients:
    """Tabulated coefficients of the given expansion at ``anchor`` (p or xi)."""
    if not (0.0 < anchor < 1.0):
        raise DomainError(f"anchor must lie in (0, 1), got {anchor!r}")
    v = anchor
    if kind is SeriesKind.XI_OF_ETA:
        vals = (
            1.0,
            (2.0 * v - 1.0) / 6.0,
            (2.0 * v * v - 2.0 * v - 1.0) / 72.0,
            -(2.0 * v**3 - 3.0 * v * v - 3.0 * v + 2.0) / 540.0,
            (4.0 * v**4 - 8.0 * v**3 - 48.0 * v * v + 52.0 * v - 23.0) / 17280.0,
        )
    elif kind in (SeriesKind.P_OF_ETA, SeriesKind.P_OF_RHO):
        # same expansion: rho / sqrt(1 - xi) equals eta / lambda
        vals = _b_values(v)
    elif kind is SeriesKind.F_OF_ETA:
        w = v * v - v + 1.0
        vals = (
            1.0,
            (2.0 * v - 1.0) / 3.0,
            w / 12.0,
            -(2.0 * v - 1.0) * (v - 2.0) * (v + 1.0) / 135.0,
            w * w / 864.0,
        )
    elif kind is SeriesKind.XI_OF_RHO:
        vals = (
            1.0,
            (5.0 * v - 4.0) / 6.0,
            (47.0 * v * v - 74.0 * v + 26.0) / 72.0,
            (268.0 * v**3 - 627.0 * v * v + 453.0 * v - 92.0) / 540.0,
            (6409.0 * v**4 - 19868.0 * v**3 + 21792.0 * v * v - 9608.0 * v + 1252.0) / 17280.0,
        )
    else:
        raise ValueError(f"unknown series kind {kind!r}")
    return SeriesCoefficients(kind, vals, anchor)


def eta_binomial(p: float, xi: float) -> float:
    """eta(p, xi) with sign(eta) = sign(p - xi)."""
    return beta_asym.eta_from_x(p, xi)


def eta_bounds(p: float) -> tuple[float, float]:
    """Open interval of eta values reachable by some xi in (0, 1) for this p."""
    return -math.sqrt(-2.0 * math.log(p)), math.sqrt(-2.0 * math.log1p(-p))


def _radius_warning(value: float, guard: float, name: str) -> None:
    if abs(value) > guard:
        warnings.warn(
            f"|{name}|={abs(value):.3g} exceeds the series guard {guard}; use the iterative solver",
            AccuracyWarning,
            stacklevel=3,
        )


def xi_from_eta_series(
    eta: float, p: float, k_max: int = 5, guard: float = DEFAULT_CONFIG.series_radius
) -> float:
    """xi = p - p(1-p) sum a_k etatilde^k with etatilde = eta / sqrt(p(1-p))."""
    pq = p * (1.0 - p)
    et = eta / math.sqrt(pq)
    _radius_warning(et, guard, "eta~")
    return p - pq * coefficients(SeriesKind.XI_OF_ETA, p).evaluate(et, k_max)


def p_from_eta_series(
    eta: float, xi: float, k_max: int = 5, guard: float = DEFAULT_CONFIG.series_radius
) -> float:
    """p = xi + lambda^2 sum b_k etahat^k with etahat = eta / lambda."""
    lam2 = xi * (1.0 - xi)
    eh = eta / math.sqrt(lam2)
    _radius_warning(eh, guard, "eta^")
    return xi + lam2 * coefficients(SeriesKind.P_OF_ETA, xi).evaluate(eh, k_max)


def _bracketed_newton(
    func,
    lo: float,
    hi: float,
    x0: float,
    decreasing: bool,
    cfg: AsymptoticConfig,
    g_lo: float | None = None,
    g_hi: float | None = None,
) -> float:
    """Root of a monotone function on (lo, hi); ``func`` returns (value, slope).

    Newton steps that leave the bracket are replaced by false position when
    the values at both ends are known (``g_lo``/``g_hi`` seed them), else by
    bisection.
    """
    if not (lo < x0 < hi):
        # a start that rounded onto an end of the bracket sits next to the root
        x0 = math.nextafter(hi, lo) if x0 >= hi else math.nextafter(lo, hi)
    x = x0
    prev = math.inf
    for _ in range(cfg.newton_max_iter):
        g, dg = func(x)
        if g == 0.0:
            return x
        if (g > 0.0) == decreasing:
            lo, g_lo = x, g
        else:
            hi, g_hi = x, g
        if dg != 0.0 and abs(g / dg) <= cfg.newton_tol * abs(x):
            return x - g / dg
        x_new = x - g / dg if dg != 0.0 else math.nan
        newton = lo < x_new < hi
        if not newton:
            x_new = 0.5 * (lo + hi)
            if g_lo is not None and g_hi is not None and g_lo != g_hi:
                x_fp = lo - g_lo * (hi - lo) / (g_hi - g_lo)
                if lo < x_fp < hi:
                    x_new = x_fp
        step = abs(x_new - x)
        if step <= cfg.newton_tol * abs(x) or not (lo < x_new < hi):
            return x_new if lo < x_new < hi else x
        # once Newton steps stop shrinking at this size, rounding in func dominates
        if newton and step <= 1e-12 * abs(x) and step > 0.25 * prev:
            return x_new
        prev = step if newton else math.inf
        x = x_new
    return x


def xi_from_eta(eta: float, p: float, cfg: AsymptoticConfig = DEFAULT_CONFIG) -> float:
    """Solve eta_binomial(p, xi) = eta for xi on the side fixed by sign(eta).

    The a_k series supplies the start for small eta; safeguarded Newton with
    the analytic d eta / d xi finishes the job.
    """
    if not (0.0 < p < 1.0):
        raise DomainError(f"p must lie in (0, 1), got {p!r}")
    lo_b, hi_b = eta_bounds(p)
    if not (lo_b < eta < hi_b):
        raise OutOfRangeError(
            f"eta={eta:.6g} outside ({lo_b:.6g}, {hi_b:.6g}); no xi in (0, 1) exists for p={p}"
        )
    if eta == 0.0:
        return p
    pq = p * (1.0 - p)
    lo, hi = (0.0, p) if eta > 0.0 else (p, 1.0)
    et = eta / math.sqrt(pq)
    if abs(et) <= cfg.series_radius:
        x0 = p - pq * coefficients(SeriesKind.XI_OF_ETA, p).evaluate(et)
        if x0 == p:
            # |xi - p| is below half an ulp of p
            return p
    else:
        x0 = 0.5 * (lo + hi)

    def func(xi: float) -> tuple[float, float]:
        e = beta_asym._signed_eta(p, xi)
        if e == 0.0:
            return -eta, -1.0 / math.sqrt(xi * (1.0 - xi))
        slope = -math.log1p((p - xi) / (xi * (1.0 - p))) / e
        return e - eta, slope

    # eta runs from its bound at xi = 0 or 1 down or up to 0 at xi = p
    if eta > 0.0:
        g_lo, g_hi = hi_b - eta, -eta
    else:
        g_lo, g_hi = -eta, lo_b - eta
    return _bracketed_newton(func, lo, hi, x0, decreasing=True, cfg=cfg, g_lo=g_lo, g_hi=g_hi)


def f_eta(eta: float, xi: float, p: float, cfg: AsymptoticConfig = DEFAULT_CONFIG) -> float:
    """f(eta) = lambda eta / (p - xi); Taylor series near eta = 0."""
    if not (0.0 < xi < 1.0):
        raise DomainError(f"xi must lie in (0, 1), got {xi!r}")
    if eta != 0.0 and (p == xi or (p > xi) != (eta > 0.0)):
        raise DomainError(f"inconsistent triple: sign(p - xi) must equal sign(eta) (eta={eta}, xi={xi}, p={p})")
    return beta_asym.f_of_zeta(eta, xi, cfg) if abs(eta) <= beta_asym._switch_radius(xi, cfg) else (
        math.sqrt(xi * (1.0 - xi)) * eta / (p - xi)
    )
