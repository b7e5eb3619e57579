"""Asymptotic inversion of the binomial distribution function.

Given (n, p, alpha) find the smallest integer x with alpha <= P(n, p, x).
The erfc term of the incomplete-beta expansion is inverted first,

    erfc(eta0 sqrt(nu/2)) / 2 = alpha  ->  eta0,

then corrected by eta1 / nu with eta1 = log(f(eta0)) / eta0.  The real
solution xi nu - 1 is rounded up and checked against the distribution
function, so the returned integer is always exact.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field
from typing import Callable

from . import beta_asym, series
from .beta_asym import DEFAULT_CONFIG, AsymptoticConfig
from .binomial import BinomialParams, _tails, f_eta, xi_from_eta
from .errors import DomainError, OutOfRangeError
from .special_fn import inverfc

# above this n the refinement probes use the asymptotic expansion
EXACT_SUM_LIMIT = 10_000
# unit steps tried before the refinement switches to bisection
MAX_WALK = 3

_NAN = float("nan")


@dataclass
class InversionResult:
    """Outcome of an inversion together with the intermediate quantities."""

    x_real: float
    x_int: int
    achieved_cdf: float
    eta0: float = _NAN
    eta1: float = _NAN
    eta: float = _NAN
    xi0: float = _NAN
    xi: float = _NAN
    refinement_steps: int = 0
    fallback_used: bool = False
    extra: dict[str, float] = field(default_factory=dict)


def check_alpha(alpha: float) -> float:
    if not (0.0 < alpha <= 1.0):
        raise DomainError(f"alpha must lie in (0, 1], got {alpha!r}")
    return float(alpha)


# ---------------------------------------------------------------------------
# eta1


def eta1_series_coefficients(xi: float) -> tuple[float, ...]:
    """First four coefficients of eta1 in powers of eta0."""
    lam = math.sqrt(xi * (1.0 - xi))
    x2 = xi * xi
    return (
        (2.0 * xi - 1.0) / (3.0 * lam),
        -(5.0 * x2 - 5.0 * xi - 1.0) / (36.0 * lam**2),
        (2.0 * xi - 1.0) * (23.0 * x2 - 23.0 * xi - 1.0) / (1620.0 * lam**3),
        -(31.0 * x2 * x2 - 62.0 * x2 * xi + 33.0 * x2 - 2.0 * xi + 7.0) / (6480.0 * lam**4),
    )


@functools.lru_cache(maxsize=512)
def _log_f_series(xi: float, order: int) -> tuple[float, ...]:
    # log f(eta) / eta as a power series in eta
    return tuple(series.log(list(beta_asym.taylor_f(xi, order)), order + 1)[1:])


def eta1_correction(
    eta0: float, xi0: float, p: float, cfg: AsymptoticConfig = DEFAULT_CONFIG
) -> float:
    """eta1 = log(f(eta0)) / eta0, with f(eta) = lambda eta / (p - xi).

    Near eta0 = 0 the quotient is summed as a power series, which tends to
    (2 xi - 1) / (3 lambda) in the limit.
    """
    if not (0.0 < xi0 < 1.0):
        raise DomainError(f"xi0 must lie in (0, 1), got {xi0!r}")
    if abs(eta0) < min(cfg.eta1_switch, beta_asym._switch_radius(xi0, cfg)):
        return series.evaluate(_log_f_series(xi0, cfg.taylor_order), eta0)
    return math.log(f_eta(eta0, xi0, p, cfg)) / eta0


# ---------------------------------------------------------------------------
# integer refinement


def refine_quantile(
    cdf_at: Callable[[int], float],
    alpha: float,
    x_guess: float,
    upper: int,
) -> tuple[int, float, int, bool]:
    """Smallest integer k in [0, upper] with alpha <= cdf_at(k).

    Starts at the integer nearest ``x_guess`` so that a guess off by less
    than one half costs two probes, walks a few unit steps and then
    bisects.  ``cdf_at(upper)`` must reach alpha.  Returns
    (k, cdf_at(k), probes, bisected).
    """
    probes = 0

    def probe(k: int) -> float:
        nonlocal probes
        probes += 1
        return cdf_at(k)

    if math.isfinite(x_guess):
        g = min(max(int(math.floor(x_guess + 0.5)), 0), upper)
    else:
        g = upper // 2
    v = probe(g)
    # invariant: cdf(lo) < alpha <= cdf(hi), with lo = -1 meaning "below 0"
    if v >= alpha:
        hi, v_hi, lo = g, v, -1
        for _ in range(MAX_WALK):
            if hi == 0:
                return 0, v_hi, probes, False
            w = probe(hi - 1)
            if w < alpha:
                return hi, v_hi, probes, False
            hi, v_hi = hi - 1, w
    else:
        lo, hi, v_hi = g, upper, None
        for _ in range(MAX_WALK):
            if lo + 1 >= upper:
                return upper, probe(upper), probes, False
            w = probe(lo + 1)
            if w >= alpha:
                return lo + 1, w, probes, False
            lo += 1
    while hi - lo > 1:
        mid = (lo + hi) // 2
        w = probe(mid)
        if w >= alpha:
            hi, v_hi = mid, w
        else:
            lo = mid
    if v_hi is None:
        v_hi = probe(hi)
    return hi, v_hi, probes, True


def _binomial_probe(n: int, p: float, cfg: AsymptoticConfig) -> Callable[[int], float]:
    """P(n, p, k) for the refinement; asymptotic with a guard band for large n."""
    if n <= EXACT_SUM_LIMIT:
        return lambda k: _tails(n, p, k)[0]

    def cdf_at(k: int) -> float:
        if k >= n:
            return 1.0
        xi = (k + 1.0) / (n + 1.0)
        if cfg.delta <= xi <= 1.0 - cfg.delta:
            v, last = beta_asym.inc_beta_asym_terms(1.0 - p, n - k, k + 1.0, cfg, xc=p)
            cdf_at.guard = 10.0 * last + 1e-13
            return v
        cdf_at.guard = 0.0
        return _tails(n, p, k)[0]

    cdf_at.guard = 0.0
    return cdf_at


class _GuardedProbe:
    """Wraps an approximate CDF; decisions inside the guard band use the exact one."""

    def __init__(self, approx, exact, alpha: float):
        self.approx, self.exact, self.alpha = approx, exact, alpha

    def __call__(self, k: int) -> float:
        v = self.approx(k)
        if abs(v - self.alpha) <= getattr(self.approx, "guard", 0.0):
            return self.exact(k)
        return v


def _neumaier_cumsum(terms: list[float]) -> list[float]:
    out = []
    s = comp = 0.0
    for t in terms:
        y = s + t
        comp += (s - y) + t if abs(s) >= abs(t) else (t - y) + s
        s = y
        out.append(s + comp)
    return out


def scan_quantile(
    ratio: Callable[[int], float],
    mode: int,
    upper: int,
    alpha: float,
    tie: int | None = None,
) -> int:
    """Smallest k in [0, upper] with alpha <= P(k) from the term ratios alone.

    ``ratio(k)`` is t(k + 1) / t(k).  Terms are built outward from the mode
    with t(mode) = 1, dropped once they fall below 1e-300 of it, and
    normalised by their compensated total, so no normalising constant is
    needed.  P(k) is formed from the lower partial sum while that is the
    smaller tail and as 1 - Q(k) afterwards.  At index ``tie`` P is 1/2
    exactly.
    """
    up = [1.0]
    k = mode
    while k < upper:
        t = up[-1] * ratio(k)
        if t < 1e-300:
            break
        up.append(t)
        k += 1
    down = []
    k, t = mode, 1.0
    while k > 0:
        t /= ratio(k - 1)
        if t < 1e-300:
            break
        down.append(t)
        k -= 1
    terms = down[::-1] + up
    first = mode - len(down)
    lower = _neumaier_cumsum(terms)
    upper_tail = _neumaier_cumsum(terms[::-1])[::-1] + [0.0]
    total = lower[-1]
    for i in range(len(terms)):
        k = first + i
        if k == tie:
            v = 0.5
        elif lower[i] <= 0.5 * total:
            v = lower[i] / total
        else:
            v = 1.0 - upper_tail[i + 1] / total
        if v >= alpha:
            return k
    return upper


def quantile_scan_oracle(n: int, p: float, alpha: float) -> int:
    """Smallest x with alpha <= P(n, p, x) by one pass over all the terms.

    Shares nothing with the library's summation code; see
    :func:`scan_quantile`.
    """
    BinomialParams(n, p, 0)
    check_alpha(alpha)
    if alpha == 1.0:
        return n
    q = 1.0 - p
    mode = min(int(math.floor((n + 1) * p)), n)
    tie = (n - 1) // 2 if p == 0.5 and n % 2 == 1 else None
    return scan_quantile(lambda k: (n - k) * p / ((k + 1) * q), mode, n, alpha, tie)


# ---------------------------------------------------------------------------
# the inversion


def _fallback(n: int, p: float, alpha: float, chain: dict) -> InversionResult:
    exact = lambda k: _tails(n, p, k)[0]  # noqa: E731
    x, v, probes, _ = refine_quantile(exact, alpha, _NAN, n)
    return InversionResult(
        x_real=_NAN, x_int=x, achieved_cdf=v, refinement_steps=probes, fallback_used=True, **chain
    )


def invert(
    n: int, p: float, alpha: float, cfg: AsymptoticConfig = DEFAULT_CONFIG
) -> InversionResult:
    """Smallest integer x with alpha <= P(n, p, x).

    The asymptotic estimate x_real = xi nu - 1 is followed by an integer
    refinement against the distribution function, so ``x_int`` is exact.
    When eta0 or eta has no preimage xi in (0, 1) the answer is found by
    bisection on the exact distribution function instead.
    """
    BinomialParams(n, p, 0)
    alpha = check_alpha(alpha)
    if alpha == 1.0:
        return InversionResult(x_real=float(n), x_int=n, achieved_cdf=1.0)
    nu = n + 1.0
    chain: dict = {}
    chain["eta0"] = eta0 = math.sqrt(2.0 / nu) * inverfc(2.0 * alpha)
    try:
        chain["xi0"] = xi0 = xi_from_eta(eta0, p, cfg)
        chain["eta1"] = eta1 = eta1_correction(eta0, xi0, p, cfg)
        chain["eta"] = eta = eta0 + eta1 / nu
        chain["xi"] = xi = xi_from_eta(eta, p, cfg)
    except (OutOfRangeError, DomainError):
        return _fallback(n, p, alpha, chain)
    x_real = xi * nu - 1.0

    exact = lambda k: _tails(n, p, k)[0]  # noqa: E731
    cdf_at = exact
    if n > EXACT_SUM_LIMIT:
        cdf_at = _GuardedProbe(_binomial_probe(n, p, cfg), exact, alpha)
    x, v, probes, bisected = refine_quantile(cdf_at, alpha, x_real, n)
    return InversionResult(
        x_real=x_real,
        x_int=x,
        achieved_cdf=v,
        refinement_steps=probes,
        fallback_used=bisected,
        **chain,
    )
