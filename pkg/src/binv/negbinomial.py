"""Negative binomial (Pascal, and Polya for real r) distribution function
and its asymptotic inversion.

P^NB(r, p, x) = sum_{k<=x} C(r+k-1, k) p^r (1-p)^k = I_p(r, x + 1).  With
nu = r + x + 1 and xi = r / nu the erfc equation for alpha becomes

    psi(xi) = -rho**2 / 2,  rho = -z sqrt(2 / r) = eta / sqrt(xi),
    psi(xi) = ((1 - xi) / xi) log((1 - p) / (1 - xi)) + log(p / xi),

where z = inverfc(2 alpha).  Since nu is unknown, r alone fixes rho.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import beta_asym
from .beta_asym import DEFAULT_CONFIG, AsymptoticConfig
from .binomial import (
    SeriesKind,
    _bracketed_newton,
    _radius_warning,
    _tail_sum,
    binom_pmf,
    coefficients,
)
from .binomial_inv import (
    EXACT_SUM_LIMIT,
    InversionResult,
    _GuardedProbe,
    check_alpha,
    eta1_correction,
    refine_quantile,
    scan_quantile,
)
from .errors import DomainError, NoSolutionError, OutOfRangeError
from .special_fn import inc_beta_ref, inverfc

_NAN = float("nan")


@dataclass(frozen=True)
class NegBinomialParams:
    r: float
    p: float
    x: float

    def __post_init__(self):
        if not (self.r > 0.0 and math.isfinite(self.r)):
            raise DomainError(f"r must be positive, got {self.r!r}")
        if not (0.0 < self.p < 1.0):
            raise DomainError(f"p must lie in (0, 1), got {self.p!r}")
        if not (0 <= self.x < math.inf):
            raise DomainError(f"x must be non-negative, got {self.x!r}")

    @property
    def integer_r(self) -> bool:
        return float(self.r).is_integer()


@dataclass(frozen=True)
class NbTransform:
    nu: float
    xi: float
    rho: float
    eta: float

    @classmethod
    def from_params(cls, r: float, p: float, x: float) -> "NbTransform":
        NegBinomialParams(r, p, x)
        nu = r + x + 1.0
        xi = r / nu
        eta = beta_asym.eta_from_x(p, xi)
        return cls(nu, xi, eta / math.sqrt(xi), eta)


# ---------------------------------------------------------------------------
# distribution function


def nb_pmf(k: float, r: float, p: float) -> float:
    """Probability of k failures before the r-th success."""
    if k == 0:
        return math.exp(r * math.log(p))
    return r / (k + r) * binom_pmf(r, k + r, p)


def nb_cdf_branch(r: float, p: float, x: float) -> str:
    """``"P"`` when p < r / (r + x + 1) (the lower tail is the small one), else ``"Q"``."""
    return "P" if p < r / (r + x + 1.0) else "Q"


def _nb_tails(r: float, p: float, x: int) -> tuple[float, float, str]:
    q = 1.0 - p
    if p == 0.5 and x + 1 == r:
        # I_{1/2}(a, a) = 1/2 exactly; keep the tie exact
        return 0.5, 0.5, "P"
    if nb_cdf_branch(r, p, x) == "P":
        lower = _tail_sum(x, 0, -1, nb_pmf(x, r, p), lambda k: k / ((k - 1 + r) * q))
        return lower, 1.0 - lower, "P"
    upper = _tail_sum(x + 1, None, 1, nb_pmf(x + 1, r, p), lambda k: (k + r) * q / (k + 1))
    return 1.0 - upper, upper, "Q"


def _nb_beta(r: float, p: float, x: float) -> tuple[float, float, str]:
    if p == 0.5 and x + 1.0 == r:
        return 0.5, 0.5, "P"
    if nb_cdf_branch(r, p, x) == "P":
        v = inc_beta_ref(p, r, x + 1.0)
        return v, 1.0 - v, "P"
    v = inc_beta_ref(1.0 - p, x + 1.0, r)
    return 1.0 - v, v, "Q"


def nb_tails(r: float, p: float, x: float) -> tuple[float, float, str]:
    """(P^NB, Q^NB, branch) where ``branch`` names the tail computed directly.

    Integer r and x are summed; otherwise the continued-fraction incomplete
    beta function is used.
    """
    params = NegBinomialParams(r, p, x)
    if params.integer_r and float(x).is_integer():
        return _nb_tails(r, p, int(x))
    return _nb_beta(r, p, x)


def nb_cdf_exact(r: float, p: float, x: float) -> float:
    """P^NB(r, p, x) computed from the smaller tail."""
    return nb_tails(r, p, x)[0]


def nb_sf_exact(r: float, p: float, x: float) -> float:
    """Q^NB(r, p, x) = 1 - P^NB(r, p, x)."""
    return nb_tails(r, p, x)[1]


_CAP_TAIL = 1e-20


def nb_scan_cap(r: float, p: float) -> int:
    """An x with upper tail Q^NB(r, p, x) below 1e-20.

    Starts at the mean plus twenty standard deviations and grows until the
    geometric bound t(x + 1) / (1 - ratio) on the tail is small enough.
    """
    q = 1.0 - p
    k = int(math.ceil(r * q / p + 20.0 * math.sqrt(r * q) / p)) + 1
    lq, lp, lg_r = math.log1p(-p), math.log(p), math.lgamma(r)
    while True:
        j = k + 1
        # the term ratio (j + r) q / (j + 1) tends to q from either side
        rho = max((j + r) * q / (j + 1.0), q)
        if rho < 1.0:
            log_t = math.lgamma(j + r) - lg_r - math.lgamma(j + 1.0) + r * lp + j * lq
            if log_t - math.log1p(-rho) < math.log(_CAP_TAIL):
                return k
        k = int(math.ceil(1.5 * k))


# ---------------------------------------------------------------------------
# psi and its inversion


def _check_unit(name: str, v: float) -> None:
    if not (0.0 < v < 1.0):
        raise DomainError(f"{name} must lie in (0, 1), got {v!r}")


def psi(xi: float, p: float) -> float:
    """((1-xi)/xi) log((1-p)/(1-xi)) + log(p/xi), which equals -eta**2 / (2 xi)."""
    _check_unit("xi", xi)
    _check_unit("p", p)
    return -beta_asym._half_eta_sq(p, xi) / xi


def psi_prime(xi: float, p: float) -> float:
    """d psi / d xi = -log((1-p)/(1-xi)) / xi**2."""
    _check_unit("xi", xi)
    _check_unit("p", p)
    return -math.log1p((xi - p) / (1.0 - xi)) / (xi * xi)


def rho_limits(p: float) -> tuple[float, float]:
    """Limits of eta as xi -> 0 and xi -> 1 for fixed p."""
    return math.sqrt(-2.0 * math.log1p(-p)), -math.sqrt(-2.0 * math.log(p))


def xi_from_rho_series(
    rho: float, p: float, k_max: int = 5, guard: float = DEFAULT_CONFIG.series_radius
) -> float:
    """xi = p - p(1-p) sum r_k rhotilde^k with rhotilde = rho / sqrt(1-p)."""
    rt = rho / math.sqrt(1.0 - p)
    _radius_warning(rt, guard, "rho~")
    return p - p * (1.0 - p) * coefficients(SeriesKind.XI_OF_RHO, p).evaluate(rt, k_max)


def p_from_rho_series(
    rho: float, xi: float, k_max: int = 5, guard: float = DEFAULT_CONFIG.series_radius
) -> float:
    """p = xi + xi(1-xi) sum s_k rhohat^k with rhohat = rho / sqrt(1-xi)."""
    rh = rho / math.sqrt(1.0 - xi)
    _radius_warning(rh, guard, "rho^")
    return xi + xi * (1.0 - xi) * coefficients(SeriesKind.P_OF_RHO, xi).evaluate(rh, k_max)


def solve_psi(rho: float, p: float, cfg: AsymptoticConfig = DEFAULT_CONFIG) -> float:
    """Root xi of psi(xi) = -rho**2 / 2 with sign(p - xi) = sign(rho).

    For rho > 0 the root lies in (0, p) and always exists.  For rho < 0 it
    lies in (p, 1), where psi only falls to log p, so a root needs
    log p < -rho**2 / 2.
    """
    _check_unit("p", p)
    if rho == 0.0:
        return p
    target = -0.5 * rho * rho
    if rho < 0.0 and not math.log(p) < target:
        raise NoSolutionError(
            f"no xi in (p, 1) solves psi(xi) = -rho^2/2: needs log p < {target:.6g}, "
            f"but log p = {math.log(p):.6g}"
        )
    lo, hi = (0.0, p) if rho > 0.0 else (p, 1.0)
    rt = rho / math.sqrt(1.0 - p)
    x0 = 0.5 * (lo + hi)
    if abs(rt) <= cfg.series_radius:
        s = p - p * (1.0 - p) * coefficients(SeriesKind.XI_OF_RHO, p).evaluate(rt)
        if s == p:
            # |xi - p| is below half an ulp of p
            return p
        if lo < s < hi:
            x0 = s

    def func(xi: float) -> tuple[float, float]:
        return psi(xi, p) - target, psi_prime(xi, p)

    # psi increases on (0, p) and decreases on (p, 1)
    if rho > 0.0:
        g_lo, g_hi = None, -target
    else:
        g_lo, g_hi = -target, math.log(p) - target
    xi = _bracketed_newton(func, lo, hi, x0, decreasing=rho < 0.0, cfg=cfg, g_lo=g_lo, g_hi=g_hi)
    if not (0.0 < xi < 1.0):
        raise OutOfRangeError(f"root of psi(xi) = {target:.6g} is not representable")
    return xi


# ---------------------------------------------------------------------------
# inversion


def nb_quantile_scan_oracle(r: float, p: float, alpha: float) -> int:
    """Smallest x with alpha <= P^NB(r, p, x) by one pass over the terms up to
    :func:`nb_scan_cap`; see :func:`binv.binomial_inv.scan_quantile`."""
    NegBinomialParams(r, p, 0)
    check_alpha(alpha)
    q = 1.0 - p
    cap = nb_scan_cap(r, p)
    mode = max(int(math.floor((r - 1.0) * q / p)), 0)
    tie = int(r) - 1 if p == 0.5 and float(r).is_integer() else None
    return scan_quantile(lambda k: (k + r) * q / (k + 1.0), min(mode, cap), cap, alpha, tie)


def _nb_probe(r: float, p: float, alpha: float, cfg: AsymptoticConfig):
    if not float(r).is_integer():
        return lambda k: _nb_beta(r, p, k)[0]
    exact = lambda k: _nb_tails(r, p, k)[0]  # noqa: E731
    if r <= EXACT_SUM_LIMIT:
        return exact

    def approx(k: int) -> float:
        xi = r / (r + k + 1.0)
        if cfg.delta <= xi <= 1.0 - cfg.delta:
            v, last = beta_asym.inc_beta_asym_terms(p, r, k + 1.0, cfg, xc=1.0 - p)
            approx.guard = 10.0 * last + 1e-13
            return v
        approx.guard = 0.0
        return exact(k)

    approx.guard = 0.0
    return _GuardedProbe(approx, exact, alpha)


def nb_invert(
    r: float, p: float, alpha: float, cfg: AsymptoticConfig = DEFAULT_CONFIG
) -> InversionResult:
    """Smallest integer x with alpha <= P^NB(r, p, x).

    The extra mapping carries z, rho0, rho, x0 and nu of the asymptotic
    chain.  When psi(xi) = -rho^2/2 has no root the quantile is found by
    bisection on the distribution function.
    """
    NegBinomialParams(r, p, 0)
    if r < 1.0:
        raise DomainError(f"r must be at least 1 for the inversion, got {r!r}")
    alpha = check_alpha(alpha)
    cap = nb_scan_cap(r, p)
    cdf_at = _nb_probe(r, p, alpha, cfg)
    if cdf_at(cap) < alpha:
        raise OutOfRangeError(
            f"alpha={alpha!r} is not reached below x={cap}, where the upper tail is under {_CAP_TAIL}"
        )
    chain: dict = {}
    extra: dict = {}

    def fallback() -> InversionResult:
        x, v, probes, _ = refine_quantile(cdf_at, alpha, _NAN, cap)
        return InversionResult(
            x_real=_NAN, x_int=x, achieved_cdf=v, refinement_steps=probes,
            fallback_used=True, extra=extra, **chain,
        )

    if alpha == 1.0:
        return fallback()
    extra["z"] = z = inverfc(2.0 * alpha)
    extra["rho0"] = rho0 = -z * math.sqrt(2.0 / r)
    try:
        chain["xi0"] = xi0 = solve_psi(rho0, p, cfg)
        extra["x0"] = x0 = r / xi0 - r - 1.0
        chain["eta0"] = eta0 = rho0 * math.sqrt(xi0)
        chain["eta1"] = eta1 = eta1_correction(eta0, xi0, p, cfg)
        extra["nu"] = nu = r + x0 + 1.0
        chain["eta"] = eta = eta0 + eta1 / nu
        extra["rho"] = rho = eta / math.sqrt(xi0)
        chain["xi"] = xi = solve_psi(rho, p, cfg)
    except (OutOfRangeError, DomainError):
        return fallback()
    x_real = r / xi - r - 1.0
    x, v, probes, bisected = refine_quantile(cdf_at, alpha, x_real, cap)
    return InversionResult(
        x_real=x_real, x_int=x, achieved_cdf=v, refinement_steps=probes,
        fallback_used=bisected, extra=extra, **chain,
    )
