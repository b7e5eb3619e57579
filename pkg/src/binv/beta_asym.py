"""Uniform asymptotic expansion of the incomplete beta function.

With nu = a + b and xi = a / nu the integrand exponent is mapped onto a
Gaussian by

    -eta**2 / 2 = xi log(x / xi) + (1 - xi) log((1 - x) / (1 - xi)),
    sign(eta) = sign(x - xi),

which gives I_x(a, b) = erfc(-eta sqrt(nu/2)) / 2 - R_nu(eta).  The
remainder R_nu is expanded in inverse powers of nu with coefficient
functions C_k(eta) built from f(zeta) = zeta lambda / (t - xi).
"""

from __future__ import annotations

import functools
import math
import warnings
from dataclasses import dataclass

from . import series
from .errors import AccuracyWarning, DomainError, OutOfRangeError
from .special_fn import log1pmx, log_gamma_star

_SQRT_2PI = math.sqrt(2.0 * math.pi)
_S_LIMIT = 700.0  # logit bound for x_from_eta; exp(-700) is still normal
# below this |eta/lambda| the pinned fourth-order Taylor forms of C0, C1
# are more accurate than the direct (cancelling) formulas
_TINY_ETAHAT = 0.01


@dataclass(frozen=True)
class AsymptoticConfig:
    """Truncation orders, switch radii and iteration controls."""

    max_fk_terms: int = 3
    max_ck_terms: int = 2
    taylor_switch_radius: float = 0.2
    taylor_order: int = 16
    series_radius: float = 0.5
    eta1_switch: float = 0.1
    newton_tol: float = 4e-16
    newton_max_iter: int = 100
    delta: float = 0.01

    def __post_init__(self):
        if self.max_fk_terms < 1 or self.max_ck_terms < 1:
            raise ValueError("truncation orders must be at least 1")
        if self.max_fk_terms > 4:
            raise ValueError("only F_0..F_3 are tabulated")
        if not 0.0 < self.taylor_switch_radius <= 0.5:
            raise ValueError("taylor_switch_radius must lie in (0, 0.5]")
        if self.taylor_order < 8:
            raise ValueError("taylor_order must be at least 8")
        for name in ("series_radius", "eta1_switch", "newton_tol", "delta"):
            if not getattr(self, name) > 0.0:
                raise ValueError(f"{name} must be positive")
        if self.newton_max_iter < 1:
            raise ValueError("newton_max_iter must be positive")


DEFAULT_CONFIG = AsymptoticConfig()


@dataclass(frozen=True)
class EtaTransform:
    nu: float
    xi: float
    lam: float
    eta: float

    @classmethod
    def from_beta(cls, x: float, a: float, b: float) -> "EtaTransform":
        if not (a > 0.0 and b > 0.0):
            raise DomainError(f"need a, b > 0, got a={a!r}, b={b!r}")
        nu = a + b
        xi = a / nu
        return cls(nu=nu, xi=xi, lam=math.sqrt(xi * (1.0 - xi)), eta=eta_from_x(x, xi))


def _half_eta_sq(x: float, xi: float, xc: float | None = None) -> float:
    """eta**2 / 2 for the pair (x, xi); ``xc`` is 1 - x when known exactly."""
    if xc is None:
        xc = 1.0 - x
    xic = 1.0 - xi
    u = x - xi if x <= 0.5 else xic - xc
    r1 = u / xi
    r2 = -u / xic
    if abs(r1) < 0.5 and abs(r2) < 0.5:
        # first-order terms cancel exactly; both pieces are <= 0
        return -(xi * log1pmx(r1) + xic * log1pmx(r2))
    return -(xi * math.log(x / xi) + xic * math.log(xc / xic))


def _signed_eta(x: float, xi: float, xc: float | None = None) -> float:
    h = _half_eta_sq(x, xi, xc)
    eta = math.sqrt(2.0 * max(h, 0.0))
    if x < xi:
        return -eta
    return eta if x > xi else 0.0


def eta_from_x(x: float, xi: float) -> float:
    """Signed eta for the point x with sign(eta) = sign(x - xi)."""
    if not (0.0 < xi < 1.0):
        raise DomainError(f"xi must lie in (0, 1), got {xi!r}")
    if not (0.0 < x < 1.0):
        raise DomainError(f"x must lie strictly inside (0, 1), got {x!r}")
    return _signed_eta(x, xi)


def _expit_pair(s: float) -> tuple[float, float]:
    if s >= 0.0:
        e = math.exp(-s)
        return 1.0 / (1.0 + e), e / (1.0 + e)
    e = math.exp(s)
    return e / (1.0 + e), 1.0 / (1.0 + e)


def x_from_eta(eta: float, xi: float, cfg: AsymptoticConfig = DEFAULT_CONFIG) -> float:
    """Invert eta_from_x in x for fixed xi.

    Raises OutOfRangeError when the root is not a double strictly inside
    (0, 1).
    """
    x, _ = _x_pair_from_eta(eta, xi, cfg)
    if not (0.0 < x < 1.0):
        raise OutOfRangeError(f"eta={eta!r} maps outside the representable open interval")
    return x


def _x_pair_from_eta(eta: float, xi: float, cfg: AsymptoticConfig) -> tuple[float, float]:
    """(x, 1 - x) for the given eta, each to full relative precision.

    Newton iteration runs on s = logit(x), where d eta / d s = (x - xi) / eta
    stays bounded and the tails are nearly linear; bisection keeps it
    inside a bracket.
    """
    if not (0.0 < xi < 1.0):
        raise DomainError(f"xi must lie in (0, 1), got {xi!r}")
    if not math.isfinite(eta):
        raise OutOfRangeError(f"eta must be finite, got {eta!r}")
    if eta == 0.0:
        return xi, 1.0 - xi
    lam = math.sqrt(xi * (1.0 - xi))
    lo, hi = -_S_LIMIT, _S_LIMIT
    x_lo, xc_lo = _expit_pair(lo)
    x_hi, xc_hi = _expit_pair(hi)
    eta_lo = _signed_eta(x_lo, xi, xc_lo)
    eta_hi = _signed_eta(x_hi, xi, xc_hi)
    if not (eta_lo < eta < eta_hi):
        raise OutOfRangeError(f"eta={eta!r} is not attained for xi={xi!r} in double precision")
    s = math.log(xi / (1.0 - xi)) + eta / lam
    s = min(max(s, lo), hi)
    for _ in range(cfg.newton_max_iter):
        x, xc = _expit_pair(s)
        e = _signed_eta(x, xi, xc)
        g = e - eta
        if g == 0.0:
            break
        if g > 0.0:
            hi = s
        else:
            lo = s
        u = x - xi if x <= 0.5 else (1.0 - xi) - xc
        slope = u / e if e != 0.0 else lam
        s_new = s - g / slope if slope > 0.0 else 0.5 * (lo + hi)
        if not (lo < s_new < hi):
            s_new = 0.5 * (lo + hi)
        if abs(s_new - s) <= cfg.newton_tol * max(1.0, abs(s)):
            s = s_new
            break
        s = s_new
    return _expit_pair(s)


@functools.lru_cache(maxsize=512)
def _b_series(xi: float, order: int) -> tuple[float, ...]:
    """Coefficients b_k of (t - xi) / lambda**2 in powers of zeta / lambda."""
    xic = 1.0 - xi
    n = order + 1
    # (zeta/lambda)^2 = sum_{m>=2} e_m v^m with v = (t - xi) / lambda^2
    e = [
        -(2.0 / m) * ((-1.0) ** (m + 1) * xic ** (m - 1) - xi ** (m - 1))
        for m in range(2, n + 2)
    ]
    root = series.sqrt(e, n)
    return tuple(series.revert([0.0] + root[: n - 1], n))


@functools.lru_cache(maxsize=512)
def taylor_f(xi: float, order: int = DEFAULT_CONFIG.taylor_order) -> tuple[float, ...]:
    """Taylor coefficients a_0..a_order of f(zeta) about zeta = 0."""
    if not (0.0 < xi < 1.0):
        raise DomainError(f"xi must lie in (0, 1), got {xi!r}")
    b = _b_series(xi, order + 1)
    c = series.reciprocal(list(b[1:]), order + 1)
    lam = math.sqrt(xi * (1.0 - xi))
    return tuple(ck / lam**k for k, ck in enumerate(c))


def _switch_radius(xi: float, cfg: AsymptoticConfig) -> float:
    # the Taylor series of f converges on a disc that shrinks with lambda
    return cfg.taylor_switch_radius * 2.0 * math.sqrt(xi * (1.0 - xi))


def f_of_zeta(zeta: float, xi: float, cfg: AsymptoticConfig = DEFAULT_CONFIG) -> float:
    """f(zeta) = zeta lambda / (t - xi), with f(0) = 1."""
    if not (0.0 < xi < 1.0):
        raise DomainError(f"xi must lie in (0, 1), got {xi!r}")
    if abs(zeta) <= _switch_radius(xi, cfg):
        return series.evaluate(taylor_f(xi, cfg.taylor_order), zeta)
    t, tc = _x_pair_from_eta(zeta, xi, cfg)
    u = t - xi if t <= 0.5 else (1.0 - xi) - tc
    return zeta * math.sqrt(xi * (1.0 - xi)) / u


def fk_coefficients(xi: float) -> list[float]:
    """F_0..F_3 of the large-nu expansion of F_nu(inf)."""
    lam2 = xi * (1.0 - xi)
    w = 1.0 - xi + xi * xi
    f3_num = (
        139 * xi**6 - 417 * xi**5 + 402 * xi**4 - 109 * xi**3 + 402 * xi**2 - 417 * xi + 139
    )
    return [1.0, w / (12.0 * lam2), w * w / (288.0 * lam2**2), -f3_num / (51840.0 * lam2**3)]


def f_nu_infinity(a: float, b: float) -> float:
    """Gamma*(a) Gamma*(b) / Gamma*(a + b)."""
    if not (a > 0.0 and b > 0.0):
        raise DomainError(f"need a, b > 0, got a={a!r}, b={b!r}")
    return math.exp(log_gamma_star(a) + log_gamma_star(b) - log_gamma_star(a + b))


def f_nu_infinity_series(a: float, b: float, terms: int = DEFAULT_CONFIG.max_fk_terms) -> float:
    """Truncated sum of F_k / nu**k, k < terms (diagnostics only)."""
    if not (a > 0.0 and b > 0.0):
        raise DomainError(f"need a, b > 0, got a={a!r}, b={b!r}")
    if not 1 <= terms <= 4:
        raise ValueError("terms must be between 1 and 4")
    nu = a + b
    fk = fk_coefficients(a / nu)
    return sum(fk[k] / nu**k for k in range(terms))


def _c0_c1(eta: float, t: float, xi: float, tc: float | None = None) -> tuple[float, float]:
    """C_0 and C_1 at eta, where t is the beta argument that maps to eta."""
    lam2 = xi * (1.0 - xi)
    lam = math.sqrt(lam2)
    etahat = eta / lam
    if abs(etahat) < _TINY_ETAHAT:
        # a_k = c_k / lambda^k with the tabulated c_1..c_4
        w = xi * xi - xi + 1.0
        a1 = (2.0 * xi - 1.0) / (3.0 * lam)
        a2 = w / (12.0 * lam2)
        a3 = -(2.0 * xi - 1.0) * (xi - 2.0) * (xi + 1.0) / (135.0 * lam2 * lam)
        a4 = w * w / (864.0 * lam2 * lam2)
        return a1 + eta * (a2 + eta * (a3 + eta * a4)), 2.0 * a3 + 3.0 * a4 * eta
    if tc is None:
        tc = 1.0 - t
    u = t - xi if t <= 0.5 else (1.0 - xi) - tc
    f = eta * lam / u
    c0 = (f - 1.0) / eta
    f1 = (1.0 - f**3 * t * tc / lam2) / (eta * eta)
    c1 = (f1 - (1.0 - xi + xi * xi) / (12.0 * lam2)) / eta
    return c0, c1


def ck_coefficients(
    eta: float,
    xi: float,
    k_max: int,
    cfg: AsymptoticConfig = DEFAULT_CONFIG,
    t: float | None = None,
) -> list[float]:
    """C_0..C_k_max of the remainder expansion.

    Inside the Taylor switch radius every C_k is read off the truncated
    Taylor series of f via C_k = (f_k - f_k(0)) / zeta with
    f_{k+1} = d C_k / d zeta; the closed forms cancel badly there.  Outside
    it C_0 and C_1 come from closed forms in f and f' (using the beta
    argument ``t`` when the caller has it), and C_k for k >= 2 are
    extrapolated from the series with an AccuracyWarning.
    """
    if not (0.0 < xi < 1.0):
        raise DomainError(f"xi must lie in (0, 1), got {xi!r}")
    if k_max < 0:
        raise ValueError("k_max must be non-negative")
    if k_max >= cfg.taylor_order // 2:
        raise ValueError(f"k_max={k_max} too large for taylor_order={cfg.taylor_order}")
    inside = abs(eta) <= _switch_radius(xi, cfg)
    if k_max >= 2 and not inside:
        warnings.warn(
            f"C_k for k >= 2 extrapolated from the Taylor series at |eta|={abs(eta):.3g}",
            AccuracyWarning,
            stacklevel=2,
        )
    out = []
    if not inside:
        tc = None
        if t is None:
            t, tc = _x_pair_from_eta(eta, xi, cfg)
        out.extend(_c0_c1(eta, t, xi, tc)[: k_max + 1])
    if k_max >= len(out):
        s = list(taylor_f(xi, cfg.taylor_order))[1:]
        for k in range(k_max + 1):
            if k >= len(out):
                out.append(series.evaluate(s, eta))
            s = series.derivative(s)[1:]
    return out


def _check_strip(xi: float, cfg: AsymptoticConfig) -> None:
    if not (cfg.delta <= xi <= 1.0 - cfg.delta):
        warnings.warn(
            f"xi={xi:.3g} is outside the uniform-validity strip [{cfg.delta}, {1 - cfg.delta}]",
            AccuracyWarning,
            stacklevel=3,
        )


def inc_beta_asym_terms(
    x: float,
    a: float,
    b: float,
    cfg: AsymptoticConfig = DEFAULT_CONFIG,
    xc: float | None = None,
) -> tuple[float, float]:
    """Asymptotic I_x(a, b) together with the size of its last included term.

    ``xc`` may carry 1 - x exactly when x is close to 1.
    """
    if not (a > 0.0 and b > 0.0):
        raise DomainError(f"need a, b > 0, got a={a!r}, b={b!r}")
    if not (0.0 <= x <= 1.0):
        raise DomainError(f"x must lie in [0, 1], got {x!r}")
    if x == 0.0:
        return 0.0, 0.0
    if x == 1.0:
        return 1.0, 0.0
    if xc is None:
        xc = 1.0 - x
    nu = a + b
    xi = a / nu
    _check_strip(xi, cfg)
    half_sq = _half_eta_sq(x, xi, xc)
    eta = math.sqrt(2.0 * max(half_sq, 0.0))
    if x < xi:
        eta = -eta
    elif x == xi:
        eta = 0.0
    k_max = cfg.max_ck_terms - 1
    if k_max <= 1:
        ck = list(_c0_c1(eta, x, xi, xc))[: k_max + 1]
    else:
        ck = ck_coefficients(eta, xi, k_max, cfg, t=x)
    scale = math.exp(-nu * half_sq) / (_SQRT_2PI * math.sqrt(nu) * f_nu_infinity(a, b))
    terms = [scale * c / nu**k for k, c in enumerate(ck)]
    main = 0.5 * math.erfc(-eta * math.sqrt(0.5 * nu))
    return main - math.fsum(terms), abs(terms[-1])


def inc_beta_asym(x: float, a: float, b: float, cfg: AsymptoticConfig = DEFAULT_CONFIG) -> float:
    """I_x(a, b) from the erfc representation with max_ck_terms remainder terms.

    Intended for large nu = a + b with a/nu inside [delta, 1 - delta].
    """
    return inc_beta_asym_terms(x, a, b, cfg)[0]
