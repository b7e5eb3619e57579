"""Truncated power-series arithmetic on plain float lists.

A series ``a`` represents ``a[0] + a[1] z + a[2] z**2 + ...``; every
operation truncates its result to ``n`` coefficients.  Sizes here are
small (a couple of dozen terms), so plain lists beat numpy.
"""

from __future__ import annotations

import math
from typing import Sequence

Series = list[float]


def _pad(a: Sequence[float], n: int) -> Series:
    out = list(a[:n])
    out.extend([0.0] * (n - len(out)))
    return out


def mul(a: Sequence[float], b: Sequence[float], n: int) -> Series:
    out = [0.0] * n
    for i, ai in enumerate(a[:n]):
        if ai == 0.0:
            continue
        for j, bj in enumerate(b[: n - i]):
            out[i + j] += ai * bj
    return out


def reciprocal(a: Sequence[float], n: int) -> Series:
    a = _pad(a, n)
    if a[0] == 0.0:
        raise ZeroDivisionError("series has zero constant term")
    out = [0.0] * n
    out[0] = 1.0 / a[0]
    for k in range(1, n):
        s = 0.0
        for j in range(1, k + 1):
            s += a[j] * out[k - j]
        out[k] = -s / a[0]
    return out


def div(a: Sequence[float], b: Sequence[float], n: int) -> Series:
    return mul(a, reciprocal(b, n), n)


def sqrt(a: Sequence[float], n: int) -> Series:
    """Principal square root; requires ``a[0] > 0``."""
    a = _pad(a, n)
    if a[0] <= 0.0:
        raise ValueError("series sqrt needs a positive constant term")
    out = [0.0] * n
    out[0] = math.sqrt(a[0])
    for k in range(1, n):
        s = a[k]
        for j in range(1, k):
            s -= out[j] * out[k - j]
        out[k] = s / (2.0 * out[0])
    return out


def derivative(a: Sequence[float]) -> Series:
    return [k * a[k] for k in range(1, len(a))]


def log(a: Sequence[float], n: int) -> Series:
    """Logarithm via log(a) = log(a0) + integral of a'/a; requires ``a[0] > 0``."""
    a = _pad(a, n)
    if a[0] <= 0.0:
        raise ValueError("series log needs a positive constant term")
    q = div(derivative(a), a, n - 1)
    return [math.log(a[0])] + [q[k - 1] / k for k in range(1, n)]


def log1p_linear(c: float, n: int) -> Series:
    """Coefficients of log(1 + c z)."""
    out = [0.0] * n
    term = 1.0
    for k in range(1, n):
        term *= c
        out[k] = term / k if k % 2 else -term / k
    return out


def compose(a: Sequence[float], b: Sequence[float], n: int) -> Series:
    """a(b(z)) for ``b[0] == 0``."""
    if b and b[0] != 0.0:
        raise ValueError("inner series must vanish at the origin")
    a = _pad(a, n)
    out = [0.0] * n
    for c in reversed(a):
        out = mul(out, b, n)
        out[0] += c
    return out


def revert(a: Sequence[float], n: int) -> Series:
    """Compositional inverse of ``a`` (``a[0] == 0``, ``a[1] != 0``).

    Uses Lagrange inversion: ``g_k = [w^(k-1)] (w / a(w))^k / k``.
    """
    a = _pad(a, n + 1)
    if a[0] != 0.0 or a[1] == 0.0:
        raise ValueError("reversion needs a[0] == 0 and a[1] != 0")
    phi = reciprocal(a[1:], n)
    out = [0.0] * n
    power = [1.0] + [0.0] * (n - 1)
    for k in range(1, n):
        power = mul(power, phi, n)
        out[k] = power[k - 1] / k
    return out


def evaluate(a: Sequence[float], z: float) -> float:
    s = 0.0
    for c in reversed(a):
        s = s * z + c
    return s
