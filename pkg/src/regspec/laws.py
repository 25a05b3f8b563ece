"""Reference spectral laws: the semicircle and Kesten-McKay densities, CDFs,
moments and the semicircle Stieltjes transform."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import integrate

from .exceptions import DomainError, ParameterError


class LawKind(enum.Enum):
    SEMICIRCLE = "semicircle"
    KESTEN_MCKAY = "kesten-mckay"


@dataclass(frozen=True)
class LawSpec:
    """A reference law, optionally the law of ``scale * X``.

    ``kesten_mckay(d, normalized=True)`` is the law of ``X / sqrt(d - 1)``,
    the natural comparison for the spectrum of ``A / sqrt(d - 1)``.
    """

    kind: LawKind
    d: int | None = None
    scale: float = 1.0

    def __post_init__(self):
        if self.kind is LawKind.KESTEN_MCKAY:
            if self.d is None or self.d < 3:
                raise ParameterError("Kesten-McKay law needs d >= 3")
        elif self.d is not None:
            raise ParameterError("semicircle law takes no degree")
        if not self.scale > 0:
            raise ParameterError("scale must be positive")

    @property
    def radius(self) -> float:
        if self.kind is LawKind.SEMICIRCLE:
            return 2.0 * self.scale
        return 2.0 * math.sqrt(self.d - 1) * self.scale

    @property
    def support(self) -> tuple[float, float]:
        return (-self.radius, self.radius)


def semicircle() -> LawSpec:
    return LawSpec(LawKind.SEMICIRCLE)


def kesten_mckay(d: int, normalized: bool = False) -> LawSpec:
    return LawSpec(LawKind.KESTEN_MCKAY, d, 1 / math.sqrt(d - 1) if normalized else 1.0)


def _base_density(law: LawSpec, x):
    x = np.asarray(x, dtype=float)
    if law.kind is LawKind.SEMICIRCLE:
        inside = np.clip(4 - x * x, 0, None)
        return np.sqrt(inside) / (2 * math.pi)
    d = law.d
    inside = np.clip(4 * (d - 1) - x * x, 0, None)
    return d * np.sqrt(inside) / (2 * math.pi * (d * d - x * x))


def density(law: LawSpec, x):
    """Density at ``x`` (scalar or array); zero outside the support."""
    y = np.asarray(x, dtype=float) / law.scale
    out = _base_density(law, y) / law.scale
    return float(out) if out.ndim == 0 else out


def _sc_cdf(y: float) -> float:
    if y <= -2:
        return 0.0
    if y >= 2:
        return 1.0
    return 0.5 + y * math.sqrt(4 - y * y) / (4 * math.pi) + math.asin(y / 2) / math.pi


@lru_cache(maxsize=64)
def _km_theta_integrand(d: int):
    big_r = 2 * math.sqrt(d - 1)

    # x = R cos(t) removes the square-root endpoint singularities
    def f(t):
        s = math.sin(t)
        c = math.cos(t)
        return d * big_r * big_r * s * s / (2 * math.pi * (d * d - big_r * big_r * c * c))

    return f, big_r


def _km_cdf(d: int, y: float) -> float:
    f, big_r = _km_theta_integrand(d)
    if y <= -big_r:
        return 0.0
    if y >= big_r:
        return 1.0
    t = math.acos(y / big_r)
    val, _ = integrate.quad(f, t, math.pi, epsabs=1e-13, epsrel=1e-11, limit=200)
    return min(max(val, 0.0), 1.0)


def cdf(law: LawSpec, x):
    """Cumulative distribution function (scalar or array input)."""
    arr = np.asarray(x, dtype=float)
    ys = arr / law.scale
    if law.kind is LawKind.SEMICIRCLE:
        fn = _sc_cdf
    else:
        def fn(y):
            return _km_cdf(law.d, y)
    out = np.array([fn(float(y)) for y in ys.ravel()]).reshape(ys.shape)
    return float(out) if out.ndim == 0 else out


def integrate_semicircle(a: float, b: float) -> float:
    """Semicircle mass of ``[a, b]``."""
    return _sc_cdf(b) - _sc_cdf(a)


def stieltjes_sc(z: complex) -> complex:
    """``s(z) = (-z + sqrt(z^2 - 4))/2`` with the upper-half-plane root."""
    z = complex(z)
    if not z.imag > 0:
        raise DomainError(f"need Im z > 0, got z={z}")
    s = np.sqrt(complex(z * z - 4))
    if s.imag < 0:
        s = -s
    return complex((-z + s) / 2)


def semicircle_moment(r: int) -> int:
    """``r``-th moment of the semicircle law: Catalan ``C_{r/2}`` or 0."""
    if r < 0:
        raise ParameterError("moment order must be non-negative")
    if r % 2:
        return 0
    k = r // 2
    return math.comb(2 * k, k) // (k + 1)


def kesten_mckay_moment(r: int, d: int) -> int:
    """``r``-th moment of the (unnormalized) Kesten-McKay law by quadrature.

    The value is an integer (closed walks at the root of the infinite
    ``d``-regular tree); the quadrature result is rounded and rejected if it
    is not within ``1e-6`` relative of that integer.
    """
    if r < 0:
        raise ParameterError("moment order must be non-negative")
    if d < 3:
        raise ParameterError("Kesten-McKay law needs d >= 3")
    if r % 2:
        return 0
    f, big_r = _km_theta_integrand(d)
    val, _ = integrate.quad(
        lambda t: (big_r * math.cos(t)) ** r * f(t), 0, math.pi, epsabs=1e-12, epsrel=1e-13, limit=400
    )
    k = round(val)
    if abs(val - k) > 1e-6 * max(1.0, abs(val)):
        raise ArithmeticError(f"quadrature moment {val} not near an integer")
    return int(k)


def closed_walk_count(r: int, d: int) -> int:
    """Closed walks of length ``r`` at the root of the infinite ``d``-regular
    tree, by dynamic programming over the distance from the root."""
    if r < 0:
        raise ParameterError("walk length must be non-negative")
    depth = r // 2 + 1
    ways = [0] * (depth + 1)
    ways[0] = 1
    for _ in range(r):
        nxt = [0] * (depth + 1)
        for k, c in enumerate(ways):
            if not c:
                continue
            # from the root there are d ways out; elsewhere d-1 out and 1 back
            if k == 0:
                if depth >= 1:
                    nxt[1] += d * c
            else:
                nxt[k - 1] += c
                if k + 1 <= depth:
                    nxt[k + 1] += (d - 1) * c
        ways = nxt
    return ways[0]
