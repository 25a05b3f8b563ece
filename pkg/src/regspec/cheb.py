"""Chebyshev polynomials of the second kind at complex arguments, the
Joukowski parameterization ``z = (w + 1/w)/2`` and its level ellipses."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .exceptions import DomainError, ParameterError

# Below this |w| the three-term recursion is used; above it the closed form.
RECURSION_SWITCH = 1.0 + 1e-2


def branch_sqrt(x: complex) -> complex:
    """Square root with non-negative imaginary part."""
    s = cmath.sqrt(x)
    if s.imag < 0:
        s = -s
    return s


@dataclass(frozen=True)
class JoukowskiPair:
    z: complex
    w: complex
    root: complex  # the chosen sqrt(z**2 - 1); w = z + root


def joukowski(z: complex) -> JoukowskiPair:
    """Exterior preimage ``w`` of ``z`` under the Joukowski map.

    For ``Im z > 0`` this is ``z + sqrt(z^2 - 1)`` with the square root in the
    closed upper half-plane.  On the real axis and below it the sign is
    chosen so that ``|w| >= 1`` (for ``Im z < 0`` this is the conjugate of
    the upper half-plane choice).
    """
    z = complex(z)
    s = cmath.sqrt(z * z - 1.0)
    if z.imag > 0:
        if s.imag < 0:
            s = -s
    elif z.imag < 0:
        if s.imag > 0:
            s = -s
    elif abs(z + s) < abs(z - s):
        s = -s
    return JoukowskiPair(z, z + s, s)


def _u_recursion(n: int, z: complex) -> complex:
    prev, cur = 0j, 1 + 0j
    two_z = 2 * z
    for _ in range(n):
        prev, cur = cur, two_z * cur - prev
    return cur


def cheb_u(n: int, z: complex) -> complex:
    """``U_n(z)``; ``U_{-1} = 0`` and ``U_0 = 1``."""
    if n < -1:
        raise ParameterError(f"U_n is defined here for n >= -1, got {n}")
    if n == -1:
        return 0j
    z = complex(z)
    w = joukowski(z).w
    if abs(w) <= RECURSION_SWITCH:
        return _u_recursion(n, z)
    k = n + 1
    return (w**k - w ** (-k)) / (w - 1 / w)


def cheb_u_prime(n: int, z: complex) -> complex:
    """Derivative of ``U_n`` at ``z`` via the differentiated recursion."""
    if n < 0:
        raise ParameterError(f"need n >= 0, got {n}")
    z = complex(z)
    u_prev, u = 0j, 1 + 0j
    du_prev, du = 0j, 0j
    for _ in range(n):
        u_prev, u, du_prev, du = (
            u,
            2 * z * u - u_prev,
            du,
            2 * u + 2 * z * du - du_prev,
        )
    return du


def ellipse_points(r: float, m: int) -> np.ndarray:
    """``m`` points of ``E_r``: images of ``r * exp(2 pi i k / m)``."""
    if not r > 1:
        raise ParameterError(f"ellipse parameter must exceed 1, got {r}")
    if m < 1:
        raise ParameterError("need at least one point")
    w = r * np.exp(2j * np.pi * np.arange(m) / m)
    return (w + 1 / w) / 2


def ellipse_param(z: complex) -> float:
    """The ``r`` with ``z`` on ``E_r``."""
    return abs(joukowski(z).w)


def cheb_bound_check(n: int, r: float, z: complex, slack: float = 1e-9) -> bool:
    """Check ``(r^n - r^-n)/(r + 1/r) <= |U_{n-1}(z)| <= (r^n - r^-n)/(r - 1/r)``
    for ``z`` on ``E_r``; both sides get relative slack ``slack``."""
    if n < 1:
        raise ParameterError(f"need n >= 1, got {n}")
    if abs(ellipse_param(z) - r) > 1e-6:
        raise DomainError(f"z={z} is not on E_{r} (|w|={ellipse_param(z)})")
    num = r**n - r ** (-n)
    lower = num / (r + 1 / r)
    upper = num / (r - 1 / r)
    val = abs(cheb_u(n - 1, z))
    return lower * (1 - slack) <= val <= upper * (1 + slack)


def half_scale_zeros(k: int) -> np.ndarray:
    """Zeros ``cos(j pi/(k+1))``, ``j = 1..k``, of ``U_k``, descending."""
    j = np.arange(1, k + 1)
    return np.cos(j * math.pi / (k + 1))
