"""Closed forms for the finite trees: resolvent entries at the root, exact
spectrum of the almost-regular tree and the root's spectral weights.

All Chebyshev evaluations take ``z/2``; eigenvalues are reported at full
scale, i.e. for the matrix ``H / sqrt(d - 1)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .cheb import cheb_u, cheb_u_prime, ellipse_param
from .exceptions import DomainError, ParameterError, PreconditionError, SingularityError
from .graphgen import TreeKind, TreeShape
from .laws import stieltjes_sc

SINGULAR_TOL = 1e-14
C0 = 100.0


def _upper(z):
    z = complex(z)
    if not z.imag > 0:
        raise DomainError(f"need Im z > 0, got z={z}")
    return z


def _nonsingular(den, what):
    if abs(den) < SINGULAR_TOL:
        raise SingularityError(f"{what} denominator |{den}| below {SINGULAR_TOL}")
    return den


def phi_almost(d: int, zeta: int, z: complex) -> complex:
    """Root-root resolvent entry of the almost-regular tree, ``-U_ζ/U_{ζ+1}``.

    Independent of ``d``; the argument is kept for symmetry with the other
    entries.
    """
    z = _upper(z)
    h = z / 2
    return -cheb_u(zeta, h) / _nonsingular(cheb_u(zeta + 1, h), "U_{zeta+1}")


def phi_continued_fraction(zeta: int, z: complex) -> complex:
    """``-1/(z + -1/(z + ... -1/z))`` with ``zeta + 1`` levels."""
    z = _upper(z)
    x = 0j
    for _ in range(zeta + 1):
        x = -1 / (z + x)
    return x


def psi_almost(d: int, zeta: int, z: complex) -> complex:
    """Root-leaf resolvent entry of the almost-regular tree."""
    z = _upper(z)
    den = _nonsingular(cheb_u(zeta + 1, z / 2), "U_{zeta+1}")
    return -((d - 1) ** (-zeta / 2)) / den


def _regular_den(d, zeta, h):
    return cheb_u(zeta + 1, h) - cheb_u(zeta - 1, h) / (d - 1)


def phi_regular(d: int, zeta: int, z: complex) -> complex:
    """Root-root resolvent entry of the ``d``-regular tree of depth ``zeta``."""
    z = _upper(z)
    if zeta < 1:
        raise ParameterError("the regular-tree formula needs zeta >= 1")
    h = z / 2
    den = _nonsingular(_regular_den(d, zeta, h), "regular-tree")
    return -cheb_u(zeta, h) / den


def phi_regular_one_step(d: int, zeta: int, z: complex) -> complex:
    """Same entry from one Schur step on top of the almost-regular subtrees."""
    z = _upper(z)
    return 1 / (-z - d / (d - 1) * phi_almost(d, zeta - 1, z))


def psi_regular(d: int, zeta: int, z: complex) -> complex:
    """Root-leaf resolvent entry of the ``d``-regular tree."""
    z = _upper(z)
    if zeta < 1:
        raise ParameterError("the regular-tree formula needs zeta >= 1")
    den = _nonsingular(_regular_den(d, zeta, z / 2), "regular-tree")
    return -((d - 1) ** (-zeta / 2)) / den


@dataclass(frozen=True)
class TreeResolventValue:
    phi: complex
    psi: complex
    kind: TreeKind
    d: int
    zeta: int
    z: complex


def tree_resolvent(shape: TreeShape, z: complex) -> TreeResolventValue:
    if shape.kind is TreeKind.ALMOST_REGULAR:
        phi = phi_almost(shape.d, shape.zeta, z)
        psi = psi_almost(shape.d, shape.zeta, z)
    else:
        phi = phi_regular(shape.d, shape.zeta, z)
        psi = psi_regular(shape.d, shape.zeta, z)
    return TreeResolventValue(phi, psi, shape.kind, shape.d, shape.zeta, complex(z))


# --------------------------------------------------------------------------
# Estimates along ellipses
# --------------------------------------------------------------------------


@dataclass
class ResolventBoundsReport:
    d: int
    zeta: int
    r: float
    c0: float
    num_points: int
    max_ratio: dict[str, float] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(v <= 1.0 for v in self.max_ratio.values())


def resolvent_bounds_check(
    d: int, zeta: int, r: float, m: int = 64, c0: float = C0
) -> ResolventBoundsReport:
    """Evaluate the three tree-resolvent estimates for ``z/2`` on ``E_r``.

    Points are taken on the upper half of the ellipse (the lower half
    follows by conjugation).  The ratios reported are lhs/rhs maximised over
    the sample; the check passes when every ratio is at most one.
    """
    if not r > 1:
        raise ParameterError("need r > 1")
    q = r ** (-zeta)
    if not q < 0.5:
        raise PreconditionError(f"need r^-zeta < 1/2, got {q:.4g}")
    theta = math.pi * (np.arange(m) + 0.5) / m
    w = r * np.exp(1j * theta)
    halves = (w + 1 / w) / 2

    b = d - 1
    rhs_phi = c0 * (2 * r ** (-2 * zeta) / (1 - r ** (-2 * zeta - 2)) + 1 / b)
    geo = r ** (-zeta - 1) / b ** (zeta / 2) / (1 - r ** (-2 * zeta - 4))
    rhs_psi = 2 * geo
    rhs_psi_d = c0 * geo

    worst = {"phi_regular": 0.0, "psi_almost": 0.0, "psi_regular": 0.0}
    for h in halves:
        z = 2 * complex(h)
        lhs = abs(phi_regular(d, zeta, z) - stieltjes_sc(z))
        worst["phi_regular"] = max(worst["phi_regular"], lhs / rhs_phi)
        worst["psi_almost"] = max(worst["psi_almost"], abs(psi_almost(d, zeta, z)) / rhs_psi)
        worst["psi_regular"] = max(worst["psi_regular"], abs(psi_regular(d, zeta, z)) / rhs_psi_d)
    return ResolventBoundsReport(d, zeta, r, c0, m, worst)


# --------------------------------------------------------------------------
# Exact spectrum of the almost-regular tree
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class TreeSpectrum:
    entries: tuple[tuple[float, int], ...]

    @property
    def total(self) -> int:
        return sum(m for _, m in self.entries)

    @property
    def values(self) -> np.ndarray:
        return np.array([v for v, _ in self.entries])

    @property
    def multiplicities(self) -> np.ndarray:
        return np.array([m for _, m in self.entries], dtype=np.int64)

    def expanded(self) -> np.ndarray:
        """All eigenvalues with repetition, ascending."""
        return np.repeat(self.values, self.multiplicities)


def tree_char_poly_eigs(shape: TreeShape) -> TreeSpectrum:
    """Eigenvalues of ``H/sqrt(d-1)`` for the almost-regular tree.

    Layer ``i = 0`` contributes the zeros of ``U_{ζ+1}`` once each; layer
    ``i >= 1`` contributes the zeros of ``U_{ζ+1-i}`` with multiplicity
    ``(d-1)^i - (d-1)^(i-1)``.  The zeros are ``2 cos(j pi/(k+1))``, so two
    layers share an eigenvalue exactly when the fractions ``j/(k+1)``
    coincide; merging is done on those fractions.
    """
    if shape.kind is not TreeKind.ALMOST_REGULAR:
        raise ParameterError("closed-form spectrum is available for the almost-regular tree only")
    d, zeta = shape.d, shape.zeta
    b = d - 1
    mult: dict[Fraction, int] = {}
    for i in range(zeta + 1):
        k = zeta + 1 - i
        m = 1 if i == 0 else b**i - b ** (i - 1)
        if m == 0:
            continue
        for j in range(1, k + 1):
            key = Fraction(j, k + 1)
            mult[key] = mult.get(key, 0) + m
    entries = sorted((_zero_value(f), m) for f, m in mult.items())
    return TreeSpectrum(tuple(entries))


def _zero_value(f: Fraction) -> float:
    # 2 cos(pi f) written as a sine so that f = 1/2 gives exactly 0 and
    # f, 1 - f give exactly opposite values
    return 2 * math.sin(math.pi * float(Fraction(1, 2) - f))


def root_mass(shape: TreeShape, eigenvalue: float) -> float:
    """Squared root coordinate of the eigenspace of ``eigenvalue``.

    ``eigenvalue`` is full scale, a zero of ``U_{ζ+1}(x/2)``; the mass is
    ``2 U_ζ(λ) / U'_{ζ+1}(λ)`` at the half-scale zero ``λ = eigenvalue/2``.
    """
    if shape.kind is not TreeKind.ALMOST_REGULAR:
        raise ParameterError("root masses are available for the almost-regular tree only")
    lam = float(eigenvalue) / 2
    zeta = shape.zeta
    if abs(cheb_u(zeta + 1, lam)) > 1e-8:
        raise DomainError(f"{eigenvalue} is not a zero of U_{zeta + 1}(x/2)")
    return (2 * cheb_u(zeta, lam) / cheb_u_prime(zeta + 1, lam)).real


def root_masses(shape: TreeShape) -> list[tuple[float, float]]:
    """``(eigenvalue, mass)`` for every eigenvalue carrying root weight."""
    k = shape.zeta + 1
    out = []
    for j in range(k, 0, -1):
        ev = _zero_value(Fraction(j, k + 1))
        out.append((ev, root_mass(shape, ev)))
    return out


def ellipse_r_of(z: complex) -> float:
    """``r`` such that ``z/2`` lies on ``E_r``."""
    return ellipse_param(complex(z) / 2)
