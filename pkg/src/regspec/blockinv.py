"""Inverses of symmetric 2x2 block matrices through either Schur complement,
and the root-resolvent comparison between a graph and its local tree."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .census import ball, ball_is_acyclic
from .exceptions import InvariantError, ParameterError, PreconditionError, SingularityError
from .graphgen import Graph

COND_LIMIT = 1e12
C0 = 100.0


class Complement(enum.Enum):
    F = "F"  # D - B' A^-1 B
    G = "G"  # A - B D^-1 B'


@dataclass(frozen=True)
class Block2x2:
    """``[[A, B], [B', D]]`` with complex symmetric diagonal blocks."""

    A: np.ndarray
    B: np.ndarray
    D: np.ndarray

    def __post_init__(self):
        a = np.atleast_2d(np.asarray(self.A, dtype=complex))
        d = np.atleast_2d(np.asarray(self.D, dtype=complex))
        b = np.asarray(self.B, dtype=float).reshape(a.shape[0], d.shape[0])
        for name, m in (("A", a), ("D", d)):
            if m.shape[0] != m.shape[1]:
                raise InvariantError(f"block {name} is not square: {m.shape}")
            if not np.allclose(m, m.T, rtol=0, atol=1e-12 * (1 + np.abs(m).max())):
                raise InvariantError(f"block {name} is not complex symmetric")
        object.__setattr__(self, "A", a)
        object.__setattr__(self, "B", b)
        object.__setattr__(self, "D", d)

    @classmethod
    def split(cls, matrix: np.ndarray, k: int) -> "Block2x2":
        """Blocks of ``matrix`` with ``A`` the leading ``k x k`` corner."""
        m = np.asarray(matrix)
        if not 0 < k < m.shape[0]:
            raise ParameterError(f"split point must lie in (0, {m.shape[0]}), got {k}")
        off = m[:k, k:]
        if np.abs(np.imag(off)).max(initial=0.0) > 0:
            raise ParameterError("off-diagonal block must be real")
        return cls(m[:k, :k], np.real(off), m[k:, k:])

    def assemble(self) -> np.ndarray:
        return np.block([[self.A, self.B], [self.B.T, self.D]])


def _checked_inv(m: np.ndarray, name: str) -> np.ndarray:
    cond = np.linalg.cond(m)
    if not np.isfinite(cond) or cond >= COND_LIMIT:
        raise SingularityError(f"block {name} is singular (condition number {cond:.3g})")
    return np.linalg.inv(m)


def schur_inverse(blk: Block2x2, which: Complement | str = Complement.F) -> np.ndarray:
    """Inverse of the assembled matrix from one of its Schur complements.

    With ``F = D - B' A^-1 B`` the inverse is
    ``[[A^-1 + A^-1 B F^-1 B' A^-1, -A^-1 B F^-1], [-F^-1 B' A^-1, F^-1]]``;
    the ``G`` variant exchanges the roles of ``A`` and ``D``.
    """
    which = Complement(which) if isinstance(which, str) else which
    a, b, d = blk.A, blk.B, blk.D
    if which is Complement.F:
        ai = _checked_inv(a, "A")
        fi = _checked_inv(d - b.T @ ai @ b, "F = D - B'A^-1B")
        top_right = -ai @ b @ fi
        return np.block([[ai - top_right @ b.T @ ai, top_right], [top_right.T, fi]])
    di = _checked_inv(d, "D")
    gi = _checked_inv(a - b @ di @ b.T, "G = A - BD^-1B'")
    bottom_left = -di @ b.T @ gi
    return np.block([[gi, bottom_left.T], [bottom_left, di - bottom_left @ b @ di]])


def resolvent_entry(matrix: np.ndarray, z: complex, i: int, j: int) -> complex:
    """``(M - z)^-1[i, j]`` by a dense LU solve against ``e_j``."""
    n = matrix.shape[0]
    rhs = np.zeros(n, dtype=complex)
    rhs[j] = 1.0
    return complex(np.linalg.solve(matrix - z * np.eye(n), rhs)[i])


@dataclass(frozen=True)
class EpsilonEstimate:
    epsilon: complex
    bound: float
    r: float
    graph_entry: complex
    tree_entry: complex

    @property
    def holds(self) -> bool:
        return abs(self.epsilon) <= self.bound


def epsilon_bound(zeta: int, z: complex, c0: float = C0) -> tuple[float, float]:
    """``(2 C0^2 / (1 - r^(-2 zeta - 4))) r^(-2 zeta - 2) / Im z`` with ``z/2``
    on ``E_r``; returns ``(bound, r)``."""
    from .cheb import ellipse_param

    z = complex(z)
    if not z.imag > 0:
        raise ParameterError(f"need Im z > 0, got {z}")
    r = ellipse_param(z / 2)
    bound = 2 * c0**2 / (1 - r ** (-2 * zeta - 4)) * r ** (-2 * zeta - 2) / z.imag
    return bound, r


def epsilon_root_estimate(
    g: Graph, root: int, d: int, zeta: int, z: complex, c0: float = C0
) -> EpsilonEstimate:
    """Difference between the root diagonal resolvent entry of
    ``A/sqrt(d-1)`` and that of the depth-``zeta`` ball around ``root``.

    The ``(zeta + 1)``-ball of ``root`` must be a tree; the depth-``zeta``
    ball is then the ``d``-regular tree of depth ``zeta`` (for a ``d``-regular
    graph).
    """
    if zeta < 1:
        raise ParameterError("need zeta >= 1")
    if d < 2:
        raise ParameterError("need d >= 2")
    bound, r = epsilon_bound(zeta, z, c0)
    if not ball_is_acyclic(g, root, zeta + 1):
        raise PreconditionError(f"the radius-{zeta + 1} ball around {root} contains a cycle")
    scale = 1 / math.sqrt(d - 1)
    full = g.to_dense(scale)
    members = sorted(ball(g, root, zeta))
    sub = full[np.ix_(members, members)]
    k = members.index(root)
    graph_entry = resolvent_entry(full, z, root, root)
    tree_entry = resolvent_entry(sub, z, k, k)
    eps = graph_entry - tree_entry
    out = EpsilonEstimate(eps, bound, r, graph_entry, tree_entry)
    if not out.holds:
        raise InvariantError(f"|epsilon| = {abs(eps):.3g} exceeds the bound {bound:.3g}")
    return out
