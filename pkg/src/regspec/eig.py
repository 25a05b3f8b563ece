"""Dense real symmetric eigensolver for graph adjacency matrices."""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .exceptions import CapacityError, ConvergenceError, InvariantError, NotFoundError
from .graphgen import Graph

DENSE_CAP = 6000


@dataclass(frozen=True)
class Spectrum:
    """Ascending eigenvalues of ``scale * A``, optionally with eigenvectors.

    ``vectors[:, i]`` is the unit eigenvector belonging to ``values[i]``.
    """

    values: np.ndarray
    vectors: np.ndarray | None = None
    scale: float = 1.0

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float).reshape(-1)
        if vals.size and np.any(np.diff(vals) < 0):
            raise InvariantError("spectrum values must be non-decreasing")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)
        if self.vectors is not None:
            vec = np.asarray(self.vectors, dtype=float)
            if vec.shape != (vals.size, vals.size):
                raise InvariantError(f"vectors shape {vec.shape} does not match {vals.size} values")
            vec.setflags(write=False)
            object.__setattr__(self, "vectors", vec)

    @property
    def n(self) -> int:
        return self.values.size

    def max_residual(self, matrix: np.ndarray) -> float:
        """``max_i ||M v_i - λ_i v_i||_inf / (1 + |λ_i|)``."""
        if self.vectors is None:
            raise NotFoundError("spectrum has no eigenvectors")
        res = matrix @ self.vectors - self.vectors * self.values
        return float(np.max(np.abs(res).max(axis=0) / (1 + np.abs(self.values))))

    def orthonormality_error(self) -> float:
        if self.vectors is None:
            raise NotFoundError("spectrum has no eigenvectors")
        gram = self.vectors.T @ self.vectors
        return float(np.max(np.abs(gram - np.eye(self.n))))


def eig_matrix(
    matrix: np.ndarray, scale: float = 1.0, want_vectors: bool = False, max_n: int = DENSE_CAP
) -> Spectrum:
    """Full spectrum of ``scale * matrix`` for a dense symmetric matrix."""
    m = np.asarray(matrix, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise InvariantError(f"expected a square matrix, got shape {m.shape}")
    if m.shape[0] > max_n:
        raise CapacityError(f"dense eigensolver capped at n={max_n}, got {m.shape[0]}")
    m = scale * m
    try:
        if want_vectors:
            vals, vecs = np.linalg.eigh(m)
        else:
            vals, vecs = np.linalg.eigvalsh(m), None
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(str(exc)) from exc
    if vecs is not None:
        # fix the sign so that output is reproducible: largest entry positive
        idx = np.argmax(np.abs(vecs), axis=0)
        signs = np.sign(vecs[idx, np.arange(vecs.shape[1])])
        signs[signs == 0] = 1
        vecs = vecs * signs
    return Spectrum(np.sort(vals) if vecs is None else vals, vecs, float(scale))


def eig_symmetric(
    g: Graph, scale: float = 1.0, want_vectors: bool = False, max_n: int = DENSE_CAP
) -> Spectrum:
    """Spectrum of ``scale * A`` for the adjacency matrix ``A`` of ``g``."""
    if g.n > max_n:
        raise CapacityError(f"dense eigensolver capped at n={max_n}, got {g.n}")
    return eig_matrix(g.to_dense(), scale, want_vectors, max_n)


def default_scale(d: int | None) -> float:
    """``1/sqrt(d-1)``, the normalization under which spectra approach the
    semicircle; 1 when the degree is unknown or too small."""
    if d is None or d < 2:
        return 1.0
    return 1.0 / math.sqrt(d - 1)


def perron_index(s: Spectrum, g: Graph, tol: float = 1e-6) -> int:
    """Index of the eigenvalue ``d * scale`` of a connected ``d``-regular graph.

    Raises ``NotFoundError`` when that eigenvalue is missing or repeated
    (the latter means the graph is disconnected).
    """
    if g.d is None:
        raise NotFoundError("graph is not regular")
    target = g.d * s.scale
    hits = np.flatnonzero(np.abs(s.values - target) <= tol)
    if hits.size == 0:
        raise NotFoundError(f"no eigenvalue within {tol} of {target}")
    if hits.size > 1:
        raise NotFoundError(f"eigenvalue {target} has multiplicity {hits.size}; graph disconnected")
    i = int(hits[0])
    if s.vectors is not None:
        v = s.vectors[:, i]
        if np.max(np.abs(np.abs(v) - 1 / math.sqrt(s.n))) > tol:
            raise NotFoundError("top eigenvector is not uniform")
    return i


def write_spectrum_csv(s: Spectrum, path: str | Path, vectors_path: str | Path | None = None) -> None:
    """One eigenvalue per line; eigenvectors (one row per vertex) optional."""
    Path(path).write_text("".join(f"{v:.17g}\n" for v in s.values))
    if vectors_path is not None:
        if s.vectors is None:
            raise NotFoundError("spectrum has no eigenvectors to write")
        np.savetxt(vectors_path, s.vectors, delimiter=",", fmt="%.17g")


def read_spectrum_csv(path: str | Path, scale: float = 1.0) -> Spectrum:
    vals = np.loadtxt(path, ndmin=1)
    return Spectrum(np.sort(vals), None, scale)
