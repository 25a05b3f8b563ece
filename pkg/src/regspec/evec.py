"""Eigenvector localization metrics."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

import numpy as np

from .eig import Spectrum
from .exceptions import NotFoundError, ParameterError

NORM_TOL = 1e-8
DEGENERATE_GAP = 1e-8


def _unit(v) -> np.ndarray:
    v = np.asarray(v, dtype=float).reshape(-1)
    norm = float(np.linalg.norm(v))
    if abs(norm - 1) > NORM_TOL:
        raise ParameterError(f"vector is not normalized (norm {norm!r})")
    return v


def mass_on_set(v, T: Iterable[int]) -> float:
    """``sum_{j in T} v(j)^2`` for a unit vector ``v``."""
    v = _unit(v)
    idx = np.fromiter(set(T), dtype=np.int64)
    if idx.size and (idx.min() < 0 or idx.max() >= v.size):
        raise ParameterError("set contains out-of-range coordinates")
    return float(min(1.0, np.sum(v[idx] ** 2)))


def is_localized(v, T: Iterable[int], delta: float) -> bool:
    return mass_on_set(v, T) >= 1 - delta


def top_mass(v, L: int) -> float:
    """Largest squared mass carried by any ``L`` coordinates of ``v``."""
    sq = np.sort(np.asarray(v, dtype=float) ** 2)[::-1]
    return float(min(1.0, sq[:L].sum()))


@dataclass(frozen=True)
class VectorVerdict:
    index: int
    max_mass: float
    localized: bool


@dataclass
class DelocReport:
    per_eigenvector: list[VectorVerdict]
    L: int
    delta: float
    excluded_perron: bool
    degenerate_clusters: list[tuple[int, int]] = field(default_factory=list)
    meta: dict = field(default_factory=dict)

    @property
    def num_localized(self) -> int:
        return sum(v.localized for v in self.per_eigenvector)

    @property
    def max_mass(self) -> float:
        return max((v.max_mass for v in self.per_eigenvector), default=0.0)

    def summary(self) -> dict:
        out = {
            "L": self.L,
            "delta": self.delta,
            "num_localized": self.num_localized,
            "max_top_mass": self.max_mass,
            "excluded_perron": self.excluded_perron,
            "flagged_degenerate_clusters": len(self.degenerate_clusters),
        }
        out.update(self.meta)
        return out

    def write_json(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.summary(), indent=2, sort_keys=True) + "\n")


def degenerate_clusters(values: np.ndarray, gap: float = DEGENERATE_GAP) -> list[tuple[int, int]]:
    """Half-open index ranges ``[i, j)`` of eigenvalues closer than ``gap``
    to their neighbours, for clusters of size at least two."""
    out = []
    start = 0
    for i in range(1, len(values) + 1):
        if i == len(values) or values[i] - values[i - 1] >= gap:
            if i - start > 1:
                out.append((start, i))
            start = i
    return out


def _perron(s: Spectrum, tol: float = 1e-6) -> int | None:
    """Index of the top eigenvector if it is uniform up to sign."""
    i = s.n - 1
    v = s.vectors[:, i]
    if np.max(np.abs(np.abs(v) - 1 / math.sqrt(s.n))) <= tol:
        return i
    return None


def adversarial_localization(s: Spectrum, L: int, delta: float, exclude_perron: bool = True) -> DelocReport:
    """Top-``L`` squared mass of every eigenvector and its ``(L, delta)``
    localization verdict."""
    if s.vectors is None:
        raise NotFoundError("spectrum has no eigenvectors")
    if not 1 <= L <= s.n:
        raise ParameterError(f"L must lie in [1, {s.n}], got {L}")
    if not 0 <= delta <= 1:
        raise ParameterError("delta must lie in [0, 1]")
    skip = _perron(s) if exclude_perron else None
    sq = np.sort(s.vectors**2, axis=0)[::-1]
    masses = np.minimum(sq[:L].sum(axis=0), 1.0)
    verdicts = [
        VectorVerdict(i, float(masses[i]), bool(masses[i] >= 1 - delta)) for i in range(s.n) if i != skip
    ]
    return DelocReport(verdicts, L, delta, skip is not None, degenerate_clusters(s.values))


def linf_profile(s: Spectrum) -> np.ndarray:
    """``max_j |v_i(j)|`` for every eigenvector."""
    if s.vectors is None:
        raise NotFoundError("spectrum has no eigenvectors")
    return np.abs(s.vectors).max(axis=0)


def default_L(eta: float) -> int:
    return max(1, math.ceil(0.1 / eta))
