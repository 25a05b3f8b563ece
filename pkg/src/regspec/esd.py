"""Empirical spectral statistics: interval counts, Kolmogorov-Smirnov
distance, empirical Stieltjes transforms and the local-law sweep."""

from __future__ import annotations

import csv
import json
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np
from scipy import integrate

from .eig import Spectrum
from .exceptions import InvariantError, ParameterError, PreconditionError
from .laws import LawSpec, cdf, integrate_semicircle, stieltjes_sc

SWEEP_PAD = 0.5


def _values(s) -> np.ndarray:
    vals = s.values if isinstance(s, Spectrum) else np.asarray(s, dtype=float).reshape(-1)
    if vals.size == 0:
        raise ParameterError("empty spectrum")
    return np.sort(vals)


def count_interval(s, a: float, b: float) -> int:
    """Number of eigenvalues in the half-open interval ``[a, b)``."""
    if not a < b:
        raise ParameterError(f"need a < b, got [{a}, {b})")
    v = _values(s)
    return int(np.searchsorted(v, b, side="left") - np.searchsorted(v, a, side="left"))


def ks_distance(s, law: LawSpec) -> float:
    """Sup distance between the empirical CDF and the law's CDF, evaluated on
    both sides of every jump."""
    v = _values(s)
    n = v.size
    f = np.asarray(cdf(law, v), dtype=float)
    above = np.arange(1, n + 1) / n - f
    below = f - np.arange(n) / n
    return float(max(above.max(), below.max(), 0.0))


def empirical_stieltjes(s, z: complex) -> complex:
    """``(1/n) sum_i 1/(λ_i - z)``."""
    z = complex(z)
    if not z.imag > 0:
        raise ParameterError(f"need Im z > 0, got {z}")
    v = _values(s)
    return complex(np.mean(1.0 / (v - z)))


@dataclass(frozen=True)
class LocalLawParams:
    """Scale parameters for a local-law experiment at degree ``d``.

    ``r = exp(d^-alpha)`` and ``eta = (r - 1/r)/2``; ``gamma`` (if given)
    is the exponent in ``d = (log n)^gamma`` and bounds ``alpha``.
    """

    d: int
    alpha: float
    delta: float
    r: float
    eta: float
    gamma: float | None = None

    def __post_init__(self):
        if self.d < 3:
            raise ParameterError("need d >= 3")
        upper = 1.0 if self.gamma is None else min(1.0, 1.0 / self.gamma)
        if self.gamma is not None and not self.gamma > 0:
            raise ParameterError("gamma must be positive")
        if not 0 < self.alpha < upper:
            raise ParameterError(f"alpha must lie in (0, {upper:.6g}), got {self.alpha}")
        if not self.delta > 0:
            raise ParameterError("delta must be positive")
        x = self.d ** (-self.alpha)
        if abs(self.r - math.exp(x)) > 1e-12 or abs(self.eta - (self.r - 1 / self.r) / 2) > 1e-12:
            raise InvariantError("r/eta inconsistent with d and alpha")
        if x <= math.log(2) and self.eta < x / 2:
            raise InvariantError("eta below d^-alpha/2")  # pragma: no cover

    @classmethod
    def from_degree(cls, d: int, alpha: float, delta: float, gamma: float | None = None):
        r = math.exp(d ** (-alpha))
        return cls(d, alpha, delta, r, (r - 1 / r) / 2, gamma)

    @classmethod
    def from_n(cls, n: int, gamma: float, alpha: float, delta: float):
        """Degree from the schedule ``d = ceil((log n)^gamma)``."""
        return cls.from_degree(degree_schedule(n, gamma), alpha, delta, gamma)

    @property
    def interval_length(self) -> float:
        """``max(2 eta, eta/(-delta log delta))``."""
        if not 0 < self.delta < 1 / math.e:
            raise PreconditionError(f"delta must lie in (0, 1/e), got {self.delta}")
        return max(2 * self.eta, self.eta / (-self.delta * math.log(self.delta)))


def degree_schedule(n: int, gamma: float) -> int:
    return max(3, math.ceil(math.log(n) ** gamma))


def stieltjes_sup_error(s, params: LocalLawParams | float, x_grid: Sequence[float]) -> tuple[float, float]:
    """Max over ``x`` of ``|s_n(x + i eta) - s(x + i eta)|`` and that error
    times ``d`` (the implied constant in an ``O(1/d)`` bound).

    ``params`` may also be a bare height ``eta``, in which case the second
    value is ``nan``.
    """
    xs = np.asarray(x_grid, dtype=float).reshape(-1)
    if xs.size == 0:
        raise ParameterError("empty x grid")
    if isinstance(params, LocalLawParams):
        eta, d = params.eta, params.d
    else:
        eta, d = float(params), math.nan
    v = _values(s)
    err = 0.0
    for x in xs:
        z = complex(x, eta)
        sn = complex(np.mean(1.0 / (v - z)))
        err = max(err, abs(sn - stieltjes_sc(z)))
    return err, err * d


@dataclass(frozen=True)
class IntervalRow:
    a: float
    b: float
    count: int
    predicted: float
    deviation: float


@dataclass
class LocalLawReport:
    intervals: list[IntervalRow]
    n: int
    eta: float
    delta: float
    length: float
    meta: dict = field(default_factory=dict)

    @property
    def max_deviation(self) -> float:
        return max(row.deviation for row in self.intervals)

    @property
    def passed(self) -> bool:
        return all(row.deviation < self.delta for row in self.intervals)

    def summary(self) -> dict:
        out = {
            "pass": self.passed,
            "max_deviation": self.max_deviation,
            "eta": self.eta,
            "delta": self.delta,
            "interval_length": self.length,
            "num_intervals": len(self.intervals),
            "n": self.n,
        }
        out.update(self.meta)
        return out

    def write_csv(self, path: str | Path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["a", "b", "N_I", "predicted", "deviation"])
            for row in self.intervals:
                w.writerow([repr(row.a), repr(row.b), row.count, repr(row.predicted), repr(row.deviation)])

    def write_json(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.summary(), indent=2, sort_keys=True) + "\n")


def sweep_intervals(values: np.ndarray, length: float, pad: float = SWEEP_PAD) -> list[tuple[float, float]]:
    """Equal intervals of the given length covering ``[-2 - pad, 2 + pad]``
    and every eigenvalue, centred on the covered range."""
    lo = min(-2.0 - pad, float(values.min()))
    hi = max(2.0 + pad, float(values.max()))
    k = max(1, math.ceil((hi - lo) / length))
    # one extra interval if the top eigenvalue would sit on a right endpoint
    start = (lo + hi) / 2 - k * length / 2
    if start + k * length <= hi:
        k += 1
    return [(start + i * length, start + (i + 1) * length) for i in range(k)]


def local_law_sweep(s, params: LocalLawParams, pad: float = SWEEP_PAD) -> LocalLawReport:
    """Compare ``N_I`` with ``n * int_I f_sc`` on a partition into intervals of
    the minimal admissible length; deviations are ``|N_I - pred|/(n |I|)``."""
    length = params.interval_length
    v = _values(s)
    n = v.size
    rows = []
    for a, b in sweep_intervals(v, length, pad):
        count = count_interval(v, a, b)
        pred = n * integrate_semicircle(a, b)
        rows.append(IntervalRow(a, b, count, pred, abs(count - pred) / (n * (b - a))))
    if sum(r.count for r in rows) != n:
        raise InvariantError("interval counts do not add up to n")  # pragma: no cover
    meta = {"d": params.d, "alpha": params.alpha}
    return LocalLawReport(rows, n, params.eta, params.delta, length, meta)


def lorentz_kernel(y, interval: tuple[float, float], eta: float):
    """``F(y) = (1/pi) int_I eta/(eta^2 + (y-x)^2) dx`` in closed form."""
    a, b = interval
    y = np.asarray(y, dtype=float)
    return (np.arctan((b - y) / eta) - np.arctan((a - y) / eta)) / math.pi


def smoothing_functional(s, interval: tuple[float, float], eta: float, tol: float = 1e-8) -> float:
    """``(1/n) sum_i F(λ_i)``, cross-checked against
    ``(1/pi) int_I Im s_n(x + i eta) dx`` by adaptive quadrature."""
    if not eta > 0:
        raise ParameterError("eta must be positive")
    a, b = interval
    if not a < b:
        raise ParameterError("need a < b")
    v = _values(s)
    kernel_side = float(np.mean(lorentz_kernel(v, interval, eta)))

    def im_sn(x):
        return float(np.mean(eta / ((v - x) ** 2 + eta**2)))

    breaks = [float(x) for x in v if a < x < b]
    quad_side, _ = integrate.quad(
        im_sn, a, b, points=breaks[:200] or None, epsabs=1e-13, epsrel=1e-12, limit=1000
    )
    quad_side /= math.pi
    if abs(kernel_side - quad_side) > tol:
        raise InvariantError(
            f"smoothing identity off by {abs(kernel_side - quad_side):.3g} (kernel {kernel_side}, quadrature {quad_side})"
        )
    return kernel_side


def semicircle_quantiles(n: int) -> np.ndarray:
    """The ``(k - 1/2)/n`` quantiles of the semicircle law, ascending."""
    from scipy.optimize import brentq

    from .laws import _sc_cdf

    qs = (np.arange(1, n + 1) - 0.5) / n
    return np.array([brentq(lambda y, q=q: _sc_cdf(y) - q, -2.0, 2.0, xtol=1e-14) for q in qs])


def report_rows(report: LocalLawReport) -> list[dict]:
    return [asdict(r) for r in report.intervals]
