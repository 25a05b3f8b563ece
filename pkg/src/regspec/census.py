"""Cycle counts and locally tree-like vertex sets of regular graphs."""

from __future__ import annotations

import csv
import json
import math
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path

from .exceptions import CapacityError, NotFoundError, ParameterError, PreconditionError
from .graphgen import Graph

MAX_CYCLE_LENGTH = 12
PATH_BUDGET = 50_000_000


def expected_cycles(d: int, s: int) -> float:
    """``(d-1)^s / (2s)``, the limiting mean number of ``s``-cycles."""
    return (d - 1) ** s / (2 * s)


@dataclass
class CycleCensus:
    """Exact ``M_s`` for ``3 <= s <= s_max`` and the matching ``mu_s``."""

    n: int
    d: int | None
    s_max: int
    counts: dict[int, int]
    expected: dict[int, float] = field(default_factory=dict)

    def __post_init__(self):
        if not self.expected and self.d is not None and self.d >= 2:
            self.expected = {s: expected_cycles(self.d, s) for s in self.counts}

    def rows(self) -> list[tuple[int, int, float]]:
        return [(s, self.counts[s], self.expected.get(s, math.nan)) for s in sorted(self.counts)]

    def write_csv(self, path: str | Path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["s", "M_s", "mu_s"])
            for s, m, mu in self.rows():
                w.writerow([s, m, repr(mu)])


def count_cycles(g: Graph, s_max: int, budget: int = PATH_BUDGET) -> CycleCensus:
    """Count every cycle of length ``3..s_max`` exactly once.

    A cycle is enumerated from its smallest vertex ``v`` as a simple path
    through vertices larger than ``v``; of its two directions only the one
    whose second vertex is smaller than its last is kept.
    """
    if s_max < 3:
        raise ParameterError(f"need s_max >= 3, got {s_max}")
    if s_max > MAX_CYCLE_LENGTH:
        raise CapacityError(f"s_max capped at {MAX_CYCLE_LENGTH}, got {s_max}")
    adj = g.adj
    counts = dict.fromkeys(range(3, s_max + 1), 0)
    steps = 0
    on_path = [False] * g.n
    for v in range(g.n):
        on_path[v] = True
        # explicit stack of (vertex, iterator over its neighbours)
        path = [v]
        stack = [iter(adj[v])]
        while stack:
            nxt = next(stack[-1], None)
            if nxt is None:
                stack.pop()
                on_path[path.pop()] = False
                continue
            steps += 1
            if steps > budget:
                raise CapacityError(f"cycle enumeration exceeded {budget} path extensions")
            length = len(path)
            if nxt == v:
                if length >= 3 and path[1] < path[-1]:
                    counts[length] += 1
                continue
            if nxt < v or on_path[nxt] or length == s_max:
                continue
            on_path[nxt] = True
            path.append(nxt)
            stack.append(iter(adj[nxt]))
    return CycleCensus(g.n, g.d, s_max, counts)


def ball(g: Graph, v: int, r: int) -> dict[int, int]:
    """Vertices within distance ``r`` of ``v`` mapped to their distance."""
    dist = {v: 0}
    queue = deque([v])
    while queue:
        u = queue.popleft()
        du = dist[u]
        if du == r:
            continue
        for w in g.adj[u]:
            if w not in dist:
                dist[w] = du + 1
                queue.append(w)
    return dist


def ball_is_acyclic(g: Graph, v: int, r: int) -> bool:
    """Whether the subgraph induced on the radius-``r`` ball is a tree."""
    members = ball(g, v, r)
    twice_edges = sum(1 for u in members for w in g.adj[u] if w in members)
    return twice_edges // 2 == len(members) - 1


@dataclass
class NeighborhoodCensus:
    radius: int
    n: int
    acyclic_vertices: frozenset[int]
    meta: dict = field(default_factory=dict)

    @property
    def size(self) -> int:
        return len(self.acyclic_vertices)

    @property
    def fraction(self) -> float:
        return self.size / self.n if self.n else 0.0

    def summary(self) -> dict:
        out = {"r": self.radius, "fraction": self.fraction, "n": self.n, "acyclic": self.size}
        out.update(self.meta)
        return out

    def write_json(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.summary(), indent=2, sort_keys=True) + "\n")


def acyclic_ball_census(g: Graph, r: int) -> NeighborhoodCensus:
    """Vertices whose induced radius-``r`` ball is a tree."""
    if r < 1:
        raise ParameterError(f"need r >= 1, got {r}")
    good = frozenset(v for v in range(g.n) if ball_is_acyclic(g, v, r))
    return NeighborhoodCensus(r, g.n, good, {"d": g.d})


def zeta_schedule(n: int, d: int, beta: float) -> float:
    """``(1/4) log n / log(d-1) - beta``."""
    if d < 3:
        raise ParameterError("need d >= 3")
    if n < 2:
        raise ParameterError("need n >= 2")
    return 0.25 * math.log(n) / math.log(d - 1) - beta


def zeta_radius(n: int, d: int, beta: float) -> int:
    """The schedule floored to an integer radius and clamped at 1."""
    return max(1, math.floor(zeta_schedule(n, d, beta)))


def _require_counts(census: CycleCensus, top: int) -> None:
    missing = [s for s in range(3, top + 1) if s not in census.counts]
    if missing:
        raise NotFoundError(f"cycle census lacks lengths {missing}; rerun with s_max >= {top}")


def nr_star_bound(census: CycleCensus, d: int, r: int) -> float:
    """``N*_r = sum_{s=3}^{2r} 2 s (d-1)^((2r-s)/2) M_s``."""
    if r < 1:
        raise ParameterError(f"need r >= 1, got {r}")
    _require_counts(census, 2 * r)
    return float(sum(2 * s * (d - 1) ** ((2 * r - s) / 2) * census.counts[s] for s in range(3, 2 * r + 1)))


def _ball_size(d: int, t: int) -> int:
    """Vertex count of the radius-``t`` ball in the infinite ``d``-regular tree."""
    if t < 0:
        return 0
    return 1 + sum(d * (d - 1) ** k for k in range(t))


def cyclic_ball_bound(census: CycleCensus, d: int, r: int) -> int:
    """Upper bound on the number of vertices with a cyclic induced ``r``-ball.

    A cyclic ball at ``v`` contains a cycle of length ``s <= 2r + 1`` that
    passes within distance ``r - floor(s/2)`` of ``v``, so every such ``v``
    lies in one of ``s * M_s`` tree-bounded balls of that radius.
    """
    if r < 1:
        raise ParameterError(f"need r >= 1, got {r}")
    _require_counts(census, 2 * r + 1)
    return sum(s * census.counts[s] * _ball_size(d, r - s // 2) for s in range(3, 2 * r + 2))


def check_tau_bound(g: Graph, r: int, census: CycleCensus | None = None) -> tuple[int, float]:
    """``(n - |tau|, N*_r)`` on the same graph."""
    if g.d is None:
        raise PreconditionError("graph is not regular")
    if census is None:
        census = count_cycles(g, max(3, 2 * r))
    deficit = g.n - acyclic_ball_census(g, r).size
    return deficit, nr_star_bound(census, g.d, r)
