"""Graphs, finite trees with the recursive root-last labeling, and random
regular graph sampling."""

from __future__ import annotations

import enum
import io
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import BinaryIO, Iterable

import numpy as np
import scipy.sparse as sp

from .exceptions import (
    CapacityError,
    InvariantError,
    ParameterError,
    ParseError,
    SamplingError,
)

MAX_TREE_VERTICES = 10**7
SEED_ENV = "REGSPEC_SEED"


@dataclass(frozen=True)
class Graph:
    """Immutable simple undirected graph in adjacency-list form.

    ``adj[i]`` is the sorted tuple of neighbours of vertex ``i``.  ``d`` is
    the common degree when the graph is regular and ``None`` otherwise; it
    is derived from ``adj``, never supplied.
    """

    n: int
    adj: tuple[tuple[int, ...], ...]
    d: int | None = field(init=False)

    def __post_init__(self):
        if self.n < 1:
            raise ParameterError("a graph needs at least one vertex")
        if len(self.adj) != self.n:
            raise InvariantError(f"adjacency has {len(self.adj)} rows, expected {self.n}")
        for i, nbrs in enumerate(self.adj):
            prev = -1
            for j in nbrs:
                if not 0 <= j < self.n:
                    raise InvariantError(f"vertex {i} has out-of-range neighbour {j}")
                if j == i:
                    raise InvariantError(f"self-loop at vertex {i}")
                if j <= prev:
                    raise InvariantError(f"neighbours of {i} not strictly increasing")
                prev = j
        arcs = {(i, j) for i, nbrs in enumerate(self.adj) for j in nbrs}
        for i, j in arcs:
            if (j, i) not in arcs:
                raise InvariantError(f"edge {i}-{j} is not symmetric")
        degs = {len(nbrs) for nbrs in self.adj}
        object.__setattr__(self, "d", degs.pop() if len(degs) == 1 else None)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        """Build a graph from undirected edges; loops and repeats are errors."""
        nbrs: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            u, v = int(u), int(v)
            if not (0 <= u < n and 0 <= v < n):
                raise InvariantError(f"edge {u}-{v} out of range for n={n}")
            if u == v:
                raise InvariantError(f"self-loop at vertex {u}")
            if v in nbrs[u]:
                raise InvariantError(f"duplicate edge {min(u, v)}-{max(u, v)}")
            nbrs[u].add(v)
            nbrs[v].add(u)
        return cls(n, tuple(tuple(sorted(s)) for s in nbrs))

    @property
    def num_edges(self) -> int:
        return sum(len(a) for a in self.adj) // 2

    def degrees(self) -> np.ndarray:
        return np.fromiter((len(a) for a in self.adj), dtype=np.int64, count=self.n)

    def edges(self) -> list[tuple[int, int]]:
        """Edges as ``(u, v)`` with ``u < v``, sorted lexicographically."""
        return [(i, j) for i, nbrs in enumerate(self.adj) for j in nbrs if i < j]

    def to_dense(self, scale: float = 1.0) -> np.ndarray:
        a = np.zeros((self.n, self.n))
        for i, j in self.edges():
            a[i, j] = a[j, i] = scale
        return a

    def to_sparse(self, scale: float = 1.0) -> sp.csr_matrix:
        e = np.asarray(self.edges(), dtype=np.int64).reshape(-1, 2)
        rows = np.concatenate([e[:, 0], e[:, 1]])
        cols = np.concatenate([e[:, 1], e[:, 0]])
        vals = np.full(rows.size, float(scale))
        return sp.csr_matrix((vals, (rows, cols)), shape=(self.n, self.n))


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise ParameterError("a cycle needs n >= 3")
    return Graph.from_edges(n, ((i, (i + 1) % n) for i in range(n)))


def complete_graph(n: int) -> Graph:
    return Graph.from_edges(n, ((i, j) for i in range(n) for j in range(i + 1, n)))


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, ((i, i + 1) for i in range(n - 1)))


def disjoint_union(*graphs: Graph) -> Graph:
    edges, offset = [], 0
    for g in graphs:
        edges.extend((u + offset, v + offset) for u, v in g.edges())
        offset += g.n
    return Graph.from_edges(offset, edges)


# --------------------------------------------------------------------------
# Trees
# --------------------------------------------------------------------------


class TreeKind(enum.Enum):
    ALMOST_REGULAR = "almost"  # root has d-1 children
    REGULAR = "regular"  # root has d children


@dataclass(frozen=True)
class TreeShape:
    d: int
    zeta: int
    kind: TreeKind = TreeKind.ALMOST_REGULAR

    def __post_init__(self):
        if self.d < 2:
            raise ParameterError(f"tree degree must be >= 2, got {self.d}")
        if self.zeta < 0:
            raise ParameterError(f"tree depth must be >= 0, got {self.zeta}")
        if not isinstance(self.kind, TreeKind):
            object.__setattr__(self, "kind", TreeKind(self.kind))

    @property
    def num_vertices(self) -> int:
        b = self.d - 1
        if self.kind is TreeKind.ALMOST_REGULAR:
            return sum(b**i for i in range(self.zeta + 1))
        return 1 + self.d * sum(b**i for i in range(self.zeta))

    @property
    def root(self) -> int:
        return self.num_vertices - 1


def build_tree(shape: TreeShape, max_vertices: int = MAX_TREE_VERTICES) -> Graph:
    """Tree with the recursive labeling: child subtrees occupy contiguous
    index blocks left to right and every (sub)root is the last index of its
    block, so the global root is ``n - 1``.  Vertex 0 is a deepest leaf.
    """
    n = shape.num_vertices
    if n > max_vertices:
        raise CapacityError(f"tree {shape} has {n} vertices (cap {max_vertices})")
    b = shape.d - 1
    sizes = [sum(b**i for i in range(k + 1)) for k in range(shape.zeta + 1)]
    edges: list[tuple[int, int]] = []

    def almost(offset: int, depth: int) -> int:
        # returns the index of the subtree root
        if depth == 0:
            return offset
        child_size = sizes[depth - 1]
        root = offset + b * child_size
        for c in range(b):
            edges.append((almost(offset + c * child_size, depth - 1), root))
        return root

    if shape.kind is TreeKind.ALMOST_REGULAR:
        almost(0, shape.zeta)
    elif shape.zeta > 0:
        child_size = sizes[shape.zeta - 1]
        root = shape.d * child_size
        for c in range(shape.d):
            edges.append((almost(c * child_size, shape.zeta - 1), root))
    return Graph.from_edges(n, edges)


# --------------------------------------------------------------------------
# Random regular graphs
# --------------------------------------------------------------------------


def default_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    if raw is None or raw.strip() == "":
        return 0
    try:
        return int(raw, 0) % 2**64
    except ValueError as exc:
        raise ParameterError(f"{SEED_ENV}={raw!r} is not an integer") from exc


@dataclass(frozen=True)
class SeededRng:
    """Reproducible RNG stream identified by ``(master_seed, stream_index)``.

    Distinct stream indices give statistically independent substreams
    (numpy ``SeedSequence`` spawn keys), so trial ``t`` of an experiment can
    use ``SeededRng(seed, t)`` regardless of scheduling.
    """

    master_seed: int
    stream_index: int = 0

    def __post_init__(self):
        for name in ("master_seed", "stream_index"):
            v = getattr(self, name)
            if not 0 <= v < 2**64:
                raise ParameterError(f"{name} must be a 64-bit unsigned integer")

    def generator(self) -> np.random.Generator:
        ss = np.random.SeedSequence(self.master_seed, spawn_key=(self.stream_index,))
        return np.random.Generator(np.random.PCG64(ss))


def sample_regular(
    n: int,
    d: int,
    rng: SeededRng | np.random.Generator,
    *,
    method: str = "auto",
    max_rejection_degree: int = 5,
    max_restarts: int = 100_000,
    swap_factor: int = 10,
) -> Graph:
    """Random simple ``d``-regular graph on ``n`` vertices.

    ``method="rejection"`` runs the pairing model and restarts from scratch
    whenever a loop or multi-edge appears; conditioned on success the result
    is exactly uniform.  ``method="switch"`` repairs a single pairing with
    double-edge swaps and then applies ``swap_factor * |E|`` randomizing
    swaps, which is only approximately uniform.  ``"auto"`` picks rejection
    for ``d <= max_rejection_degree``.
    """
    n, d = int(n), int(d)
    if n < 1 or d < 0:
        raise ParameterError("need n >= 1 and d >= 0")
    if (n * d) % 2:
        raise ParameterError(f"n*d must be even (n={n}, d={d})")
    if d >= n:
        raise ParameterError(f"need d < n (n={n}, d={d})")
    gen = rng.generator() if isinstance(rng, SeededRng) else rng
    if d == 0:
        return Graph(n, ((),) * n)
    if method == "auto":
        method = "rejection" if d <= max_rejection_degree else "switch"
    if method == "rejection":
        pairs = _pairing_rejection(n, d, gen, max_restarts)
    elif method == "switch":
        pairs = _pairing_switch(n, d, gen, swap_factor, max_restarts)
    else:
        raise ParameterError(f"unknown sampling method {method!r}")
    return _graph_from_pairs(n, pairs)


def _random_pairing(n, d, gen):
    stubs = gen.permutation(np.repeat(np.arange(n, dtype=np.int64), d))
    pairs = stubs.reshape(-1, 2)
    return np.sort(pairs, axis=1)


def _pairing_rejection(n, d, gen, max_restarts):
    for _ in range(max_restarts):
        pairs = _random_pairing(n, d, gen)
        if np.any(pairs[:, 0] == pairs[:, 1]):
            continue
        keys = pairs[:, 0] * n + pairs[:, 1]
        if np.unique(keys).size == keys.size:
            return pairs
    raise SamplingError(
        f"pairing model produced no simple graph in {max_restarts} restarts (n={n}, d={d})"
    )


def _pairing_switch(n, d, gen, swap_factor, budget):
    pairs = _random_pairing(n, d, gen)
    m = len(pairs)
    edges = [(int(u), int(v)) for u, v in pairs]
    mult: dict[tuple[int, int], int] = {}
    for e in edges:
        mult[e] = mult.get(e, 0) + 1

    def is_bad(e):
        return e[0] == e[1] or mult[e] > 1

    def swap(i, j, flip):
        # replace edges i=(a,b), j=(c,e) by (a,c),(b,e) or (a,e),(b,c)
        a, b = edges[i]
        c, e = edges[j]
        if flip:
            c, e = e, c
        new1 = (min(a, c), max(a, c))
        new2 = (min(b, e), max(b, e))
        if a == c or b == e or new1 == new2 or new1 in mult or new2 in mult:
            return False
        for old in (edges[i], edges[j]):
            mult[old] -= 1
            if mult[old] == 0:
                del mult[old]
        mult[new1] = 1
        mult[new2] = 1
        edges[i], edges[j] = new1, new2
        return True

    bad = [i for i, e in enumerate(edges) if is_bad(e)]
    attempts = 0
    while bad:
        i = bad[-1]
        if not is_bad(edges[i]):
            bad.pop()
            continue
        attempts += 1
        if attempts > budget:
            raise SamplingError(f"edge-switch repair exceeded {budget} attempts")
        j = int(gen.integers(m))
        if j != i:
            swap(i, j, bool(gen.integers(2)))
    if len(mult) != m:
        raise SamplingError("edge-switch repair left a multi-edge")  # pragma: no cover

    n_swaps = swap_factor * m
    idx = gen.integers(m, size=(n_swaps, 2))
    flips = gen.integers(2, size=n_swaps)
    for (i, j), flip in zip(idx.tolist(), flips.tolist()):
        if i != j:
            swap(i, j, flip)
    return np.asarray(edges, dtype=np.int64)


def _graph_from_pairs(n, pairs):
    nbrs: list[list[int]] = [[] for _ in range(n)]
    for u, v in pairs.tolist():
        nbrs[u].append(v)
        nbrs[v].append(u)
    return Graph(n, tuple(tuple(sorted(x)) for x in nbrs))


# --------------------------------------------------------------------------
# Edge-list files
# --------------------------------------------------------------------------


def format_edgelist(g: Graph) -> bytes:
    lines = [f"# n={g.n}"]
    lines.extend(f"{u} {v}" for u, v in g.edges())
    return ("\n".join(lines) + "\n").encode("ascii")


def write_edgelist(g: Graph, sink: BinaryIO | str | Path) -> None:
    """Write ``g`` as ASCII ``u v`` lines (``u < v``) under a ``# n=`` header."""
    data = format_edgelist(g)
    if isinstance(sink, (str, Path)):
        Path(sink).write_bytes(data)
    else:
        sink.write(data)


def read_edgelist(source: BinaryIO | str | Path | bytes) -> Graph:
    if isinstance(source, bytes):
        raw = source
    elif isinstance(source, (str, Path)):
        raw = Path(source).read_bytes()
    else:
        raw = source.read()
        if isinstance(raw, str):
            raw = raw.encode("ascii")
    try:
        text = raw.decode("ascii")
    except UnicodeDecodeError as exc:
        raise ParseError("edge list is not ASCII") from exc

    n = None
    edges: list[tuple[int, int]] = []
    for lineno, line in enumerate(io.StringIO(text), start=1):
        s = line.strip()
        if not s:
            continue
        if s.startswith("#"):
            body = s[1:].strip()
            if body.startswith("n="):
                if n is not None:
                    raise ParseError("duplicate n= header", lineno)
                try:
                    n = int(body[2:])
                except ValueError:
                    raise ParseError(f"bad header {s!r}", lineno) from None
                if n < 1:
                    raise ParseError("n must be positive", lineno)
            continue
        parts = s.split()
        if len(parts) != 2:
            raise ParseError(f"expected 'u v', got {s!r}", lineno)
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise ParseError(f"non-integer vertex id in {s!r}", lineno) from None
        if n is None:
            raise ParseError("edge before '# n=' header", lineno)
        if not (0 <= u < n and 0 <= v < n):
            raise ParseError(f"vertex id out of range [0, {n})", lineno)
        edges.append((u, v))
    if n is None:
        raise ParseError("missing '# n=' header")
    return Graph.from_edges(n, edges)
