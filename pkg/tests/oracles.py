"""Independent numerical oracles shared by the test modules."""

import math

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as sla


def resolvent_column(g, scale: float, z: complex, j: int) -> np.ndarray:
    """Column ``j`` of ``(scale * A - z)^-1``: dense solve for small graphs,
    sparse LU for large ones."""
    e = np.zeros(g.n, dtype=complex)
    e[j] = 1.0
    if g.n <= 500:
        return np.linalg.solve(g.to_dense(scale) - z * np.eye(g.n), e)
    m = (g.to_sparse(scale).astype(complex) - z * sp.identity(g.n, format="csr")).tocsc()
    return sla.spsolve(m, e)


def lanczos_root_measure(g, scale: float, start: int, steps: int):
    """Nodes and weights of the spectral measure of ``scale * A`` at
    ``e_start``, by Lanczos with full reorthogonalization.

    The Krylov space from the root of a spherically symmetric tree has
    dimension ``zeta + 1``, so ``steps = zeta + 1`` recovers the measure
    exactly.
    """
    a = g.to_sparse(scale)
    q = np.zeros(g.n)
    q[start] = 1.0
    basis = [q]
    alphas, betas = [], []
    for k in range(steps):
        w = a @ basis[-1]
        alphas.append(float(basis[-1] @ w))
        for b in basis:
            w = w - (b @ w) * b
        beta = float(np.linalg.norm(w))
        if k == steps - 1 or beta < 1e-12:
            break
        betas.append(beta)
        basis.append(w / beta)
    t = np.diag(alphas) + np.diag(betas, 1) + np.diag(betas, -1)
    nodes, vecs = np.linalg.eigh(t)
    return nodes, vecs[0] ** 2


def sqrt_scale(d: int) -> float:
    return 1 / math.sqrt(d - 1)


def brute_force_cycles(g, s_max: int) -> dict[int, int]:
    """Cycle counts by checking every vertex subset in every cyclic order
    (first element fixed to the minimum, one of each mirror pair)."""
    from itertools import combinations, permutations

    edges = {frozenset(e) for e in g.edges()}
    counts = {}
    for s in range(3, s_max + 1):
        total = 0
        for subset in combinations(range(g.n), s):
            first, rest = subset[0], subset[1:]
            for order in permutations(rest):
                if order[0] > order[-1]:
                    continue
                cyc = (first, *order)
                if all(frozenset((cyc[i], cyc[(i + 1) % s])) in edges for i in range(s)):
                    total += 1
        counts[s] = total
    return counts


def ball_has_cycle(g, v: int, r: int) -> bool:
    """Union-find over the edges induced on the radius-``r`` ball."""
    dist = {v: 0}
    frontier = [v]
    for k in range(r):
        nxt = []
        for u in frontier:
            for w in g.adj[u]:
                if w not in dist:
                    dist[w] = k + 1
                    nxt.append(w)
        frontier = nxt
    parent = {u: u for u in dist}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u in dist:
        for w in g.adj[u]:
            if w in dist and u < w:
                a, b = find(u), find(w)
                if a == b:
                    return True
                parent[a] = b
    return False


def tree_walks(d: int, r: int) -> int:
    """Closed walks of length ``r`` at the root of a ``d``-regular tree,
    read off ``A^r`` of an explicit tree deep enough to contain them."""
    from regspec.graphgen import TreeKind, TreeShape, build_tree

    g = build_tree(TreeShape(d, max(1, r // 2), TreeKind.REGULAR))
    a = g.to_sparse()
    v = np.zeros(g.n)
    v[g.n - 1] = 1.0
    for _ in range(r):
        v = a @ v
    return int(round(v[g.n - 1]))
