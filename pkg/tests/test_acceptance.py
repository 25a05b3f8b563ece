"""One test per acceptance criterion; each prints a single pass/fail line
(collected again in the terminal summary)."""

import hashlib
import itertools
import json
import math
import time

import numpy as np
import pytest
from oracles import brute_force_cycles, lanczos_root_measure, resolvent_column, tree_walks

from regspec import cli
from regspec.blockinv import Block2x2, epsilon_root_estimate, schur_inverse
from regspec.census import acyclic_ball_census, ball_is_acyclic, check_tau_bound, count_cycles
from regspec.cheb import cheb_bound_check, ellipse_points
from regspec.eig import eig_symmetric
from regspec.esd import LocalLawParams, ks_distance, local_law_sweep, stieltjes_sup_error
from regspec.evec import adversarial_localization, default_L
from regspec.graphgen import (
    Graph,
    SeededRng,
    TreeKind,
    TreeShape,
    build_tree,
    complete_graph,
    cycle_graph,
    sample_regular,
)
from regspec.laws import (
    closed_walk_count,
    kesten_mckay,
    kesten_mckay_moment,
    semicircle,
    semicircle_moment,
)
from regspec.treespec import (
    phi_almost,
    phi_continued_fraction,
    phi_regular,
    psi_almost,
    psi_regular,
    root_masses,
    tree_char_poly_eigs,
)

Z_GRID = [complex(x, y) for x in (-2, -1, 0, 0.5, 1.9) for y in (0.05, 0.3, 1)]
N_BIG, D_BIG, ALPHA = 2000, 22, 0.5
SEEDS = range(10)


def test_c01_tree_resolvents(acceptance):
    start = time.perf_counter()
    worst = 0.0
    for d in (3, 4, 7):
        scale = 1 / math.sqrt(d - 1)
        for zeta in range(1, 7):
            for kind in TreeKind:
                shape = TreeShape(d, zeta, kind)
                g = build_tree(shape)
                for z in Z_GRID:
                    col = resolvent_column(g, scale, z, shape.root)
                    if kind is TreeKind.ALMOST_REGULAR:
                        phi, psi = phi_almost(d, zeta, z), psi_almost(d, zeta, z)
                    else:
                        phi, psi = phi_regular(d, zeta, z), psi_regular(d, zeta, z)
                    worst = max(worst, abs(phi - col[shape.root]), abs(psi - col[0]))
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-10 and elapsed < 30
    acceptance(1, ok, f"max |closed form - linear solve| = {worst:.2e}, {elapsed:.1f} s")
    assert ok


def test_c02_tree_spectrum(acceptance):
    start = time.perf_counter()
    worst = 0.0
    mult_ok = True
    for d in (3, 4, 5):
        for zeta in range(1, 7):
            shape = TreeShape(d, zeta)
            tree_spec = tree_char_poly_eigs(shape)
            mult_ok &= tree_spec.total == shape.num_vertices
            dense = eig_symmetric(build_tree(shape), 1 / math.sqrt(d - 1)).values
            worst = max(worst, float(np.max(np.abs(dense - tree_spec.expanded()))))
            for value, m in tree_spec.entries:
                mult_ok &= int(np.count_nonzero(np.abs(dense - value) <= 1e-8)) == m
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-8 and mult_ok and elapsed < 20
    acceptance(2, ok, f"max eigenvalue deviation {worst:.2e}, multiplicities exact: {mult_ok}, {elapsed:.1f} s")
    assert ok


def test_c03_root_masses(acceptance):
    worst_sum = worst_mass = 0.0
    for d in range(2, 7):
        for zeta in range(0, 7):
            shape = TreeShape(d, zeta)
            masses = root_masses(shape)
            worst_sum = max(worst_sum, abs(sum(m for _, m in masses) - 1))
            g = build_tree(shape)
            scale = 1 / math.sqrt(d - 1)
            if g.n <= 1500:
                vals, vecs = np.linalg.eigh(g.to_dense(scale))
                weights = vecs[shape.root] ** 2
                for ev, m in masses:
                    worst_mass = max(worst_mass, abs(weights[np.abs(vals - ev) <= 1e-8].sum() - m))
            else:
                nodes, weights = lanczos_root_measure(g, scale, shape.root, zeta + 1)
                worst_mass = max(worst_mass, float(np.max(np.abs(nodes - [e for e, _ in masses]))))
                worst_mass = max(worst_mass, float(np.max(np.abs(weights - [m for _, m in masses]))))
    ok = worst_sum <= 1e-10 and worst_mass <= 1e-8
    acceptance(3, ok, f"|sum - 1| <= {worst_sum:.2e}, per-mass deviation <= {worst_mass:.2e}")
    assert ok


def test_c04_continued_fraction(acceptance):
    rng = np.random.default_rng(2024)
    worst = 0.0
    for _ in range(100):
        z = complex(rng.uniform(-3, 3), rng.uniform(0.1, 3))
        zeta = int(rng.integers(0, 21))
        worst = max(worst, abs(phi_continued_fraction(zeta, z) - phi_almost(3, zeta, z)))
    ok = worst <= 1e-12
    acceptance(4, ok, f"max |continued fraction - Chebyshev ratio| = {worst:.2e}")
    assert ok


def test_c05_chebyshev_bound(acceptance):
    failures = 0
    for r in (1.05, 1.3, 2.0):
        pts = ellipse_points(r, 32)
        for n in range(1, 41):
            failures += sum(not cheb_bound_check(n, r, z) for z in pts)
    ok = failures == 0
    acceptance(5, ok, f"{failures} violations over 3 x 40 x 32 checks")
    assert ok


def test_c06_moments(acceptance):
    catalan = [1, 1, 2, 5, 14, 42, 132]
    sc_ok = all(semicircle_moment(2 * k) == catalan[k] for k in range(7))
    km_ok = all(
        kesten_mckay_moment(r, d) == closed_walk_count(r, d) == tree_walks(d, r)
        for d in range(3, 7)
        for r in range(0, 11, 2)
    )
    mono_ok = True
    for r in range(2, 11, 2):
        gaps = [abs(kesten_mckay_moment(r, d) / (d - 1) ** (r / 2) - semicircle_moment(r)) for d in (3, 6, 12, 24, 48)]
        mono_ok &= all(a >= b for a, b in zip(gaps, gaps[1:]))
    ok = sc_ok and km_ok and mono_ok
    acceptance(6, ok, f"Catalan {sc_ok}, Kesten-McKay = walk counts {km_ok}, monotone approach {mono_ok}")
    assert ok


def test_c07_kesten_mckay_fixed_degree(acceptance):
    start = time.perf_counter()
    law = kesten_mckay(3, normalized=True)
    ks = []
    for seed in range(5):
        g = sample_regular(2000, 3, SeededRng(seed, 0).generator())
        ks.append(ks_distance(eig_symmetric(g, 1 / math.sqrt(2)), law))
    elapsed = time.perf_counter() - start
    ok = np.mean(ks) < 0.05 and elapsed < 300
    acceptance(7, ok, f"mean KS = {np.mean(ks):.4f} (< 0.05), {elapsed:.1f} s")
    assert ok


@pytest.fixture(scope="module")
def big_ensemble():
    """Statistics of ten G(2000, 22) samples, one eigendecomposition each."""
    params = LocalLawParams.from_degree(D_BIG, ALPHA, 0.15)
    L = default_L(params.eta)
    grid = np.linspace(-2.5, 2.5, 41)
    out = {"params": params, "L": L, "ks": [], "err": [], "law": [], "loc": [], "mass": []}
    for seed in SEEDS:
        g = sample_regular(N_BIG, D_BIG, SeededRng(seed, 0).generator())
        s = eig_symmetric(g, 1 / math.sqrt(D_BIG - 1), want_vectors=True)
        out["ks"].append(ks_distance(s, semicircle()))
        out["err"].append(stieltjes_sup_error(s, params, grid)[0])
        out["law"].append(local_law_sweep(s, params))
        rep = adversarial_localization(s, L, 0.1, exclude_perron=True)
        out["loc"].append(rep.num_localized)
        out["mass"].append(rep.max_mass)
    return out


def test_c08_semicircle_growing_degree(acceptance, big_ensemble):
    ks2000 = float(np.mean(big_ensemble["ks"][:3]))
    ks500 = float(
        np.mean(
            [
                ks_distance(eig_symmetric(sample_regular(500, D_BIG, SeededRng(s, 1).generator()), 1 / math.sqrt(21)), semicircle())
                for s in range(3)
            ]
        )
    )
    ok = ks2000 < 0.06 and ks500 > ks2000
    acceptance(8, ok, f"mean KS(n=2000) = {ks2000:.4f} (< 0.06), mean KS(n=500) = {ks500:.4f}")
    assert ok


def test_c09_stieltjes_sup_error(acceptance, big_ensemble):
    worst = max(big_ensemble["err"])
    eta = big_ensemble["params"].eta
    ok = worst <= 5 / D_BIG
    acceptance(9, ok, f"max sup-error {worst:.4f} <= 5/d = {5 / D_BIG:.4f} over 10 seeds (eta = {eta:.4f})")
    assert ok


def test_c10_local_law(acceptance, big_ensemble):
    reports = big_ensemble["law"]
    passes = sum(r.passed for r in reports)
    ok = passes >= 9
    worst = max(r.max_deviation for r in reports)
    acceptance(10, ok, f"{passes}/10 seeds pass (max deviation {worst:.4f}, |I| = {reports[0].length:.4f})")
    assert ok


def _all_graphs(n):
    pairs = list(itertools.combinations(range(n), 2))
    for mask in range(1 << len(pairs)):
        yield Graph.from_edges(n, [p for k, p in enumerate(pairs) if mask >> k & 1])


def _named_fixtures():
    cube = [(u, u ^ (1 << b)) for u in range(8) for b in range(3) if u < u ^ (1 << b)]
    mobius = [(i, (i + 1) % 8) for i in range(8)] + [(i, i + 4) for i in range(4)]
    k33 = [(i, j) for i in range(3) for j in range(3, 6)]
    k44 = [(i, j) for i in range(4) for j in range(4, 8)]
    return [
        complete_graph(8),
        complete_graph(7),
        cycle_graph(8),
        Graph.from_edges(8, cube),
        Graph.from_edges(8, mobius),
        Graph.from_edges(6, k33),
        Graph.from_edges(8, k44),
    ]


def test_c11_cycle_census(acceptance):
    start = time.perf_counter()
    mismatches = 0
    checked = 0
    for n in range(3, 6):
        for g in _all_graphs(n):
            mismatches += count_cycles(g, n).counts != brute_force_cycles(g, n)
            checked += 1
    for g in _named_fixtures():
        mismatches += count_cycles(g, g.n).counts != brute_force_cycles(g, g.n)
        checked += 1
    rng = np.random.default_rng(11)
    for _ in range(50):
        n = int(rng.integers(3, 9))
        p = rng.uniform(0.2, 0.9)
        edges = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p]
        g = Graph.from_edges(n, edges)
        mismatches += count_cycles(g, n).counts != brute_force_cycles(g, n)
        checked += 1
    m3 = np.array([count_cycles(sample_regular(1000, 4, SeededRng(s, 0).generator()), 3).counts[3] for s in range(200)])
    se = m3.std(ddof=1) / math.sqrt(m3.size)
    elapsed = time.perf_counter() - start
    ok = mismatches == 0 and abs(m3.mean() - 4.5) <= 4 * se and elapsed < 120
    acceptance(
        11,
        ok,
        f"{mismatches} mismatches over {checked} graphs; mean M_3 = {m3.mean():.3f} "
        f"(mu_3 = 4.5, 4 SE = {4 * se:.3f}), {elapsed:.1f} s",
    )
    assert ok


def test_c12_neighborhood_census(acceptance):
    fixtures_ok = (
        acyclic_ball_census(cycle_graph(10), 2).size == 10 and acyclic_ball_census(cycle_graph(10), 5).size == 0
    )
    violations = {}
    for d in (3, 4):
        bad = 0
        for seed in range(50):
            g = sample_regular(500, d, SeededRng(seed, 100 + d).generator())
            deficit, bound = check_tau_bound(g, 2)
            bad += deficit > bound
        violations[d] = bad
    ok = fixtures_ok and not any(violations.values())
    acceptance(
        12,
        ok,
        f"C_10 fixtures {fixtures_ok}; n - |tau| > N*_2 on {violations[3]}/50 (d=3) and {violations[4]}/50 (d=4) graphs",
    )
    assert ok


def test_c13_delocalization(acceptance, big_ensemble):
    from regspec.eig import Spectrum

    ident = adversarial_localization(Spectrum(np.zeros(20), np.eye(20)), 1, 0.5, exclude_perron=False)
    cyc = adversarial_localization(eig_symmetric(cycle_graph(60), want_vectors=True), 6, 0.1)
    fixtures_ok = ident.num_localized == 20 and cyc.num_localized == 0
    localized = big_ensemble["loc"]
    ok = fixtures_ok and sum(localized) == 0
    acceptance(
        13,
        ok,
        f"L = {big_ensemble['L']}, localized per seed {localized}, max top-L mass {max(big_ensemble['mass']):.4f}; "
        f"fixtures {fixtures_ok}",
    )
    assert ok


def test_c14_block_inversion(acceptance):
    rng = np.random.default_rng(14)
    worst = 0.0
    for _ in range(50):
        size = int(rng.integers(2, 65))
        n = int(rng.integers(1, size))
        h = rng.normal(size=(size, size))
        mat = (h + h.T) / math.sqrt(2 * size) - complex(rng.uniform(-1, 1), rng.uniform(0.5, 2)) * np.eye(size)
        blk = Block2x2.split(mat, n)
        direct = np.linalg.inv(mat)
        scale = np.max(np.abs(direct))
        f, g = schur_inverse(blk, "F"), schur_inverse(blk, "G")
        worst = max(worst, np.max(np.abs(f - direct)) / scale, np.max(np.abs(g - direct)) / scale)
    eps_ok = True
    tree = build_tree(TreeShape(3, 4, TreeKind.REGULAR))
    for z in Z_GRID:
        eps_ok &= epsilon_root_estimate(tree, tree.n - 1, 3, 2, z).holds
        eps_ok &= epsilon_root_estimate(cycle_graph(8), 0, 2, 1, z).holds
    g = sample_regular(400, 3, SeededRng(14, 0).generator())
    roots = [v for v in range(g.n) if ball_is_acyclic(g, v, 3)][:5]
    for v in roots:
        eps_ok &= epsilon_root_estimate(g, v, 3, 2, 0.5 + 0.3j).holds
    ok = worst <= 1e-9 and eps_ok
    acceptance(14, ok, f"max relative deviation {worst:.2e}; epsilon bound holds on all fixtures: {eps_ok}")
    assert ok


PIPELINE = [
    ["sample", "--n", "300", "--d", "4", "--out", "g.txt"],
    ["spectrum", "--input", "g.txt", "--out", "s.csv", "--vectors", "v.csv"],
    ["esd", "--n", "300", "--d", "4", "--trials", "2", "--out", "esd.csv"],
    ["locallaw", "--n", "300", "--d", "6", "--trials", "2", "--out", "law.csv"],
    ["census", "--n", "300", "--d", "4", "--r", "2", "--trials", "2", "--out", "census.csv"],
    ["deloc", "--n", "300", "--d", "6", "--trials", "2", "--threads", "2", "--out", "deloc.json"],
    ["tree", "--d", "4", "--zeta", "3", "--z", "0.5+0.5i", "--check", "--out", "tree.json"],
]


def _run_pipeline(directory, monkeypatch, capsys):
    monkeypatch.chdir(directory)
    summaries = []
    for argv in PIPELINE:
        assert cli.main([*argv, "--seed", "5", "--no-timestamp"]) == 0
        summaries.append(json.loads(capsys.readouterr().out))
    files = {p.name: p.read_bytes() for p in sorted(directory.iterdir())}
    return summaries, files


def test_c15_determinism(acceptance, tmp_path, monkeypatch, capsys):
    digests = []
    for name in ("a.txt", "b.txt"):
        assert cli.main(["sample", "--n", "1000", "--d", "4", "--seed", "7", "--out", str(tmp_path / name), "--no-timestamp"]) == 0
        digests.append(hashlib.sha256((tmp_path / name).read_bytes()).hexdigest())
    capsys.readouterr()
    (tmp_path / "run1").mkdir()
    (tmp_path / "run2").mkdir()
    s1, f1 = _run_pipeline(tmp_path / "run1", monkeypatch, capsys)
    s2, f2 = _run_pipeline(tmp_path / "run2", monkeypatch, capsys)
    ok = digests[0] == digests[1] and s1 == s2 and f1 == f2
    acceptance(15, ok, f"sample files identical: {digests[0] == digests[1]}; pipeline JSON and {len(f1)} files identical: {s1 == s2 and f1 == f2}")
    assert ok
