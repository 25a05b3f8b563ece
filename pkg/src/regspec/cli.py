"""Command-line front end: ``regspec <command> [options]``.

Every command prints a JSON summary (resolved configuration, master seed
and results) on stdout and writes its table to ``--out`` when given.
Exit status is 0 on success, 2 on a parameter error and 3 on any other
library error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import census, eig, esd, evec, laws, treespec
from .exceptions import ParameterError, RegspecError
from .graphgen import (
    SeededRng,
    TreeKind,
    TreeShape,
    build_tree,
    complete_graph,
    cycle_graph,
    default_seed,
    format_edgelist,
    read_edgelist,
    sample_regular,
)

STIELTJES_GRID = np.linspace(-2.5, 2.5, 41)


# --------------------------------------------------------------------------
# helpers
# --------------------------------------------------------------------------


def _parse_complex(text: str) -> complex:
    try:
        return complex(text.replace(" ", "").replace("i", "j"))
    except ValueError as exc:
        raise ParameterError(f"cannot parse complex number {text!r}") from exc


def _fixture(text: str):
    """``cycle:N``, ``complete:N`` or ``tree:D:ZETA[:regular]``."""
    parts = text.split(":")
    try:
        if parts[0] == "cycle" and len(parts) == 2:
            return cycle_graph(int(parts[1]))
        if parts[0] == "complete" and len(parts) == 2:
            return complete_graph(int(parts[1]))
        if parts[0] == "tree" and len(parts) in (3, 4):
            kind = TreeKind.REGULAR if parts[3:] == ["regular"] else TreeKind.ALMOST_REGULAR
            if len(parts) == 4 and parts[3] not in ("regular", "almost"):
                raise ParameterError(f"unknown tree kind {parts[3]!r}")
            return build_tree(TreeShape(int(parts[1]), int(parts[2]), kind))
    except ValueError as exc:
        raise ParameterError(f"bad fixture {text!r}: {exc}") from exc
    raise ParameterError(f"unknown fixture {text!r}")


def _resolve_degree(args) -> int:
    if args.d is not None:
        return args.d
    if args.gamma is None:
        raise ParameterError("give either --d or --gamma")
    return esd.degree_schedule(args.n, args.gamma)


def _trial_rng(seed: int, trial: int):
    return SeededRng(seed, trial).generator()


def _run_trials(fn, trials: int, threads: int) -> list:
    """Results of ``fn(trial)`` for every trial, ordered by trial id."""
    if trials < 1:
        raise ParameterError(f"need at least one trial, got {trials}")
    if threads <= 1:
        return [fn(t) for t in range(trials)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, range(trials)))


def _config(args) -> dict:
    skip = {"func", "command"}
    out = {}
    for key, val in sorted(vars(args).items()):
        if key in skip:
            continue
        out[key] = str(val) if isinstance(val, (complex, Path)) else val
    return out


def _emit(args, seed: int, results: dict) -> dict:
    summary = {"command": args.command, "seed": seed, "config": _config(args)}
    summary.update(results)
    if not args.no_timestamp:
        summary["timestamp"] = time.strftime("%Y-%m-%dT%H:%M:%S%z")
    text = json.dumps(summary, indent=2, sort_keys=True, default=_json_default)
    print(text)
    if args.summary:
        Path(args.summary).write_text(text + "\n")
    return summary


def _json_default(obj):
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _write_rows(path, header, rows, fmt):
    if fmt == "json":
        data = [dict(zip(header, r)) for r in rows]
        Path(path).write_text(json.dumps(data, indent=2, default=_json_default) + "\n")
        return
    lines = [",".join(header)]
    for r in rows:
        lines.append(",".join(repr(float(x)) if isinstance(x, (float, np.floating)) else str(x) for x in r))
    Path(path).write_text("\n".join(lines) + "\n")


def _seed(args) -> int:
    return default_seed() if args.seed is None else args.seed


# --------------------------------------------------------------------------
# commands
# --------------------------------------------------------------------------


def cmd_sample(args) -> dict:
    seed = _seed(args)
    g = sample_regular(args.n, args.d, _trial_rng(seed, 0), method=args.method)
    data = format_edgelist(g)
    if args.out:
        Path(args.out).write_bytes(data)
    return _emit(
        args,
        seed,
        {"n": g.n, "d": args.d, "num_edges": g.num_edges, "sha256": hashlib.sha256(data).hexdigest()},
    )


def _graph_from_args(args, seed):
    if args.input:
        return read_edgelist(args.input)
    if args.fixture:
        return _fixture(args.fixture)
    if args.n is None or args.d is None:
        raise ParameterError("give --input, --fixture, or both --n and --d")
    return sample_regular(args.n, args.d, _trial_rng(seed, 0))


def cmd_spectrum(args) -> dict:
    seed = _seed(args)
    g = _graph_from_args(args, seed)
    d = g.d
    if d is None and args.fixture and args.fixture.startswith("tree"):
        d = int(args.fixture.split(":")[1])
    scale = args.scale if args.scale is not None else eig.default_scale(d)
    s = eig.eig_symmetric(g, scale, want_vectors=bool(args.vectors))
    if args.out:
        eig.write_spectrum_csv(s, args.out, args.vectors)
    results = {"n": g.n, "d": d, "scale": scale, "min": float(s.values[0]), "max": float(s.values[-1])}
    if g.n <= 64:
        results["values"] = [float(v) for v in s.values]
    if args.fixture and args.fixture.startswith("tree"):
        parts = args.fixture.split(":")
        shape = TreeShape(int(parts[1]), int(parts[2]))
        if parts[3:] in ([], ["almost"]):
            ref = treespec.tree_char_poly_eigs(shape).expanded()
            results["tree_formula_max_deviation"] = float(np.max(np.abs(np.sort(ref) - s.values)))
    return _emit(args, seed, results)


def cmd_tree(args) -> dict:
    kind = TreeKind(args.kind)
    shape = TreeShape(args.d, args.zeta, kind)
    results = {"num_vertices": shape.num_vertices}
    if args.z is not None:
        z = _parse_complex(args.z)
        val = treespec.tree_resolvent(shape, z)
        results["phi"] = val.phi
        results["psi"] = val.psi
    if kind is TreeKind.ALMOST_REGULAR:
        exact = treespec.tree_char_poly_eigs(shape)
        results["spectrum"] = [[v, m] for v, m in exact.entries]
        results["distinct_eigenvalues"] = len(exact.entries)
        results["root_masses"] = [[v, m] for v, m in treespec.root_masses(shape)]
    if args.check:
        results["dense_check"] = _tree_dense_check(shape, args.z)
    out = _emit(args, 0, results)
    if args.out:
        Path(args.out).write_text(json.dumps(results, indent=2, sort_keys=True, default=_json_default) + "\n")
    return out


def _tree_dense_check(shape: TreeShape, z_text):
    g = build_tree(shape)
    scale = 1 / math.sqrt(shape.d - 1)
    report = {}
    if shape.kind is TreeKind.ALMOST_REGULAR:
        s = eig.eig_symmetric(g, scale)
        ref = treespec.tree_char_poly_eigs(shape).expanded()
        report["spectrum_max_deviation"] = float(np.max(np.abs(ref - s.values)))
    if z_text is not None:
        z = _parse_complex(z_text)
        m = g.to_dense(scale) - z * np.eye(g.n)
        inv = np.linalg.inv(m)
        val = treespec.tree_resolvent(shape, z)
        report["phi_deviation"] = abs(inv[shape.root, shape.root] - val.phi)
        report["psi_deviation"] = abs(inv[shape.root, 0] - val.psi)
    return report


def cmd_esd(args) -> dict:
    seed = _seed(args)
    d = _resolve_degree(args)
    params = esd.LocalLawParams.from_degree(d, args.alpha, 0.1, args.gamma)
    sc = laws.semicircle()
    km = laws.kesten_mckay(d, normalized=True)

    def trial(t):
        g = sample_regular(args.n, d, _trial_rng(seed, t))
        s = eig.eig_symmetric(g, eig.default_scale(d))
        err, c_meas = esd.stieltjes_sup_error(s, params, STIELTJES_GRID)
        return (t, args.n, d, esd.ks_distance(s, sc), esd.ks_distance(s, km), err, c_meas)

    rows = _run_trials(trial, args.trials, args.threads)
    header = ["trial", "n", "d", "ks_semicircle", "ks_kesten_mckay", "stieltjes_error", "C_meas"]
    if args.out:
        _write_rows(args.out, header, rows, args.format)
    cols = list(zip(*rows))
    return _emit(
        args,
        seed,
        {
            "d": d,
            "eta": params.eta,
            "epsilon_n": math.log(d - 1) / math.log(args.n),
            "mean_ks_semicircle": float(np.mean(cols[3])),
            "mean_ks_kesten_mckay": float(np.mean(cols[4])),
            "max_stieltjes_error": float(np.max(cols[5])),
            "max_C_meas": float(np.max(cols[6])),
        },
    )


def cmd_locallaw(args) -> dict:
    seed = _seed(args)
    d = _resolve_degree(args)
    params = esd.LocalLawParams.from_degree(d, args.alpha, args.delta, args.gamma)
    length = params.interval_length  # validates delta before any sampling

    def trial(t):
        if args.self_test:
            spectrum = esd.semicircle_quantiles(args.n)
        else:
            g = sample_regular(args.n, d, _trial_rng(seed, t))
            spectrum = eig.eig_symmetric(g, eig.default_scale(d))
        return esd.local_law_sweep(spectrum, params)

    reports = _run_trials(trial, args.trials, args.threads)
    if args.out:
        header = ["trial", "a", "b", "N_I", "predicted", "deviation"]
        rows = [
            (t, row.a, row.b, row.count, row.predicted, row.deviation)
            for t, rep in enumerate(reports)
            for row in rep.intervals
        ]
        _write_rows(args.out, header, rows, args.format)
    passes = [rep.passed for rep in reports]
    return _emit(
        args,
        seed,
        {
            "d": d,
            "n": args.n,
            "alpha": args.alpha,
            "delta": args.delta,
            "eta": params.eta,
            "interval_length": length,
            "pass": all(passes),
            "pass_count": sum(passes),
            "trials": len(reports),
            "max_deviation": max(rep.max_deviation for rep in reports),
        },
    )


def cmd_census(args) -> dict:
    seed = _seed(args)
    if not args.fixture and (args.n is None or args.d is None):
        raise ParameterError("give --fixture or both --n and --d")

    def graphs(t):
        if args.fixture:
            return _fixture(args.fixture)
        return sample_regular(args.n, args.d, _trial_rng(seed, t))

    def trial(t):
        g = graphs(t)
        c = census.count_cycles(g, args.s_max)
        nb = census.acyclic_ball_census(g, args.r) if args.r else None
        return g, c, nb

    results = _run_trials(trial, args.trials, args.threads)
    rows = []
    for t, (g, c, _) in enumerate(results):
        for s, m, mu in c.rows():
            rows.append((t, s, m, mu))
    if args.out:
        _write_rows(args.out, ["trial", "s", "M_s", "mu_s"], rows, args.format)
    first = results[0][0]
    summary = {"n": first.n, "d": first.d}
    for s in range(3, args.s_max + 1):
        vals = np.array([c.counts[s] for _, c, _ in results], dtype=float)
        summary[f"mean_M_{s}"] = float(vals.mean())
        if len(vals) > 1:
            summary[f"se_M_{s}"] = float(vals.std(ddof=1) / math.sqrt(len(vals)))
        if first.d is not None and first.d >= 2:
            summary[f"mu_{s}"] = census.expected_cycles(first.d, s)
    if args.r:
        fractions = [nb.fraction for _, _, nb in results]
        summary["r"] = args.r
        summary["fraction"] = float(np.mean(fractions))
        summary["acyclic"] = [nb.size for _, _, nb in results]
    return _emit(args, seed, summary)


def cmd_deloc(args) -> dict:
    seed = _seed(args)
    if args.fixture:
        kind, _, size = args.fixture.partition(":")
        try:
            n = int(size)
        except ValueError as exc:
            raise ParameterError(f"bad fixture {args.fixture!r}") from exc
        if kind == "identity":
            spectra = [eig.Spectrum(np.zeros(n), np.eye(n))]
        else:
            spectra = [eig.eig_symmetric(_fixture(args.fixture), 1.0, want_vectors=True)]
        L = args.L if args.L is not None else max(1, math.ceil(n / 10))
        reports = [evec.adversarial_localization(s, L, args.delta, exclude_perron=kind != "identity") for s in spectra]
        meta = {"n": n, "L": L}
    else:
        if args.n is None:
            raise ParameterError("give --fixture or --n")
        d = _resolve_degree(args)
        params = esd.LocalLawParams.from_degree(d, args.alpha, args.delta, args.gamma)
        L = args.L if args.L is not None else evec.default_L(params.eta)

        def trial(t):
            g = sample_regular(args.n, d, _trial_rng(seed, t))
            s = eig.eig_symmetric(g, eig.default_scale(d), want_vectors=True)
            return evec.adversarial_localization(s, L, args.delta, exclude_perron=True)

        reports = _run_trials(trial, args.trials, args.threads)
        meta = {"n": args.n, "d": d, "L": L, "eta": params.eta, "alpha": args.alpha}
    per_trial = [r.summary() for r in reports]
    if args.out:
        Path(args.out).write_text(json.dumps(per_trial, indent=2, sort_keys=True) + "\n")
    meta.update(
        {
            "delta": args.delta,
            "num_localized": [r.num_localized for r in reports],
            "max_top_mass": max(r.max_mass for r in reports),
            "flagged_degenerate_clusters": [len(r.degenerate_clusters) for r in reports],
        }
    )
    return _emit(args, seed, meta)


# --------------------------------------------------------------------------
# parser
# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="master seed (default: $REGSPEC_SEED or 0)")
    common.add_argument("--out", type=Path, default=None, help="primary output file")
    common.add_argument("--summary", type=Path, default=None, help="also write the JSON summary here")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--no-timestamp", action="store_true")

    p = argparse.ArgumentParser(prog="regspec", description="Spectra of random regular graphs.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("sample", parents=[common], help="sample a random regular graph")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--method", choices=("auto", "rejection", "switch"), default="auto")
    s.set_defaults(func=cmd_sample)

    s = sub.add_parser("spectrum", parents=[common], help="adjacency spectrum of a graph")
    s.add_argument("--input", type=Path, default=None, help="edge-list file")
    s.add_argument("--fixture", default=None, help="cycle:N, complete:N or tree:D:ZETA[:regular]")
    s.add_argument("--n", type=int, default=None)
    s.add_argument("--d", type=int, default=None)
    s.add_argument("--scale", type=float, default=None, help="default 1/sqrt(d-1)")
    s.add_argument("--vectors", type=Path, default=None, help="write eigenvectors here")
    s.set_defaults(func=cmd_spectrum)

    s = sub.add_parser("tree", parents=[common], help="closed forms for the finite trees")
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--zeta", type=int, required=True)
    s.add_argument("--kind", choices=[k.value for k in TreeKind], default=TreeKind.ALMOST_REGULAR.value)
    s.add_argument("--z", default=None, help="spectral parameter, e.g. 0.5+0.1j")
    s.add_argument("--check", action="store_true", help="compare against dense linear algebra")
    s.set_defaults(func=cmd_tree)

    def ensemble(sp, delta_default):
        sp.add_argument("--n", type=int, required=True)
        sp.add_argument("--d", type=int, default=None)
        sp.add_argument("--gamma", type=float, default=None, help="d = ceil((log n)^gamma)")
        sp.add_argument("--alpha", type=float, default=0.5)
        sp.add_argument("--delta", type=float, default=delta_default)
        sp.add_argument("--trials", type=int, default=1)

    s = sub.add_parser("esd", parents=[common], help="KS distances and Stieltjes errors")
    ensemble(s, 0.1)
    s.set_defaults(func=cmd_esd)

    s = sub.add_parser("locallaw", parents=[common], help="interval-count sweep")
    ensemble(s, 0.15)
    s.add_argument("--self-test", action="store_true", help="use exact semicircle quantiles")
    s.set_defaults(func=cmd_locallaw)

    s = sub.add_parser("census", parents=[common], help="cycle counts and acyclic balls")
    s.add_argument("--fixture", default=None)
    s.add_argument("--n", type=int, default=None)
    s.add_argument("--d", type=int, default=None)
    s.add_argument("--r", type=int, default=None)
    s.add_argument("--s-max", type=int, default=4)
    s.add_argument("--trials", type=int, default=1)
    s.set_defaults(func=cmd_census)

    s = sub.add_parser("deloc", parents=[common], help="eigenvector localization")
    s.add_argument("--fixture", default=None, help="identity:N or cycle:N")
    s.add_argument("--n", type=int, default=None)
    s.add_argument("--d", type=int, default=None)
    s.add_argument("--gamma", type=float, default=None)
    s.add_argument("--alpha", type=float, default=0.5)
    s.add_argument("--delta", type=float, default=0.1)
    s.add_argument("--L", type=int, default=None)
    s.add_argument("--trials", type=int, default=1)
    s.set_defaults(func=cmd_deloc)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except ParameterError as exc:
        print(f"regspec: error: {exc}", file=sys.stderr)
        return 2
    except RegspecError as exc:
        print(f"regspec: error: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
