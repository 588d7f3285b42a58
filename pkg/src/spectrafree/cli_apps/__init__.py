"""Command-line drivers for desk-scale spectral processing experiments.

Every command writes plot-ready CSV files, a JSON report with input
digests, metrics and timings, and static matplotlib figures rendered
alongside the delimited output.

Exit codes: 0 success, 2 input error, 3 numerical failure.
"""

from __future__ import annotations

import os
import sys
import warnings

import click
import numpy as np

from .._errors import ArgumentError, InputError, NumericalError
from ..filters import FilterSpec, parse_filter
from ..graph_core import (
    build_from_edge_list,
    build_from_mesh,
    farthest_point_sampling,
    laplacian,
)
from ..methods import MethodEngine
from ..spectral_oracle import dense_eigen
from ..spectrum_tools import (
    characteristic_polynomial,
    lambda_max_bound,
    mapped_operator,
    pseudo_spectrum_scan,
    smooth_density,
    spectral_density_moments,
)
from . import figures
from .reports import ExperimentReport, write_csv

KIND_MAP = {"comb": "combinatorial", "rw": "random-walk", "sym": "symmetric-normalized"}
RIDGE = 1e-10
DEFAULT_DIFFUSION_SCALES = (1e-3, 1e-2, 1e-1, 0.5)


def _parse_floats(text):
    return [float(tok) for tok in str(text).replace(";", ",").split(",") if tok.strip()]


def _parse_ints(text):
    return [int(tok) for tok in str(text).replace(";", ",").split(",") if tok.strip()]


def _load_graph(graph_path, mesh_path, weighting, positions, mesh_weighting):
    if (graph_path is None) == (mesh_path is None):
        raise ArgumentError("provide exactly one of --graph or --mesh")
    if graph_path:
        name, _, param = weighting.partition(":")
        sigma = float(param) if param else None
        return build_from_edge_list(graph_path, name, sigma=sigma,
                                    positions_path=positions)
    return build_from_mesh(mesh_path, mesh_weighting)


def _load_signal(path, n):
    rows = []
    first_data_line = True
    with open(path, "r", encoding="utf-8") as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = [p for p in line.replace(",", " ").split() if p]
            try:
                rows.append([float(p) for p in parts])
            except ValueError:
                if first_data_line:
                    first_data_line = False
                    continue  # single header row tolerated
                raise ArgumentError(f"{path}: non-numeric row {line!r}") from None
            first_data_line = False
    arr = np.asarray(rows, dtype=np.float64)
    if arr.ndim == 2 and arr.shape[1] == 1:
        arr = arr[:, 0]
    if arr.shape[0] != n:
        raise ArgumentError(f"{path}: signal has {arr.shape[0]} rows for {n} nodes")
    return arr


def _signal_or_positions(signal_path, g):
    if signal_path:
        return _load_signal(signal_path, g.n_nodes)
    if g.node_positions is not None:
        return np.array(g.node_positions)
    raise ArgumentError("no --signal given and the graph carries no positions")


def _as_columns(f):
    f = np.asarray(f, dtype=np.float64)
    return f[:, None] if f.ndim == 1 else f


def _rel_errors(ref, approx):
    ref = _as_columns(ref)
    approx = _as_columns(approx)
    linf = float(np.max(np.abs(approx - ref)) / max(np.max(np.abs(ref)), 1e-300))
    l2 = float(np.linalg.norm(approx - ref) / max(np.linalg.norm(ref), 1e-300))
    return linf, l2


def _least_squares(B, f):
    """Projection of f on the basis columns; ridge fallback on rank deficiency."""
    sol, _, rank, _ = np.linalg.lstsq(B, f, rcond=None)
    if rank < B.shape[1]:
        warnings.warn("rank-deficient basis; using ridge-regularized projection")
        G = B.T @ B + RIDGE * np.eye(B.shape[1])
        sol = np.linalg.solve(G, B.T @ f)
    return B @ sol


def _fps_mode(g):
    return "euclidean" if g.node_positions is not None else "weight"


def _scaled_filters(filt, scales):
    if filt.family == "diffusion":
        return [FilterSpec.diffusion(t) for t in scales]
    if filt.family == "mexican":
        return [FilterSpec.mexican(t) for t in scales]
    return [filt]


def _run(body):
    try:
        body()
    except InputError as exc:
        click.echo(f"input error: {exc}", err=True)
        sys.exit(2)
    except NumericalError as exc:
        click.echo(f"numerical failure: {exc}", err=True)
        sys.exit(3)


def graph_options(fn):
    fn = click.option("--graph", "graph_path", type=click.Path(exists=True),
                      default=None, help="edge-list file")(fn)
    fn = click.option("--mesh", "mesh_path", type=click.Path(exists=True),
                      default=None, help="OFF mesh file")(fn)
    fn = click.option("--weighting", default="given",
                      help="edge-list weighting: given | unit | gaussian:SIGMA")(fn)
    fn = click.option("--positions", type=click.Path(exists=True), default=None,
                      help="x,y,z sidecar CSV for edge-list graphs")(fn)
    fn = click.option("--mesh-weighting", default="cotangent",
                      type=click.Choice(["cotangent", "uniform"]))(fn)
    fn = click.option("--laplacian", "kind", default="rw",
                      type=click.Choice(sorted(KIND_MAP)), help="Laplacian kind")(fn)
    return fn


def output_options(fn):
    fn = click.option("--out", "out_dir", default="spectrafree_out",
                      type=click.Path(), help="output directory")(fn)
    fn = click.option("--rng-seed", default=0, type=int)(fn)
    fn = click.option("--tol", default=1e-10, type=float)(fn)
    return fn


def _prepare(ctx, graph_path, mesh_path, weighting, positions, mesh_weighting,
             kind, out_dir, rng_seed, tol):
    g = _load_graph(graph_path, mesh_path, weighting, positions, mesh_weighting)
    lap = laplacian(g, KIND_MAP[kind])
    os.makedirs(out_dir, exist_ok=True)
    echo = ctx.command_path + " " + " ".join(
        f"--{k.replace('_', '-')}={v}"
        for k, v in sorted(ctx.params.items()) if v is not None)
    report = ExperimentReport(echo, rng_seed)
    for p in (graph_path, mesh_path, positions):
        report.add_input(p)
    engine = MethodEngine(lap, g, tol=tol)
    return g, lap, engine, report


@click.group()
@click.version_option()
def main():
    """Spectrum-free spectral graph processing toolkit."""


# ---------------------------------------------------------------------------
# kernel
# ---------------------------------------------------------------------------


@main.command()
@graph_options
@click.option("--filter", "filter_text", default="diffusion:0.1",
              help="NAME[:params], e.g. diffusion:0.1, commute-time")
@click.option("--method", default="oracle", help="oracle | cheb:N | pade:R | cheb-rational:K")
@click.option("--seeds", default="0", help="comma list of seed nodes")
@click.option("--scales", default=None, help="comma list of t values")
@output_options
@click.pass_context
def kernel(ctx, graph_path, mesh_path, weighting, positions, mesh_weighting,
           kind, filter_text, method, seeds, scales, out_dir, rng_seed, tol):
    """Evaluate spectral kernel/wavelet columns at seed nodes."""

    def body():
        g, lap, engine, report = _prepare(ctx, graph_path, mesh_path, weighting,
                                          positions, mesh_weighting, kind,
                                          out_dir, rng_seed, tol)
        filt = parse_filter(filter_text)
        seed_nodes = _parse_ints(seeds)
        for s in seed_nodes:
            if not (0 <= s < g.n_nodes):
                raise ArgumentError(f"seed {s} out of range")
        variants = _scaled_filters(filt, _parse_floats(scales)) if scales else [filt]
        report.methods = [method]
        report.tic("kernel")
        names, cols = [], []
        for s in seed_nodes:
            for fv in variants:
                names.append(f"seed{s}_{fv.name.replace(':', '_')}")
                cols.append(engine.kernel_column(s, fv, method))
        report.toc("kernel")
        mat = np.column_stack(cols)
        rows = [[i] + list(mat[i]) for i in range(g.n_nodes)]
        csv = write_csv(os.path.join(out_dir, "kernel_columns.csv"),
                        ["node"] + names, rows)
        report.add_output(csv)
        report.metrics = {f"l2_norm_{nm}": float(np.linalg.norm(c))
                          for nm, c in zip(names, cols)}
        report.solver = engine.solve_log
        fig = figures.line_plot(os.path.join(out_dir, "kernel_columns.png"),
                                np.arange(g.n_nodes),
                                dict(zip(names, cols)),
                                "node", "kernel value",
                                f"{filt.name} via {method}")
        report.add_figure(fig)
        click.echo(report.write(out_dir))

    _run(body)


# ---------------------------------------------------------------------------
# compare
# ---------------------------------------------------------------------------


@main.command()
@graph_options
@click.option("--filter", "filter_text", default="diffusion:0.1")
@click.option("--methods", default="oracle,cheb:50,pade:7,cheb-rational:20",
              help="comma list of methods; oracle is the reference")
@click.option("--trials", default=5, type=int, help="random unit-norm signals")
@output_options
@click.pass_context
def compare(ctx, graph_path, mesh_path, weighting, positions, mesh_weighting,
            kind, filter_text, methods, trials, out_dir, rng_seed, tol):
    """Per-method error table against the dense oracle."""

    def body():
        import time as _time

        g, lap, engine, report = _prepare(ctx, graph_path, mesh_path, weighting,
                                          positions, mesh_weighting, kind,
                                          out_dir, rng_seed, tol)
        filt = parse_filter(filter_text)
        method_list = [m.strip() for m in methods.split(",") if m.strip()]
        report.methods = method_list
        rng = np.random.default_rng(rng_seed)
        signals = rng.standard_normal((trials, g.n_nodes))
        signals /= np.linalg.norm(signals, axis=1, keepdims=True)
        refs = [engine.apply(f, filt, "oracle") for f in signals]
        rows = []
        for m in method_list:
            t0 = _time.perf_counter()
            l2s, linfs = [], []
            for f, ref in zip(signals, refs):
                approx = engine.apply(f, filt, m)
                linf, l2 = _rel_errors(ref, approx)
                l2s.append(l2)
                linfs.append(linf)
            ms = 1000.0 * (_time.perf_counter() - t0)
            rows.append([m, float(np.mean(l2s)), float(np.max(l2s)),
                         float(np.mean(linfs)), float(np.max(linfs)), ms])
        csv = write_csv(os.path.join(out_dir, "compare.csv"),
                        ["method", "l2_rel_mean", "l2_rel_max",
                         "linf_rel_mean", "linf_rel_max", "time_ms"], rows)
        report.add_output(csv)
        report.metrics = {f"l2_rel_mean_{r[0]}": r[1] for r in rows}
        report.solver = engine.solve_log
        nonzero = [max(r[1], 1e-18) for r in rows]
        fig = figures.bar_plot(os.path.join(out_dir, "compare.png"),
                               [r[0] for r in rows], nonzero,
                               "mean relative l2 error",
                               f"{filt.name}: method comparison", logy=True)
        report.add_figure(fig)
        click.echo(report.write(out_dir))

    _run(body)


# ---------------------------------------------------------------------------
# reconstruct
# ---------------------------------------------------------------------------


def _basis_columns(engine, g, basis_kind, k, scales, method):
    """Basis matrix for signal reconstruction at budget k."""
    lap = engine.lap
    if basis_kind == "eigs":
        return engine.eigensystem().eigenvectors[:, :k]
    mode = _fps_mode(g)
    if basis_kind == "harmonic":
        seeds = farthest_point_sampling(g, k, seed=0, mode=mode)
        cols = [engine.kernel_column(p, FilterSpec.commute_time(), method)
                for p in seeds]
        return np.column_stack(cols)
    if basis_kind == "diffusion":
        n_seeds = max(1, round(k / len(scales)))
        seeds = farthest_point_sampling(g, n_seeds, seed=0, mode=mode)
        cols = [engine.kernel_column(p, FilterSpec.diffusion(t), method)
                for t in scales for p in seeds]
        return np.column_stack(cols)
    raise ArgumentError(f"unknown basis {basis_kind!r}")


@main.command()
@graph_options
@click.option("--signal", "signal_path", type=click.Path(exists=True), default=None,
              help="per-node signal CSV; defaults to mesh coordinates")
@click.option("--basis", default="eigs", help="eigs | harmonic | diffusion[:scales]")
@click.option("--k-sweep", "k_sweep", default=None,
              help="comma list of basis sizes (default: 8 log-spaced up to n)")
@click.option("--method", default="pade:7", help="method for kernel basis columns")
@output_options
@click.pass_context
def reconstruct(ctx, graph_path, mesh_path, weighting, positions, mesh_weighting,
                kind, signal_path, basis, k_sweep, method, out_dir, rng_seed, tol):
    """Least-squares signal reconstruction error against basis size."""

    def body():
        g, lap, engine, report = _prepare(ctx, graph_path, mesh_path, weighting,
                                          positions, mesh_weighting, kind,
                                          out_dir, rng_seed, tol)
        if signal_path:
            report.add_input(signal_path)
        f = _signal_or_positions(signal_path, g)
        basis_kind, _, param = basis.partition(":")
        # --basis diffusion:k,scales or harmonic:k; integer tokens set the
        # budget, fractional tokens set diffusion scales
        basis_k = None
        scales = []
        for tok in param.split(","):
            tok = tok.strip()
            if not tok:
                continue
            try:
                basis_k = int(tok)
            except ValueError:
                scales.append(float(tok))
        if not scales:
            scales = list(DEFAULT_DIFFUSION_SCALES)
        n = g.n_nodes
        if k_sweep:
            ks = [k for k in _parse_ints(k_sweep) if 1 <= k <= n]
        elif basis_k is not None:
            ks = [min(basis_k, n)]
        else:
            ks = sorted(set(np.unique(np.geomspace(1, n, 8).astype(int))))
        report.methods = [method]
        report.tic("reconstruct")
        rows = []
        for k in ks:
            B = _basis_columns(engine, g, basis_kind, k, scales, method)
            gk = _least_squares(B, _as_columns(f))
            linf, l2 = _rel_errors(f, gk)
            rows.append([k, B.shape[1], linf, l2])
        report.toc("reconstruct")
        csv = write_csv(os.path.join(out_dir, "reconstruction_error.csv"),
                        ["k", "n_columns", "linf_rel", "l2_rel"], rows)
        report.add_output(csv)
        report.metrics = {"final_linf_rel": rows[-1][2], "final_l2_rel": rows[-1][3]}
        report.solver = engine.solve_log
        fig = figures.line_plot(os.path.join(out_dir, "reconstruction_error.png"),
                                [r[0] for r in rows],
                                {"linf": [max(r[2], 1e-18) for r in rows],
                                 "l2": [max(r[3], 1e-18) for r in rows]},
                                "basis size k", "relative error",
                                f"reconstruction with {basis_kind} basis", logy=True)
        report.add_figure(fig)
        click.echo(report.write(out_dir))

    _run(body)


# ---------------------------------------------------------------------------
# smooth
# ---------------------------------------------------------------------------


@main.command()
@graph_options
@click.option("--signal", "signal_path", type=click.Path(exists=True), default=None)
@click.option("--noise", default=0.0, type=float, help="Gaussian noise std dev")
@click.option("--seeds", default=100, type=int, help="farthest-point seed count")
@click.option("--scales", default="0.001,0.01,0.1,0.5,1,2",
              help="diffusion scales for the basis")
@click.option("--sweep", default=None,
              help="comma list of seed counts for per-scale error curves")
@click.option("--method", default="cheb-rational:20")
@output_options
@click.pass_context
def smooth(ctx, graph_path, mesh_path, weighting, positions, mesh_weighting,
           kind, signal_path, noise, seeds, scales, sweep, method,
           out_dir, rng_seed, tol):
    """Denoise a signal by projecting on a multi-scale diffusion basis."""

    def body():
        g, lap, engine, report = _prepare(ctx, graph_path, mesh_path, weighting,
                                          positions, mesh_weighting, kind,
                                          out_dir, rng_seed, tol)
        if signal_path:
            report.add_input(signal_path)
        f = _as_columns(_signal_or_positions(signal_path, g))
        scale_list = _parse_floats(scales)
        if seeds > g.n_nodes:
            raise ArgumentError(f"--seeds {seeds} exceeds node count {g.n_nodes}")
        rng = np.random.default_rng(rng_seed)
        noisy = f + noise * rng.standard_normal(f.shape)
        report.methods = [method]
        mode = _fps_mode(g)
        report.tic("smooth")
        all_seeds = farthest_point_sampling(g, seeds, seed=0, mode=mode)
        cols = [engine.kernel_column(p, FilterSpec.diffusion(t), method)
                for t in scale_list for p in all_seeds]
        B = np.column_stack(cols)
        smoothed = _least_squares(B, noisy)
        report.toc("smooth")
        linf, l2 = _rel_errors(f, smoothed)
        comp = [f"c{j}" for j in range(f.shape[1])]
        header = (["node"] + [f"clean_{c}" for c in comp]
                  + [f"noisy_{c}" for c in comp] + [f"smoothed_{c}" for c in comp])
        rows = [[i] + list(f[i]) + list(noisy[i]) + list(smoothed[i])
                for i in range(g.n_nodes)]
        csv = write_csv(os.path.join(out_dir, "smoothed_signal.csv"), header, rows)
        report.add_output(csv)
        report.metrics = {"linf_rel": linf, "l2_rel": l2,
                          "n_basis_columns": B.shape[1], "noise_sigma": noise}
        if sweep:
            curve_rows = []
            for t in scale_list:
                for kseeds in _parse_ints(sweep):
                    sub = all_seeds[:kseeds] if kseeds <= seeds else \
                        farthest_point_sampling(g, kseeds, seed=0, mode=mode)
                    Bk = np.column_stack(
                        [engine.kernel_column(p, FilterSpec.diffusion(t), method)
                         for p in sub])
                    gk = _least_squares(Bk, noisy)
                    li, l2k = _rel_errors(f, gk)
                    curve_rows.append([t, kseeds, li, l2k])
            curve_csv = write_csv(os.path.join(out_dir, "smoothing_error.csv"),
                                  ["scale", "seeds", "linf_rel", "l2_rel"],
                                  curve_rows)
            report.add_output(curve_csv)
            series = {}
            for t in scale_list:
                pts = [(r[1], r[3]) for r in curve_rows if r[0] == t]
                series[f"t={t:g}"] = [max(p[1], 1e-18) for p in pts]
            xs = _parse_ints(sweep)
            fig = figures.line_plot(os.path.join(out_dir, "smoothing_error.png"),
                                    xs, series, "seed count", "relative l2 error",
                                    "smoothing error vs basis size", logy=True)
            report.add_figure(fig)
        report.solver = engine.solve_log
        fig = figures.line_plot(os.path.join(out_dir, "smoothed_signal.png"),
                                np.arange(g.n_nodes),
                                {"clean": f[:, 0], "noisy": noisy[:, 0],
                                 "smoothed": smoothed[:, 0]},
                                "node", "signal",
                                f"smoothing, sigma={noise:g}")
        report.add_figure(fig)
        click.echo(report.write(out_dir))

    _run(body)


# ---------------------------------------------------------------------------
# density / pseudospec / charpoly / distance
# ---------------------------------------------------------------------------


@main.command()
@graph_options
@click.option("--moments", "n_moments", default=16, type=int)
@click.option("--density-method", default="exact-trace",
              help="exact-trace | stochastic[:probes]")
@click.option("--sigma", default=0.05, type=float)
@click.option("--grid-points", default=401, type=int)
@output_options
@click.pass_context
def density(ctx, graph_path, mesh_path, weighting, positions, mesh_weighting,
            kind, n_moments, density_method, sigma, grid_points,
            out_dir, rng_seed, tol):
    """Spectral density moments (Chebyshev traces) and a smooth curve."""

    def body():
        g, lap, engine, report = _prepare(ctx, graph_path, mesh_path, weighting,
                                          positions, mesh_weighting, kind,
                                          out_dir, rng_seed, tol)
        bound = lambda_max_bound(lap)
        name, _, probes = density_method.partition(":")
        report.methods = [density_method]
        report.tic("moments")
        mom = spectral_density_moments(mapped_operator(lap, bound), n_moments,
                                       method="stochastic" if name == "stochastic"
                                       else "exact-trace",
                                       probes=int(probes or 32), seed=rng_seed)
        report.toc("moments")
        mcsv = write_csv(os.path.join(out_dir, "density_moments.csv"),
                         ["k", "mu"], list(enumerate(mom.mu)))
        report.add_output(mcsv)
        t = np.linspace(-0.995, 0.995, grid_points)
        curve = smooth_density(mom, t, sigma=sigma)
        lam_axis = (t + 1.0) * bound / 2.0
        ccsv = write_csv(os.path.join(out_dir, "density_curve.csv"),
                         ["t", "lambda", "density"],
                         [[ti, li, ci] for ti, li, ci in zip(t, lam_axis, curve)])
        report.add_output(ccsv)
        report.metrics = {"mu0": float(mom.mu[0]), "lambda_bound": bound,
                          "curve_integral": float(np.trapezoid(curve, t))}
        fig = figures.line_plot(os.path.join(out_dir, "density_curve.png"),
                                lam_axis, {"density": curve},
                                "lambda", "density", "smooth spectral density")
        report.add_figure(fig)
        click.echo(report.write(out_dir))

    _run(body)


@main.command()
@graph_options
@click.option("--z-min", default=-0.5, type=float)
@click.option("--z-max", default=3.5, type=float)
@click.option("--z-count", default=201, type=int)
@click.option("--epsilon", default=0.1, type=float)
@output_options
@click.pass_context
def pseudospec(ctx, graph_path, mesh_path, weighting, positions, mesh_weighting,
               kind, z_min, z_max, z_count, epsilon, out_dir, rng_seed, tol):
    """Pseudo-spectrum membership scan of the Laplacian operator."""

    def body():
        g, lap, engine, report = _prepare(ctx, graph_path, mesh_path, weighting,
                                          positions, mesh_weighting, kind,
                                          out_dir, rng_seed, tol)
        L = lap.L.to_dense()
        if lap.kind == "random-walk":
            rs = 1.0 / np.sqrt(lap.mass)
            L = (rs[:, None] * L) * rs[None, :]  # similar to D^-1 L
        z = np.linspace(z_min, z_max, z_count)
        report.tic("scan")
        queries = pseudo_spectrum_scan(L, z, epsilon)
        report.toc("scan")
        rows = [[q.z, q.margin, int(q.member)] for q in queries]
        csv = write_csv(os.path.join(out_dir, "pseudospectrum.csv"),
                        ["z", "margin", "member"], rows)
        report.add_output(csv)
        frac = float(np.mean([q.member for q in queries]))
        report.metrics = {"member_fraction": frac, "epsilon": epsilon}
        fig = figures.membership_plot(os.path.join(out_dir, "pseudospectrum.png"),
                                      z, [q.margin for q in queries],
                                      [q.member for q in queries], epsilon,
                                      "pseudo-spectrum scan")
        report.add_figure(fig)
        click.echo(report.write(out_dir))

    _run(body)


@main.command()
@graph_options
@output_options
@click.pass_context
def charpoly(ctx, graph_path, mesh_path, weighting, positions, mesh_weighting,
             kind, out_dir, rng_seed, tol):
    """Characteristic polynomial of the Laplacian via confluent Vandermonde."""

    def body():
        g, lap, engine, report = _prepare(ctx, graph_path, mesh_path, weighting,
                                          positions, mesh_weighting, kind,
                                          out_dir, rng_seed, tol)
        es = engine.eigensystem()
        coeffs = characteristic_polynomial(es.eigenvalues)
        csv = write_csv(os.path.join(out_dir, "charpoly.csv"),
                        ["power", "coefficient"], list(enumerate(coeffs)))
        report.add_output(csv)
        values_csv = os.path.join(out_dir, "eigenvalues.csv")
        vectors_csv = os.path.join(out_dir, "eigenvectors.csv")
        es.to_csv(values_csv, vectors_csv)
        report.add_output(values_csv)
        report.add_output(vectors_csv)
        powers = np.arange(len(coeffs))
        resid = float(np.max(np.abs(
            [np.sum(coeffs * lam ** powers) for lam in es.eigenvalues])))
        report.metrics = {"max_abs_residual_at_eigenvalues": resid}
        fig = figures.coefficient_plot(os.path.join(out_dir, "charpoly.png"),
                                       powers, coeffs, "characteristic polynomial")
        report.add_figure(fig)
        click.echo(report.write(out_dir))

    _run(body)


@main.command()
@graph_options
@click.option("--filter", "filter_text", default="commute-time",
              help="typically inverse powers: commute-time, biharmonic, inverse:3")
@click.option("--method", default="pade:5")
@click.option("--source", default=0, type=int)
@click.option("--targets", default="all", help="'all' or a comma list of nodes")
@output_options
@click.pass_context
def distance(ctx, graph_path, mesh_path, weighting, positions, mesh_weighting,
             kind, filter_text, method, source, targets, out_dir, rng_seed, tol):
    """Spectral distances from a source node."""

    def body():
        g, lap, engine, report = _prepare(ctx, graph_path, mesh_path, weighting,
                                          positions, mesh_weighting, kind,
                                          out_dir, rng_seed, tol)
        filt = parse_filter(filter_text)
        if not (0 <= source < g.n_nodes):
            raise ArgumentError(f"source {source} out of range")
        tgts = (list(range(g.n_nodes)) if targets.strip() == "all"
                else _parse_ints(targets))
        report.methods = [method]
        report.tic("distance")
        rows = [[q, engine.distance(source, q, filt, method)] for q in tgts]
        report.toc("distance")
        csv = write_csv(os.path.join(out_dir, "spectral_distance.csv"),
                        ["node", "distance"], rows)
        report.add_output(csv)
        vals = np.array([r[1] for r in rows])
        report.metrics = {"max_distance": float(vals.max()),
                          "mean_distance": float(vals.mean())}
        report.solver = engine.solve_log
        fig = figures.line_plot(os.path.join(out_dir, "spectral_distance.png"),
                                tgts, {"distance": vals}, "node",
                                f"d(source={source}, node)",
                                f"{filt.name} spectral distance via {method}")
        report.add_figure(fig)
        click.echo(report.write(out_dir))

    _run(body)


if __name__ == "__main__":
    main()
