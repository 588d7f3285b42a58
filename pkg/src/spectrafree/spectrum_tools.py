"""Spectrum diagnostics that never require a full eigendecomposition:
lambda_max bounds and power iteration, pseudo-spectrum membership,
spectral density moments through Chebyshev traces, smooth density curves,
confluent-Vandermonde characteristic polynomials and filter conditioning.
"""

from __future__ import annotations

import warnings

import numpy as np

from ._errors import ArgumentError, RankError, SizeCapError
from .sparse_linalg import SparseMatrix, spmv

CHARPOLY_MAX_DEGREE = 50
EXACT_TRACE_MAX_N = 2000
CONDITIONING_SAMPLES = 1024


def _operator_abs_row_col_sums(lap):
    """Row and column absolute sums of the operator matrix (D^-1 L for the
    random-walk kind, L otherwise)."""
    L = lap.L
    rows = np.zeros(lap.n)
    cols = np.zeros(lap.n)
    r = np.repeat(np.arange(lap.n), np.diff(L.row_ptr))
    vals = np.abs(L.values)
    if lap.kind == "random-walk":
        vals = vals / lap.mass[r]
    np.add.at(rows, r, vals)
    np.add.at(cols, L.col_idx, vals)
    return rows, cols


def lambda_max_bound(lap) -> float:
    """Gershgorin-style certified upper bound on the largest eigenvalue:
    min of the maximal absolute row and column sums of the operator."""
    rows, cols = _operator_abs_row_col_sums(lap)
    return float(min(rows.max(), cols.max()))


def power_lambda_max(lap, tol: float = 1e-8, max_iter: int = 2000) -> float:
    """Largest eigenvalue by power iteration on the (mass-self-adjoint)
    operator. Falls back to the certified bound, with a warning, when the
    Rayleigh quotient has not settled within max_iter."""
    n = lap.n
    rng = np.random.default_rng(0)
    x = rng.standard_normal(n)
    x /= lap.weighted_norm(x)
    lam = 0.0
    for _ in range(max_iter):
        y = lap.op(x)
        lam_new = lap.weighted_dot(x, y)
        ny = lap.weighted_norm(y)
        if ny == 0.0:
            return 0.0
        x = y / ny
        if abs(lam_new - lam) <= tol * max(abs(lam_new), 1.0):
            return float(lam_new)
        lam = lam_new
    warnings.warn("power iteration did not converge; returning the upper bound")
    return lambda_max_bound(lap)


def mapping_lambda_max(lap) -> float:
    """Safe spectral-interval endpoint for Chebyshev mappings: the power
    estimate inflated by 5%, capped by the certified bound."""
    bound = lambda_max_bound(lap)
    est = power_lambda_max(lap, tol=1e-6)
    return float(min(1.05 * est, bound)) if est > 0 else bound


class PseudoSpectrumQuery:
    """Membership answer for one probe z at threshold epsilon."""

    __slots__ = ("z", "epsilon", "member", "margin")

    def __init__(self, z, epsilon, member, margin):
        self.z = float(z)
        self.epsilon = float(epsilon)
        self.member = bool(member)
        self.margin = float(margin)

    def __repr__(self):
        flag = "in" if self.member else "out"
        return f"PseudoSpectrumQuery(z={self.z:g}, eps={self.epsilon:g}, {flag}, margin={self.margin:.3e})"


def pseudo_spectrum_membership(A, z: float, epsilon: float) -> PseudoSpectrumQuery:
    """z belongs to the epsilon-pseudo-spectrum of symmetric A iff
    min_i |z - lambda_i| <= epsilon (the disks around the eigenvalues)."""
    if epsilon < 0:
        raise ArgumentError("epsilon must be nonnegative")
    A = np.asarray(A, dtype=np.float64)
    if A.shape[0] != A.shape[1]:
        raise ArgumentError("matrix must be square")
    if A.shape[0] > 2000:
        raise SizeCapError("dense pseudo-spectrum capped at n = 2000")
    lam = np.linalg.eigvalsh(0.5 * (A + A.T))
    margin = float(np.min(np.abs(z - lam)))
    return PseudoSpectrumQuery(z, epsilon, margin <= epsilon, margin)


def pseudo_spectrum_scan(A, z_grid, epsilon: float):
    """Membership queries over a grid of probes (shares one eigensolve)."""
    A = np.asarray(A, dtype=np.float64)
    lam = np.linalg.eigvalsh(0.5 * (A + A.T))
    out = []
    for z in np.asarray(z_grid, dtype=np.float64):
        margin = float(np.min(np.abs(z - lam)))
        out.append(PseudoSpectrumQuery(z, epsilon, margin <= epsilon, margin))
    return out


class DensityMoments:
    """Chebyshev moments mu_k = Trace(T_k(A)) / n of a matrix with spectrum
    in [-1, 1]."""

    __slots__ = ("mu", "n", "method")

    def __init__(self, mu, n, method):
        self.mu = np.asarray(mu, dtype=np.float64)
        self.n = int(n)
        self.method = method


def _as_apply(op):
    if isinstance(op, SparseMatrix):
        return lambda v: spmv(op, v), op.n_rows
    if isinstance(op, np.ndarray):
        return lambda v: op @ v, op.shape[0]
    raise ArgumentError("operator must be a matrix or (apply, n) pair")


def mapped_operator(lap, lam_max: float):
    """Callable for (2 / lam_max) Lop - I, plus the dimension."""

    def apply(v):
        return (2.0 / lam_max) * lap.op(v) - v

    return apply, lap.n


def spectral_density_moments(op, K: int, method: str = "exact-trace",
                             probes: int = 32, seed: int = 0,
                             n: int | None = None) -> DensityMoments:
    """Moments mu_0..mu_K of the spectral density of an operator with
    spectrum inside [-1, 1].

    'exact-trace' sweeps all n basis vectors through the Chebyshev
    recursion (deterministic, used up to n = 2000); 'stochastic' uses
    Hutchinson's estimator with Rademacher probes.
    """
    if K < 0:
        raise ArgumentError("K must be >= 0")
    if isinstance(op, tuple):
        apply, dim = op
    else:
        apply, dim = _as_apply(op)
    if n is not None:
        dim = n
    if method not in ("exact-trace", "stochastic"):
        raise ArgumentError(f"unknown method {method!r}")
    mu = np.zeros(K + 1)
    mu[0] = 1.0
    if K == 0:
        return DensityMoments(mu, dim, method)
    if method == "exact-trace":
        if dim > EXACT_TRACE_MAX_N:
            raise ArgumentError(
                f"exact trace capped at n = {EXACT_TRACE_MAX_N}; use 'stochastic'"
            )
        vectors = np.eye(dim)
        weight = 1.0 / dim
        label = method
    else:
        rng = np.random.default_rng(seed)
        vectors = rng.choice([-1.0, 1.0], size=(probes, dim))
        weight = 1.0 / (probes * dim)
        label = f"stochastic({probes})"
    for v in vectors:
        # |T_k| <= 1 on [-1, 1], so iterate norms are bounded by ||v||; growth
        # beyond a generous factor proves the spectrum leaks outside the interval
        cap = 1e6 * max(float(np.max(np.abs(v))), 1e-30) * dim
        t_prev = v
        t_cur = apply(v)
        mu[1] += weight * float(v @ t_cur)
        for k in range(2, K + 1):
            t_prev, t_cur = t_cur, 2.0 * apply(t_cur) - t_prev
            if float(np.max(np.abs(t_cur))) > cap:
                raise ArgumentError(
                    "Chebyshev sweep diverged: spectrum is not inside [-1, 1]"
                )
            mu[k] += weight * float(v @ t_cur)
    return DensityMoments(mu, dim, label)


def smooth_density(source, t, sigma: float = 0.1) -> np.ndarray:
    """Smooth spectral density over the evaluation grid t.

    From eigenvalues: a unit-mass Gaussian mixture of width sigma,
    (1/n) sum_i N(t - lambda_i; sigma).  From DensityMoments: the Chebyshev
    reconstruction of the weighted density (1 - t^2)^{1/2} delta(t),
    unweighted afterwards; the grid must stay inside (-1, 1). A positive
    sigma then smooths the reconstructed curve by discrete convolution with
    the same Gaussian.
    """
    t = np.asarray(t, dtype=np.float64)
    if isinstance(source, DensityMoments):
        if np.any(np.abs(t) >= 1.0):
            raise ArgumentError("moment-based density needs a grid inside (-1, 1)")
        mu = source.mu
        acc = np.full_like(t, mu[0])
        t_prev = np.ones_like(t)
        t_cur = t.copy()
        for k in range(1, len(mu)):
            acc += 2.0 * mu[k] * t_cur
            t_prev, t_cur = t_cur, 2.0 * t * t_cur - t_prev
        curve = acc / (np.pi * np.sqrt(1.0 - t**2))
        if sigma > 0 and len(t) > 2:
            dt = t[1] - t[0]
            half = int(np.ceil(4.0 * sigma / dt))
            kk = np.arange(-half, half + 1) * dt
            kern = np.exp(-(kk**2) / (2.0 * sigma**2))
            kern /= kern.sum()
            curve = np.convolve(curve, kern, mode="same")
        return curve
    lam = np.asarray(source, dtype=np.float64)
    if sigma <= 0:
        raise ArgumentError("sigma must be positive")
    z = (t[:, None] - lam[None, :]) / sigma
    gauss = np.exp(-0.5 * z**2) / (np.sqrt(2.0 * np.pi) * sigma)
    return gauss.mean(axis=1)


def _group_eigenvalues(values, rtol=1e-9):
    values = np.sort(np.asarray(values, dtype=np.float64))
    scale = max(np.abs(values).max(), 1.0)
    groups = []
    for v in values:
        if groups and abs(v - groups[-1][0]) <= rtol * scale:
            groups[-1][1] += 1
        else:
            groups.append([v, 1])
    return groups


def characteristic_polynomial(eigenvalues) -> np.ndarray:
    """Monic coefficients (ascending powers) of prod (s - lambda_i).

    Solved through the confluent Vandermonde system: P(lambda) = 0 at every
    distinct eigenvalue plus vanishing derivatives up to the multiplicity.
    """
    groups = _group_eigenvalues(eigenvalues)
    n = sum(mult for _, mult in groups)
    if n > CHARPOLY_MAX_DEGREE:
        raise ArgumentError(f"degree {n} exceeds the cap {CHARPOLY_MAX_DEGREE}")
    if n == 0:
        raise ArgumentError("need at least one eigenvalue")
    # unknowns alpha_0..alpha_{n-1}; alpha_n = 1 moved to the right side
    V = np.zeros((n, n))
    rhs = np.zeros(n)
    row = 0
    for lam, mult in groups:
        for k in range(mult):
            for i in range(k, n):
                fall = 1.0
                for d in range(k):
                    fall *= i - d
                V[row, i] = fall * lam ** (i - k)
            fall = 1.0
            for d in range(k):
                fall *= n - d
            rhs[row] = -fall * lam ** (n - k)
            row += 1
    try:
        alpha = np.linalg.solve(V, rhs)
    except np.linalg.LinAlgError as exc:
        raise RankError(f"confluent Vandermonde system is singular: {exc}") from exc
    return np.concatenate([alpha, [1.0]])


def conditioning_estimate(filt, interval) -> float:
    """kappa = max|phi| / min|phi| over a 1024-point sampling of the interval.

    Callers with a filter vanishing at 0 pass the smallest nonzero filtered
    eigenvalue as the left endpoint. Returns +inf when the minimum falls
    below 1e-300.
    """
    lo, hi = float(interval[0]), float(interval[1])
    if hi < lo:
        raise ArgumentError("empty interval")
    s = np.linspace(lo, hi, CONDITIONING_SAMPLES)
    vals = np.abs(np.asarray(filt(s), dtype=np.float64))
    if not np.all(np.isfinite(vals)):
        return float("inf")
    vmin = vals.min()
    if vmin < 1e-300:
        return float("inf")
    return float(vals.max() / vmin)
