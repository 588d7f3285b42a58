"""Rational graph filters and their spectrum-free application.

Three construction routes (Pade from Taylor data, rational fit in the
Chebyshev polynomial basis, expansion over Chebyshev rational polynomials
R_n(x) = T_n((x-1)/(x+1))) and three application routes, all reducing to
sparse matrix-vector products plus solves with symmetric positive definite
matrices. The Chebyshev rational recursion reuses one prefactorized
(L + mass) system for every term.
"""

from __future__ import annotations

import json

import numpy as np

from ._errors import (
    ArgumentError,
    DefinitenessError,
    DimensionError,
    NonFiniteSampleError,
    RankError,
    SolverError,
)
from .cheb_filters import ChebSeries, cheb_eval
from .filters import FilterSpec
from .sparse_linalg import cg_solve, make_solver, spmv

_CONSISTENCY_RTOL = 1e-8


class RationalFilter:
    """R = P_n / Q_m with q0 = 1, in the monomial or Chebyshev basis.

    For the Chebyshev basis the coefficients refer to T_k over the affine
    map of ``interval`` onto [-1, 1]; the interval is part of the filter's
    identity there.
    """

    __slots__ = ("p", "q", "basis", "interval")

    def __init__(self, p, q, basis="monomial", interval=None):
        self.p = np.asarray(p, dtype=np.float64)
        self.q = np.asarray(q, dtype=np.float64)
        if abs(self.q[0] - 1.0) > 1e-12:
            raise ArgumentError("denominator must be normalized to q0 = 1")
        if basis not in ("monomial", "chebyshev"):
            raise ArgumentError(f"unknown basis {basis!r}")
        if basis == "chebyshev" and interval is None:
            raise ArgumentError("chebyshev basis needs its interval")
        self.basis = basis
        self.interval = tuple(interval) if interval is not None else None

    @property
    def degree(self):
        return (len(self.p) - 1, len(self.q) - 1)

    def _eval_part(self, coeffs, s):
        s = np.asarray(s, dtype=np.float64)
        if self.basis == "monomial":
            out = np.zeros_like(s)
            for c in coeffs[::-1]:
                out = out * s + c
            return out
        return cheb_eval(ChebSeries(coeffs, self.interval), s)

    def __call__(self, s):
        scalar = np.isscalar(s)
        s = np.atleast_1d(np.asarray(s, dtype=np.float64))
        out = self._eval_part(self.p, s) / self._eval_part(self.q, s)
        return float(out[0]) if scalar else out

    def as_filter_spec(self) -> FilterSpec:
        interval = self.interval if self.interval is not None else (0.0, 2.0)
        return FilterSpec.rational(self.p, self.q, basis=self.basis,
                                   interval=interval)

    def to_json(self):
        data = {"p": self.p.tolist(), "q": self.q.tolist(), "basis": self.basis}
        if self.interval is not None:
            data["interval"] = list(self.interval)
        return json.dumps(data)

    @classmethod
    def from_json(cls, text):
        data = json.loads(text)
        return cls(data["p"], data["q"], data.get("basis", "monomial"),
                   data.get("interval"))


class ChebRationalSeries:
    """Coefficients F_0..F_K of an expansion over R_n(x) = T_n((x-1)/(x+1))."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        self.coeffs = np.asarray(coeffs, dtype=np.float64)
        if self.coeffs.ndim != 1 or len(self.coeffs) < 1:
            raise ArgumentError("need at least F_0")
        if not np.all(np.isfinite(self.coeffs)):
            raise ArgumentError("series coefficients must be finite")

    @property
    def order(self):
        return len(self.coeffs) - 1

    def __call__(self, x):
        """Scalar evaluation sum F_n R_n(x) by Clenshaw in y = (x-1)/(x+1)."""
        scalar = np.isscalar(x)
        x = np.atleast_1d(np.asarray(x, dtype=np.float64))
        y = (x - 1.0) / (x + 1.0)
        b1 = np.zeros_like(y)
        b2 = np.zeros_like(y)
        for c in self.coeffs[:0:-1]:
            b1, b2 = 2.0 * y * b1 - b2 + c, b1
        out = y * b1 - b2 + self.coeffs[0]
        return float(out[0]) if scalar else out

    def to_json(self):
        return json.dumps({"coeffs": self.coeffs.tolist()})

    @classmethod
    def from_json(cls, text):
        return cls(json.loads(text)["coeffs"])


def _solve_block(A, rhs, context):
    """Least-squares solve with an explicit consistency check.

    Degenerate fits (the target is already a polynomial, the Taylor data is
    that of a lower-degree rational) leave the block rank-deficient but
    consistent; the minimum-norm solution then picks the representative with
    the smallest denominator, which is the natural normalization. An
    inconsistent block means no rational of this degree matches.
    """
    if A.size == 0:
        return np.zeros(A.shape[1])
    sol, *_ = np.linalg.lstsq(A, rhs, rcond=None)
    scale = max(np.abs(rhs).max(), np.abs(A).max() * max(np.abs(sol).max(), 1.0), 1.0)
    if np.abs(A @ sol - rhs).max() > _CONSISTENCY_RTOL * scale:
        raise RankError(
            f"{context}: linear system is inconsistent; try a lower degree (n, m)"
        )
    return sol


def pade_from_taylor(a, n: int, m: int) -> RationalFilter:
    """Pade approximant of order (n, m) from Taylor coefficients a_0..a_{n+m}.

    Matches the series so that sum_{i<=k} a_i q_{k-i} = p_k for k = 0..n+m
    with q_0 = 1, p_k = 0 for k > n and q_k = 0 for k > m.
    """
    a = np.asarray(a, dtype=np.float64)
    N = n + m
    if len(a) < N + 1:
        raise ArgumentError(f"need {N + 1} Taylor coefficients, got {len(a)}")
    if not np.isfinite(a[0]):
        raise ArgumentError("a_0 must be finite")
    # rows k = n+1..N carry only denominator unknowns
    A = np.zeros((m, m))
    rhs = np.zeros(m)
    for r, k in enumerate(range(n + 1, N + 1)):
        for j in range(1, m + 1):
            if k - j >= 0:
                A[r, j - 1] = a[k - j]
        rhs[r] = -a[k]
    q = np.concatenate([[1.0], _solve_block(A, rhs, "Pade denominator")])
    p = np.array([
        sum(a[k - j] * q[j] for j in range(0, min(k, m) + 1)) for k in range(n + 1)
    ])
    return RationalFilter(p, q, basis="monomial")


def rational_from_cheb_series(a, n: int, m: int, interval=(-1.0, 1.0)) -> RationalFilter:
    """Rational fit in the Chebyshev basis from series coefficients of the target.

    Chooses p, q (q_0 = 1) so the Chebyshev coefficients of
    (sum_j a_j T_j)(sum_k q_k T_k) - sum_k p_k T_k vanish for T_0..T_{n+m},
    using the product rule T_i T_j = (T_{i+j} + T_|i-j|) / 2.
    """
    a = np.asarray(a, dtype=np.float64)
    N = n + m
    if len(a) < N + m + 1:
        raise ArgumentError(f"need a_0..a_{N + m}, got {len(a)} coefficients")
    # C[l, k] = coefficient of T_l in (sum_j a_j T_j) T_k
    C = np.zeros((N + 1, m + 1))
    for k in range(m + 1):
        for j in range(len(a)):
            if a[j] == 0.0:
                continue
            for ell in (j + k, abs(j - k)):
                if ell <= N:
                    C[ell, k] += 0.5 * a[j]
    qtail = _solve_block(C[n + 1:, 1:], -C[n + 1:, 0], "Chebyshev-basis rational")
    q = np.concatenate([[1.0], qtail])
    p = C[: n + 1, :] @ q
    return RationalFilter(p, q, basis="chebyshev", interval=interval)


def cheb_rational_eval(k: int, x):
    """R_k(x) = T_k((x-1)/(x+1)) by the three-term recursion, x >= 0."""
    if k < 0:
        raise ArgumentError("index must be nonnegative")
    scalar = np.isscalar(x)
    x = np.atleast_1d(np.asarray(x, dtype=np.float64))
    if np.any(x < 0):
        raise ArgumentError("Chebyshev rational polynomials live on [0, inf)")
    y = (x - 1.0) / (x + 1.0)
    if k == 0:
        out = np.ones_like(y)
    elif k == 1:
        out = y
    else:
        rm1, r = np.ones_like(y), y.copy()
        for _ in range(k - 1):
            rm1, r = r, 2.0 * y * r - rm1
        out = r
    return float(out[0]) if scalar else out


def cheb_rational_coeffs(f, K: int, quad_points: int | None = None) -> ChebRationalSeries:
    """Expansion coefficients F_n = <f, R_n>_w / ||R_n||_w^2 over the weight
    w(x) = x^{-1/2} (1 + x)^{-1}.

    The substitution y = (x-1)/(x+1) turns the weighted integral into a
    plain Chebyshev-weight integral on [-1, 1], evaluated with M-point
    Gauss-Chebyshev quadrature (M = max(64, 8K)); the normalizations are
    pi for n = 0 and pi/2 for n >= 1.
    """
    if K < 0:
        raise ArgumentError("K must be >= 0")
    M = quad_points or max(64, 8 * K)
    j = np.arange(M)
    y = np.cos(np.pi * (2 * j + 1) / (2 * M))
    x = (1.0 + y) / (1.0 - y)
    fx = np.asarray(f(x), dtype=np.float64)
    if fx.shape != x.shape:
        fx = np.array([f(xi) for xi in x], dtype=np.float64)
    if not np.all(np.isfinite(fx)):
        bad = x[~np.isfinite(fx)][0]
        raise NonFiniteSampleError(f"quadrature sample not finite at x={bad!r}")
    F = np.empty(K + 1)
    F[0] = fx.mean()
    tm1 = np.ones_like(y)
    t = y.copy()
    for nn in range(1, K + 1):
        F[nn] = 2.0 * np.mean(fx * t)
        tm1, t = t, 2.0 * y * t - tm1
    return ChebRationalSeries(F)


def _poly_op_apply(lap, coeffs, f, basis, interval, scale):
    """sum_k c_k B_k(scale * Lop) f for B = monomials (Horner) or Chebyshev."""
    if basis == "monomial":
        out = coeffs[-1] * f
        for c in coeffs[-2::-1]:
            out = scale * lap.op(out) + c * f
        return out
    lo, hi = interval
    halfwidth = (hi - lo) / 2.0
    center = (hi + lo) / 2.0

    def M(v):
        return (scale * lap.op(v) - center * v) / halfwidth

    t_prev = f
    out = coeffs[0] * f
    if len(coeffs) == 1:
        return out
    t_cur = M(f)
    out = out + coeffs[1] * t_cur
    for k in range(2, len(coeffs)):
        t_prev, t_cur = t_cur, 2.0 * M(t_cur) - t_prev
        out = out + coeffs[k] * t_cur
    return out


def apply_rational_filter(lap, f, rf: RationalFilter, scale: float = 1.0,
                          lambda_max: float | None = None, tol: float = 1e-10):
    """g with Q_m(scale * Lop) g = P_n(scale * Lop) f, by matrix-free CG.

    The denominator operator is applied as products only; CG runs in the
    mass inner product, where polynomials of the random-walk Laplacian are
    self-adjoint. Requires Q > 0 on [0, lambda_max * scale].
    """
    f = np.asarray(f, dtype=np.float64)
    if f.shape != (lap.n,):
        raise DimensionError(f"signal length {f.shape} != {lap.n}")
    if lambda_max is not None:
        s = np.linspace(0.0, lambda_max * scale, 1024)
        den = rf._eval_part(rf.q, s)
        if np.any(den <= 0):
            raise DefinitenessError(
                "rational filter denominator must stay positive on the spectrum"
            )
    b = _poly_op_apply(lap, rf.p, f, rf.basis, rf.interval, scale)
    if len(rf.q) == 1:
        return b

    def q_op(v):
        return _poly_op_apply(lap, rf.q, v, rf.basis, rf.interval, scale)

    x, report = cg_solve(q_op, b, tol=tol, inner_weight=lap.mass)
    if not report.converged:
        raise SolverError("denominator solve did not converge", report)
    return x


def apply_cheb_rational_series(lap, f, series: ChebRationalSeries,
                               scale: float = 1.0, solver=None):
    """sum_n F_n R_n(scale * Lop) f through the discrete recursion

        f_{n+1} = 2 (scale L + mass)^{-1} (scale L - mass) f_n - f_{n-1}

    with f_0 = f. The SPD matrix (scale L + mass) is factorized once
    (or fitted with a preconditioned CG beyond the direct-size threshold)
    and reused for every term; pass ``solver`` to share it across calls.
    """
    f = np.asarray(f, dtype=np.float64)
    if f.shape != (lap.n,):
        raise DimensionError(f"signal length {f.shape} != {lap.n}")
    F = series.coeffs
    if solver is None:
        solver = make_solver(lap.solve_matrix(scale))
    out = F[0] * f
    if len(F) == 1:
        return out
    L, mass = lap.L, lap.mass

    def half_step(v, step):
        rhs = scale * spmv(L, v) - mass * v
        try:
            return solver(rhs)
        except SolverError as exc:
            raise SolverError(f"recursion step {step}: {exc}", exc.report) from exc

    f_prev = f
    f_cur = half_step(f, 1)
    out = out + F[1] * f_cur
    for nn in range(2, len(F)):
        f_prev, f_cur = f_cur, 2.0 * half_step(f_cur, nn) - f_prev
        out = out + F[nn] * f_cur
    return out
