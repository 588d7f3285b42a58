"""Chebyshev polynomials of the first kind: evaluation, fast coefficients,
matrix-free filter application.

Coefficients come from the discrete scalar product over Chebyshev nodes,
which is exact for polynomials below the node count and costs one function
sample per node instead of one integral per coefficient.
"""

from __future__ import annotations

import json

import numpy as np

from ._errors import ArgumentError, DimensionError, NonFiniteSampleError

__all__ = [
    "ChebSeries",
    "cheb_eval",
    "cheb_nodes",
    "cheb_coeffs_fast",
    "apply_cheb_filter",
    "chebyshev_value",
]


class ChebSeries:
    """Coefficients a_0..a_{N-1} of sum a_k T_k on an affinely mapped interval."""

    __slots__ = ("coeffs", "interval")

    def __init__(self, coeffs, interval=(-1.0, 1.0)):
        self.coeffs = np.asarray(coeffs, dtype=np.float64)
        if self.coeffs.ndim != 1 or len(self.coeffs) < 1:
            raise ArgumentError("need at least one coefficient")
        lo, hi = float(interval[0]), float(interval[1])
        if hi <= lo:
            raise ArgumentError("interval must have positive length")
        self.interval = (lo, hi)

    @property
    def lambda_max(self):
        return self.interval[1]

    def map_to_unit(self, s):
        lo, hi = self.interval
        return (2.0 * (np.asarray(s, dtype=np.float64) - lo) / (hi - lo)) - 1.0

    def to_json(self):
        lo, hi = self.interval
        if lo != 0.0:
            raise ArgumentError("serialization assumes the [0, lambda_max] domain")
        return json.dumps({"lambda_max": hi, "coeffs": self.coeffs.tolist()})

    @classmethod
    def from_json(cls, text):
        data = json.loads(text)
        return cls(data["coeffs"], (0.0, float(data["lambda_max"])))


def chebyshev_value(n, x):
    """T_n(x) by the three-term recursion, vectorized in x."""
    x = np.asarray(x, dtype=np.float64)
    if n == 0:
        return np.ones_like(x)
    if n == 1:
        return x.copy()
    tm1, t = np.ones_like(x), x.copy()
    for _ in range(n - 1):
        tm1, t = t, 2.0 * x * t - tm1
    return t


def cheb_eval(series: ChebSeries, s):
    """Clenshaw evaluation of the series at s (scalar or array).

    Points outside the interval are evaluated anyway; the recursion is only
    guaranteed stable inside.
    """
    x = series.map_to_unit(s)
    a = series.coeffs
    b1 = np.zeros_like(x)
    b2 = np.zeros_like(x)
    for c in a[:0:-1]:
        b1, b2 = 2.0 * x * b1 - b2 + c, b1
    out = x * b1 - b2 + a[0]
    return float(out) if np.isscalar(s) else out


def cheb_nodes(N: int) -> np.ndarray:
    """x_k = cos(pi (2k+1) / 2N), k = 0..N-1, strictly decreasing."""
    if N < 1:
        raise ArgumentError("N must be >= 1")
    k = np.arange(N)
    return np.cos(np.pi * (2 * k + 1) / (2 * N))


def cheb_coeffs_fast(f, N: int, interval=(-1.0, 1.0)) -> ChebSeries:
    """Chebyshev coefficients of f by the discrete node scalar product.

    a_0 = (1/N) sum f(x_k),  a_i = (2/N) sum f(x_k) T_i(x_k).

    Exact (to roundoff) for any polynomial of degree < N. Cost O(N^2) with
    the recursion below, O(N samples) in f.
    """
    if N < 1:
        raise ArgumentError("N must be >= 1")
    lo, hi = float(interval[0]), float(interval[1])
    x = cheb_nodes(N)
    s = lo + (hi - lo) * (x + 1.0) / 2.0
    fx = np.asarray(f(s), dtype=np.float64)
    if fx.shape != s.shape:
        fx = np.array([f(si) for si in s], dtype=np.float64)
    if not np.all(np.isfinite(fx)):
        bad = s[~np.isfinite(fx)][0]
        raise NonFiniteSampleError(f"filter sample not finite at s={bad}")
    coeffs = np.empty(N)
    coeffs[0] = fx.mean()
    tm1 = np.ones_like(x)
    t = x.copy()
    for i in range(1, N):
        coeffs[i] = 2.0 * np.mean(fx * t)
        tm1, t = t, 2.0 * x * t - tm1
    return ChebSeries(coeffs, (lo, hi))


def apply_cheb_filter(lap, f, series: ChebSeries) -> np.ndarray:
    """sum a_k T_k(M) f with M the operator mapped onto [-1, 1].

    M = (2 / lambda_max) Lop - I for a series on [0, lambda_max]; only
    matrix-vector products are used and two live vectors are kept.
    """
    f = np.asarray(f, dtype=np.float64)
    if f.shape != (lap.n,):
        raise DimensionError(f"signal length {f.shape} != {lap.n}")
    lo, hi = series.interval
    if hi <= 0:
        raise ArgumentError("lambda_max must be positive")
    halfwidth = (hi - lo) / 2.0
    center = (hi + lo) / 2.0

    def M(v):
        return (lap.op(v) - center * v) / halfwidth

    a = series.coeffs
    t_prev = f
    out = a[0] * f
    if len(a) == 1:
        return out
    t_cur = M(f)
    out = out + a[1] * t_cur
    for k in range(2, len(a)):
        t_prev, t_cur = t_cur, 2.0 * M(t_cur) - t_prev
        out = out + a[k] * t_cur
    return out
