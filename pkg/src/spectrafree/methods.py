"""Uniform dispatch between the dense oracle and the spectrum-free paths.

A MethodEngine binds one Laplacian pair and caches everything reusable:
the dense eigensystem (oracle), the mapping bound, Chebyshev series, Pade
filters, Chebyshev-rational series and prefactorized solvers, so that
evaluating many kernel columns or comparing methods stays cheap.

Method grammar (CLI --method):

    oracle              dense eigendecomposition, exact up to roundoff
    truncated:K         oracle truncated to the K lowest eigenpairs
    cheb:N              degree-N Chebyshev polynomial of the operator
    pade:R              rational (R, R) filter, one CG solve
    cheb-rational:K     K-term Chebyshev-rational recursion, one
                        prefactorized SPD solve per term

Analytic filters with a pole at the origin (s^-p) are handled exactly:
they already are rational filters, so every spectrum-free method applies
the Laplacian pseudo-inverse p times through mass-orthogonal deflation of
the constant mode and a grounded CG solve. Scale-bearing filters are
normalized (the exponential is expanded once, the operator is scaled by t),
and s exp(-ts) is applied as the operator times the diffusion result.
"""

from __future__ import annotations

from math import factorial

import numpy as np

from ._errors import ArgumentError, SolverError, ValidationError
from .cheb_filters import apply_cheb_filter, cheb_coeffs_fast
from .filters import FilterSpec
from .graph_core import is_connected
from .rational_filters import (
    RationalFilter,
    apply_cheb_rational_series,
    apply_rational_filter,
    cheb_rational_coeffs,
    pade_from_taylor,
)
from .sparse_linalg import cg_solve, make_solver
from .spectral_oracle import apply_filter_truncated, dense_eigen
from .spectrum_tools import mapping_lambda_max

DEFAULT_CHEB_DEGREE = 50
DEFAULT_PADE_DEGREE = 7
DEFAULT_CRS_TERMS = 20


def parse_method(text):
    """'pade:7' -> ('pade', 7); defaults fill missing parameters."""
    name, _, param = text.partition(":")
    name = name.strip().lower()
    if name == "oracle":
        return ("oracle", None)
    if name == "truncated":
        if not param:
            raise ArgumentError("truncated needs an eigenpair count, e.g. truncated:100")
        return ("truncated", int(param))
    if name == "cheb":
        return ("cheb", int(param or DEFAULT_CHEB_DEGREE))
    if name == "pade":
        return ("pade", int(param or DEFAULT_PADE_DEGREE))
    if name in ("cheb-rational", "cheb_rational"):
        return ("cheb-rational", int(param or DEFAULT_CRS_TERMS))
    raise ArgumentError(f"unknown method {text!r}")


def exp_taylor_coefficients(order):
    return np.array([(-1.0) ** k / factorial(k) for k in range(order + 1)])


class MethodEngine:
    """Filter application with per-graph caching of reusable state."""

    def __init__(self, lap, graph=None, tol=1e-10, oracle_cap=2000):
        self.lap = lap
        self.graph = graph
        self.tol = tol
        self.oracle_cap = oracle_cap
        self._es = None
        self._lam = None
        self._cheb_series = {}
        self._pade_exp = {}
        self._crs_exp = {}
        self._crs_general = {}
        self._solvers = {}
        self.solve_log = []

    # -- cached state ------------------------------------------------------

    def eigensystem(self):
        if self._es is None:
            self._es = dense_eigen(self.lap, cap=self.oracle_cap)
        return self._es

    def lambda_mapping(self):
        if self._lam is None:
            self._lam = mapping_lambda_max(self.lap)
        return self._lam

    def solver(self, scale):
        key = float(scale)
        if key not in self._solvers:
            self._solvers[key] = make_solver(self.lap.solve_matrix(key), tol=self.tol)
        return self._solvers[key]

    def pade_exp(self, r):
        if r not in self._pade_exp:
            self._pade_exp[r] = pade_from_taylor(exp_taylor_coefficients(2 * r), r, r)
        return self._pade_exp[r]

    def crs_exp(self, K):
        if K not in self._crs_exp:
            self._crs_exp[K] = cheb_rational_coeffs(lambda th: np.exp(-th), K)
        return self._crs_exp[K]

    # -- building blocks ---------------------------------------------------

    def deflate_constant(self, f):
        x0 = self.lap.constant_mode()
        return f - x0 * self.lap.weighted_dot(x0, f)

    def apply_inverse_power(self, f, power):
        """Pseudo-inverse powers (s^-p filters) without eigenpairs: deflate
        the constant mode, then solve the grounded operator p times."""
        if self.graph is not None and not is_connected(self.graph):
            raise ValidationError(
                "inverse-power filters need a connected graph (1-dim kernel)"
            )
        lap = self.lap
        x0 = lap.constant_mode()

        def grounded(v):
            return lap.op(v) + x0 * lap.weighted_dot(x0, v)

        diag = lap.L.diag() / lap.mass
        g = f - x0 * lap.weighted_dot(x0, f)
        for _ in range(int(power)):
            g, report = cg_solve(grounded, g, tol=self.tol,
                                 inner_weight=lap.mass, precond=diag)
            self.solve_log.append(report.as_dict())
            if not report.converged:
                raise SolverError("pseudo-inverse solve did not converge "
                                  "(is the graph connected?)", report)
            g -= x0 * lap.weighted_dot(x0, g)
        return g

    def _cheb(self, f, filt: FilterSpec, N):
        key = (filt.name, N)
        if key not in self._cheb_series:
            lam = self.lambda_mapping()
            self._cheb_series[key] = cheb_coeffs_fast(filt, N, (0.0, lam))
        fin = self.deflate_constant(f) if filt.singular_at_zero else f
        return apply_cheb_filter(self.lap, fin, self._cheb_series[key])

    def _pade(self, f, filt: FilterSpec, r):
        fam = filt.family
        if fam == "identity":
            return np.array(f, dtype=np.float64, copy=True)
        if fam == "inverse":
            return self.apply_inverse_power(f, filt.power)
        if fam == "diffusion":
            rf = self.pade_exp(r)
            return apply_rational_filter(self.lap, f, rf, scale=filt.t,
                                         lambda_max=self.lambda_mapping(),
                                         tol=self.tol)
        if fam == "mexican":
            return self.lap.op(self._pade(f, FilterSpec.diffusion(filt.t), r))
        if filt.kind == "polynomial":
            rf = RationalFilter(filt.coeffs, [1.0]) if filt.basis == "monomial" \
                else RationalFilter(filt.coeffs, [1.0], "chebyshev", filt.interval)
            return apply_rational_filter(self.lap, f, rf, tol=self.tol)
        if filt.kind == "rational":
            rf = RationalFilter(filt.p, filt.q, filt.basis, filt.interval)
            return apply_rational_filter(self.lap, f, rf,
                                         lambda_max=self.lambda_mapping(),
                                         tol=self.tol)
        raise ArgumentError(f"filter {filt.name!r} has no Pade path; use the oracle")

    def _cheb_rational(self, f, filt: FilterSpec, K):
        fam = filt.family
        if fam == "identity":
            return np.array(f, dtype=np.float64, copy=True)
        if fam == "inverse":
            return self.apply_inverse_power(f, filt.power)
        if fam == "diffusion":
            series = self.crs_exp(K)
            return apply_cheb_rational_series(self.lap, f, series, scale=filt.t,
                                              solver=self.solver(filt.t))
        if fam == "mexican":
            return self.lap.op(self._cheb_rational(f, FilterSpec.diffusion(filt.t), K))
        if filt.kind == "rational":
            rf = RationalFilter(filt.p, filt.q, filt.basis, filt.interval)
            return apply_rational_filter(self.lap, f, rf,
                                         lambda_max=self.lambda_mapping(),
                                         tol=self.tol)
        if filt.kind == "polynomial":
            return self._pade(f, filt, 0)
        key = (filt.name, K)
        if key not in self._crs_general:
            self._crs_general[key] = cheb_rational_coeffs(filt, K)
        return apply_cheb_rational_series(self.lap, f, self._crs_general[key],
                                          scale=1.0, solver=self.solver(1.0))

    # -- public surface ----------------------------------------------------

    def apply(self, f, filt: FilterSpec, method="oracle"):
        """phi(Lop) f through the chosen method."""
        f = np.asarray(f, dtype=np.float64)
        name, param = parse_method(method) if isinstance(method, str) else method
        if name == "oracle":
            return apply_filter_truncated(self.eigensystem(), f, filt)
        if name == "truncated":
            return apply_filter_truncated(self.eigensystem(), f, filt, k=param)
        if name == "cheb":
            return self._cheb(f, filt, param)
        if name == "pade":
            return self._pade(f, filt, param)
        if name == "cheb-rational":
            return self._cheb_rational(f, filt, param)
        raise ArgumentError(f"unknown method {name!r}")

    def kernel_column(self, p, filt: FilterSpec, method="oracle"):
        """Kernel column K_phi delta_p (equals the wavelet at p for unit mass)."""
        delta = np.zeros(self.lap.n)
        delta[int(p)] = 1.0
        return self.apply(delta, filt, method)

    def distance(self, p, q, filt: FilterSpec, method="oracle"):
        """Spectral distance between nodes p and q: the mass norm of the
        filtered difference of mass-normalized deltas."""
        v = np.zeros(self.lap.n)
        v[int(p)] += 1.0
        v[int(q)] -= 1.0
        v /= self.lap.mass
        w = self.apply(v, filt, method)
        return float(np.sqrt(max(self.lap.weighted_dot(w, w), 0.0)))
