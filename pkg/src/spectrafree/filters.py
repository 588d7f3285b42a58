"""Scalar filter functions of the Laplacian spectrum.

A FilterSpec is the single currency all application paths share: the dense
oracle evaluates it at eigenvalues, the Chebyshev path samples it at nodes,
and the rational paths either read its coefficient sets or rebuild it from
analytic structure. Built-in analytic filters:

    identity        1
    commute-time    s^-1        (Laplacian pseudo-inverse)
    biharmonic      s^-2
    inverse:p       s^-p
    diffusion:t     exp(-t s)
    mexican:t       s exp(-t s)

plus explicit polynomial / rational coefficient sets and tabulated filters
with linear interpolation.
"""

from __future__ import annotations

import numpy as np

from ._errors import ArgumentError, ExtrapolationError, ValidationError
from .cheb_filters import ChebSeries, cheb_eval

DENOMINATOR_SAMPLES = 1024


def _poly_eval(coeffs, s, basis, interval):
    s = np.asarray(s, dtype=np.float64)
    if basis == "monomial":
        out = np.zeros_like(s)
        for c in np.asarray(coeffs)[::-1]:
            out = out * s + c
        return out
    if basis == "chebyshev":
        return cheb_eval(ChebSeries(coeffs, interval), s)
    raise ArgumentError(f"unknown basis {basis!r}")


class FilterSpec:
    """Identity of a 1D spectral filter.

    kind is one of 'analytic', 'polynomial', 'rational', 'tabulated'.
    Instances are immutable; evaluation is vectorized over s.
    """

    def __init__(self, kind, *, name=None, t=None, power=None, coeffs=None,
                 p=None, q=None, basis=None, interval=None, grid=None,
                 values=None):
        self.kind = kind
        self.name = name
        self.t = t
        self.power = power
        self.basis = basis
        self.interval = tuple(interval) if interval is not None else None
        self.coeffs = None if coeffs is None else np.asarray(coeffs, np.float64)
        self.p = None if p is None else np.asarray(p, np.float64)
        self.q = None if q is None else np.asarray(q, np.float64)
        self.grid = None if grid is None else np.asarray(grid, np.float64)
        self.values = None if values is None else np.asarray(values, np.float64)
        if kind == "rational":
            if abs(self.q[0] - 1.0) > 1e-12:
                raise ValidationError("rational filter requires q0 = 1")

    # -- constructors ------------------------------------------------------

    @classmethod
    def identity(cls):
        return cls("analytic", name="identity")

    @classmethod
    def commute_time(cls):
        return cls("analytic", name="commute-time", power=1)

    @classmethod
    def biharmonic(cls):
        return cls("analytic", name="biharmonic", power=2)

    @classmethod
    def inverse_power(cls, power):
        power = int(power)
        if power < 1:
            raise ArgumentError("inverse power must be >= 1")
        if power == 1:
            return cls.commute_time()
        if power == 2:
            return cls.biharmonic()
        return cls("analytic", name=f"inverse:{power}", power=power)

    @classmethod
    def diffusion(cls, t):
        if t < 0:
            raise ArgumentError("diffusion scale must be nonnegative")
        return cls("analytic", name=f"diffusion:{t:g}", t=float(t))

    @classmethod
    def mexican(cls, t):
        if t < 0:
            raise ArgumentError("scale must be nonnegative")
        return cls("analytic", name=f"mexican:{t:g}", t=float(t))

    @classmethod
    def polynomial(cls, coeffs, basis="monomial", interval=(0.0, 2.0)):
        return cls("polynomial", name="polynomial", coeffs=coeffs, basis=basis,
                   interval=interval)

    @classmethod
    def rational(cls, p, q, basis="monomial", interval=(0.0, 2.0)):
        return cls("rational", name="rational", p=p, q=q, basis=basis,
                   interval=interval)

    @classmethod
    def tabulated(cls, grid, values, name="tabulated"):
        grid = np.asarray(grid, np.float64)
        if np.any(np.diff(grid) <= 0):
            raise ValidationError("tabulated grid must be strictly increasing")
        return cls("tabulated", name=name, grid=grid, values=values)

    # -- properties --------------------------------------------------------

    @property
    def family(self):
        """Analytic family tag ('diffusion', 'mexican', 'inverse', ...)."""
        if self.kind != "analytic":
            return self.kind
        if self.power is not None:
            return "inverse"
        if self.name == "identity":
            return "identity"
        return self.name.split(":", 1)[0]

    @property
    def singular_at_zero(self):
        if self.kind == "analytic" and self.power is not None:
            return True
        if self.kind == "rational":
            q0 = _poly_eval(self.q, np.array([0.0]), self.basis, self.interval)
            return bool(abs(q0[0]) < 1e-12)
        return False

    # -- evaluation --------------------------------------------------------

    def __call__(self, s):
        scalar = np.isscalar(s)
        s = np.atleast_1d(np.asarray(s, dtype=np.float64))
        if self.kind == "analytic":
            out = self._eval_analytic(s)
        elif self.kind == "polynomial":
            out = _poly_eval(self.coeffs, s, self.basis, self.interval)
        elif self.kind == "rational":
            num = _poly_eval(self.p, s, self.basis, self.interval)
            den = _poly_eval(self.q, s, self.basis, self.interval)
            with np.errstate(divide="ignore", invalid="ignore"):
                out = num / den
        elif self.kind == "tabulated":
            lo, hi = self.grid[0], self.grid[-1]
            if np.any(s < lo - 1e-12) or np.any(s > hi + 1e-12):
                raise ExtrapolationError(
                    f"point outside tabulated range [{lo:g}, {hi:g}]"
                )
            out = np.interp(s, self.grid, self.values)
        else:
            raise ArgumentError(f"unknown filter kind {self.kind!r}")
        return float(out[0]) if scalar else out

    def _eval_analytic(self, s):
        if self.name == "identity":
            return np.ones_like(s)
        if self.power is not None:
            with np.errstate(divide="ignore"):
                return s ** (-float(self.power))
        if self.family == "diffusion":
            return np.exp(-self.t * s)
        if self.family == "mexican":
            return s * np.exp(-self.t * s)
        raise ArgumentError(f"unknown analytic filter {self.name!r}")

    def validate_denominator(self, lambda_max):
        """Rational filters must keep Q strictly positive on [0, lambda_max];
        checked by dense sampling at 1024 points."""
        if self.kind != "rational":
            return
        s = np.linspace(0.0, lambda_max, DENOMINATOR_SAMPLES)
        den = _poly_eval(self.q, s, self.basis, self.interval)
        if np.any(den <= 0):
            raise ValidationError(
                "rational filter denominator is not strictly positive on "
                f"[0, {lambda_max:g}]"
            )

    def __repr__(self):
        return f"FilterSpec({self.name})"


def parse_filter(text) -> FilterSpec:
    """Parse a CLI filter spec NAME[:params]."""
    name, _, params = text.partition(":")
    name = name.strip().lower()
    if name == "identity":
        return FilterSpec.identity()
    if name in ("commute-time", "commute_time", "harmonic"):
        return FilterSpec.commute_time()
    if name in ("biharmonic", "bi-harmonic"):
        return FilterSpec.biharmonic()
    if name == "inverse":
        return FilterSpec.inverse_power(int(params or 1))
    if name in ("diffusion", "heat"):
        return FilterSpec.diffusion(float(params or 0.1))
    if name == "mexican":
        return FilterSpec.mexican(float(params or 0.1))
    if name == "custom-rational":
        if not params:
            raise ArgumentError("custom-rational needs a JSON file path")
        from .rational_filters import RationalFilter

        with open(params, "r", encoding="utf-8") as fh:
            return RationalFilter.from_json(fh.read()).as_filter_spec()
    raise ArgumentError(f"unknown filter {text!r}")
