"""Dense-eigendecomposition ground truth for desk-scale graphs.

Solves the generalized problem L X = mass X Lambda with X' diag(mass) X = I
and evaluates spectral operators exactly (up to truncation) so that every
spectrum-free path in the package has an oracle to be checked against.

The generalized problem is reduced to a symmetric one on the
mass^{1/2}-transformed matrix, which preserves the mass-orthonormality of
the back-transformed eigenvectors to machine precision.
"""

from __future__ import annotations

import numpy as np

from ._errors import (
    ArgumentError,
    DimensionError,
    ExtrapolationError,
    SingularFilterError,
    SizeCapError,
)
from .filters import FilterSpec

DENSE_EIGEN_CAP = 2000

# eigenvalues below this (relative to lambda_max) count as zero when a
# filter has a pole at the origin: the pseudo-inverse convention
ZERO_EIG_REL = 1e-9


class EigenSystem:
    """Ascending generalized eigenpairs of (L, mass)."""

    __slots__ = ("eigenvalues", "eigenvectors", "mass")

    def __init__(self, eigenvalues, eigenvectors, mass):
        self.eigenvalues = np.asarray(eigenvalues, dtype=np.float64)
        self.eigenvectors = np.asarray(eigenvectors, dtype=np.float64)
        self.mass = np.asarray(mass, dtype=np.float64)

    @property
    def n(self):
        return len(self.eigenvalues)

    def coefficients(self, f) -> np.ndarray:
        """Mass-weighted Fourier coefficients <f, x_n>_mass."""
        return self.eigenvectors.T @ (self.mass * np.asarray(f, np.float64))

    def zero_modes(self) -> np.ndarray:
        """Boolean mask of eigenvalues treated as zero."""
        scale = max(float(self.eigenvalues[-1]), 1.0)
        return self.eigenvalues <= ZERO_EIG_REL * scale

    def filter_values(self, filt: FilterSpec, skip_zero=None) -> np.ndarray:
        """phi(lambda_n) with the pseudo-inverse convention for singular
        filters; raises if the filter is non-finite at a retained eigenvalue."""
        if skip_zero is None:
            skip_zero = filt.singular_at_zero
        lam = self.eigenvalues
        vals = np.zeros_like(lam)
        keep = ~self.zero_modes() if skip_zero else np.ones(self.n, dtype=bool)
        vals[keep] = filt(lam[keep])
        if not np.all(np.isfinite(vals[keep])):
            bad = lam[keep][~np.isfinite(vals[keep])][0]
            raise SingularFilterError(f"filter singular at eigenvalue {bad!r}")
        return vals

    def to_csv(self, values_path, vectors_path):
        np.savetxt(values_path, self.eigenvalues.reshape(-1, 1),
                   delimiter=",", header="eigenvalue", comments="")
        np.savetxt(vectors_path, self.eigenvectors, delimiter=",",
                   header=",".join(f"x{i}" for i in range(self.n)), comments="")


def dense_eigen(lap, cap: int = DENSE_EIGEN_CAP) -> EigenSystem:
    """Full generalized eigendecomposition of a Laplacian pair."""
    n = lap.n
    if n > cap:
        raise SizeCapError(
            f"n={n} exceeds the dense cap {cap}; use a spectrum-free method"
        )
    L = lap.L.to_dense()
    m = lap.mass
    if np.allclose(m, 1.0):
        lam, X = np.linalg.eigh(L)
    else:
        rs = 1.0 / np.sqrt(m)
        C = (rs[:, None] * L) * rs[None, :]
        C = 0.5 * (C + C.T)
        lam, U = np.linalg.eigh(C)
        X = rs[:, None] * U
    return EigenSystem(lam, X, m)


def apply_filter_truncated(es: EigenSystem, f, filt: FilterSpec, k=None):
    """sum_{n <= k} phi(lambda_n) <f, x_n>_mass x_n (ascending eigenvalues)."""
    f = np.asarray(f, dtype=np.float64)
    if f.shape != (es.n,):
        raise DimensionError(f"signal length {f.shape} != {es.n}")
    if k is None:
        k = es.n
    if not (1 <= k <= es.n):
        raise ArgumentError(f"k={k} outside 1..{es.n}")
    vals = es.filter_values(filt)[:k]
    coeff = es.coefficients(f)[:k]
    return es.eigenvectors[:, :k] @ (vals * coeff)


def spectral_kernel_matrix(es: EigenSystem, filt: FilterSpec) -> np.ndarray:
    """K_phi = X phi(Lambda) X' diag(mass), the mass-adjoint filtered kernel."""
    vals = es.filter_values(filt)
    return (es.eigenvectors * vals) @ (es.eigenvectors.T * es.mass[None, :])


def convolution(es: EigenSystem, f, g) -> np.ndarray:
    """Signal whose spectral coefficients are the products of those of f, g."""
    f = np.asarray(f, dtype=np.float64)
    g = np.asarray(g, dtype=np.float64)
    if f.shape != (es.n,) or g.shape != (es.n,):
        raise DimensionError("both signals must have length n")
    return es.eigenvectors @ (es.coefficients(f) * es.coefficients(g))


def spectral_wavelet(es: EigenSystem, filt: FilterSpec, p: int) -> np.ndarray:
    """Wavelet centred at node p: sum phi(lambda_n) x_n(p) x_n.

    Equals column p of the spectral kernel matrix divided by mass[p]; for
    unit mass they coincide.
    """
    if not (0 <= p < es.n):
        raise ArgumentError(f"node {p} out of range")
    vals = es.filter_values(filt)
    return es.eigenvectors @ (vals * es.eigenvectors[p, :])


def spectral_distance(es: EigenSystem, filt: FilterSpec, p: int, q: int) -> float:
    """d(p, q) with d^2 = sum phi(lambda_n)^2 |x_n(p) - x_n(q)|^2."""
    if not (0 <= p < es.n and 0 <= q < es.n):
        raise ArgumentError("node index out of range")
    vals = es.filter_values(filt)
    diff = es.eigenvectors[p, :] - es.eigenvectors[q, :]
    return float(np.sqrt(np.sum((vals * diff) ** 2)))


def default_fourier_grid(scale: float = 1.0, samples: int = 4096) -> np.ndarray:
    """Uniform grid of 4096 samples over [-8 scale, 8 scale), centred on 0;
    dense enough that linear interpolation of hat(phi) stays below 1e-6 for
    smooth filters."""
    step = 16.0 * scale / samples
    return (np.arange(samples) - samples / 2) * step


def fourier_based_filter(es: EigenSystem, grid, values, part="real") -> FilterSpec:
    """Tabulated filter built from the continuous Fourier transform of a
    sampled filter, hat(phi)(w) = int phi(s) exp(-i s w) ds, computed with
    the FFT.

    The sample grid must be uniform, centred on 0 and a power of two long.
    Returns the real or imaginary part of hat(phi) tabulated over the FFT
    frequency grid; evaluation at eigenvalues is linear interpolation.
    """
    grid = np.asarray(grid, dtype=np.float64)
    values = np.asarray(values, dtype=np.float64)
    M = len(grid)
    if M < 2 or (M & (M - 1)) != 0:
        raise ArgumentError("grid length must be a power of two")
    if grid.shape != values.shape:
        raise DimensionError("grid and samples must have equal length")
    ds = grid[1] - grid[0]
    if not np.allclose(np.diff(grid), ds, rtol=1e-10, atol=1e-12):
        raise ArgumentError("grid must be uniform")
    if abs(grid[0] + grid[-1]) > ds * (1 + 1e-9):
        raise ArgumentError("grid must be symmetric about 0")
    if part not in ("real", "imaginary"):
        raise ArgumentError("part must be 'real' or 'imaginary'")
    omega = 2.0 * np.pi * np.fft.fftfreq(M, d=ds)
    phase = np.exp(-1j * omega * grid[0])
    fhat = ds * phase * np.fft.fft(values)
    order = np.argsort(omega)
    omega, fhat = omega[order], fhat[order]
    lam_hi = float(np.max(np.abs(es.eigenvalues)))
    if lam_hi > omega[-1]:
        raise ExtrapolationError(
            f"eigenvalue {lam_hi:g} outside tabulated frequency range "
            f"[{omega[0]:g}, {omega[-1]:g}]"
        )
    comp = fhat.real if part == "real" else fhat.imag
    return FilterSpec.tabulated(omega, comp, name=f"fourier-{part}")
