import numpy as np
import pytest

from spectrafree import (
    FilterSpec,
    SizeCapError,
    apply_filter_truncated,
    convolution,
    dense_eigen,
    fourier_based_filter,
    laplacian,
    spectral_distance,
    spectral_kernel_matrix,
    spectral_wavelet,
)
from spectrafree._errors import ExtrapolationError, SingularFilterError

from conftest import random_lap


def k2_closed_form_diffusion(t):
    # exp(-t L) delta_0 on K2: ((1 + e^{-2t})/2, (1 - e^{-2t})/2)
    return np.array([(1 + np.exp(-2 * t)) / 2, (1 - np.exp(-2 * t)) / 2])


# ---------------------------------------------------------------------------
# dense_eigen
# ---------------------------------------------------------------------------


def test_k2_eigensystem(k2):
    es = dense_eigen(laplacian(k2, "combinatorial"))
    assert np.allclose(es.eigenvalues, [0.0, 2.0], atol=1e-12)
    r = 1 / np.sqrt(2)
    for col, target in zip(es.eigenvectors.T, ([r, r], [r, -r])):
        assert np.allclose(col, target, atol=1e-10) or np.allclose(-col, target, atol=1e-10)


def test_p3_eigenvalues(p3):
    es = dense_eigen(laplacian(p3, "combinatorial"))
    assert np.allclose(es.eigenvalues, [0, 1, 3], atol=1e-10)


def test_mass_orthonormality_random_walk():
    for s in range(4):
        _, lap = random_lap(20, kind="random-walk", seed=s)
        es = dense_eigen(lap)
        gram = es.eigenvectors.T @ (es.mass[:, None] * es.eigenvectors)
        assert np.max(np.abs(gram - np.eye(20))) <= 1e-8
        # L X = mass X Lambda
        lhs = lap.L.to_dense() @ es.eigenvectors
        rhs = es.mass[:, None] * es.eigenvectors * es.eigenvalues[None, :]
        assert np.max(np.abs(lhs - rhs)) <= 1e-8 * max(np.abs(lap.L.values).max(), 1)


def test_dense_cap():
    _, lap = random_lap(12, seed=0)
    with pytest.raises(SizeCapError):
        dense_eigen(lap, cap=10)


# ---------------------------------------------------------------------------
# apply_filter_truncated
# ---------------------------------------------------------------------------


def test_identity_filter_reproduces_signal():
    for s in range(3):
        _, lap = random_lap(15, seed=s)
        es = dense_eigen(lap)
        f = np.random.default_rng(s).standard_normal(15)
        out = apply_filter_truncated(es, f, FilterSpec.identity())
        assert np.max(np.abs(out - f)) <= 1e-8


def test_diffusion_k2_closed_form(k2):
    es = dense_eigen(laplacian(k2, "combinatorial"))
    delta = np.array([1.0, 0.0])
    out = apply_filter_truncated(es, delta, FilterSpec.diffusion(0.5))
    assert np.allclose(out, k2_closed_form_diffusion(0.5), atol=1e-10)
    assert np.allclose(out, [0.6839397, 0.3160603], atol=1e-7)


def test_commute_time_k2(k2):
    es = dense_eigen(laplacian(k2, "combinatorial"))
    out = apply_filter_truncated(es, np.array([1.0, 0.0]), FilterSpec.commute_time())
    assert np.allclose(out, [0.25, -0.25], atol=1e-12)


def test_singular_filter_error(k2):
    es = dense_eigen(laplacian(k2, "combinatorial"))
    bad = FilterSpec.tabulated([-1.0, 3.0], [1.0, np.inf], name="bad")
    with pytest.raises(SingularFilterError):
        apply_filter_truncated(es, np.ones(2), bad)


# ---------------------------------------------------------------------------
# spectral_kernel_matrix / wavelets / distances
# ---------------------------------------------------------------------------


def test_kernel_identity_filter(p3):
    es = dense_eigen(laplacian(p3, "combinatorial"))
    K = spectral_kernel_matrix(es, FilterSpec.identity())
    assert np.max(np.abs(K - np.eye(3))) <= 1e-8


def test_kernel_diffusion_k2(k2):
    es = dense_eigen(laplacian(k2, "combinatorial"))
    K = spectral_kernel_matrix(es, FilterSpec.diffusion(0.5))
    assert np.allclose(K, [[0.6839, 0.3161], [0.3161, 0.6839]], atol=5e-5)


def test_kernel_zero_filter(p3):
    es = dense_eigen(laplacian(p3, "combinatorial"))
    K = spectral_kernel_matrix(es, FilterSpec.polynomial([0.0]))
    assert np.max(np.abs(K)) == 0.0


def test_kernel_mass_adjoint_random_walk():
    _, lap = random_lap(14, kind="random-walk", seed=1)
    es = dense_eigen(lap)
    K = spectral_kernel_matrix(es, FilterSpec.diffusion(0.3))
    rng = np.random.default_rng(0)
    for _ in range(5):
        f, g = rng.standard_normal((2, 14))
        lhs = (K @ f) @ (es.mass * g)
        rhs = f @ (es.mass * (K @ g))
        assert abs(lhs - rhs) <= 1e-8 * max(abs(lhs), 1.0)


def test_wavelet_equals_kernel_column(p3):
    es = dense_eigen(laplacian(p3, "combinatorial"))
    filt = FilterSpec.diffusion(0.2)
    K = spectral_kernel_matrix(es, filt)
    for p in range(3):
        assert np.allclose(spectral_wavelet(es, filt, p), K[:, p], atol=1e-10)


def test_wavelet_kernel_column_mass_scaling():
    _, lap = random_lap(12, kind="random-walk", seed=4)
    es = dense_eigen(lap)
    filt = FilterSpec.diffusion(0.2)
    K = spectral_kernel_matrix(es, filt)
    for p in (0, 5):
        assert np.allclose(spectral_wavelet(es, filt, p) * es.mass[p], K[:, p],
                           atol=1e-10)


def test_wavelet_large_time_constant(k2):
    es = dense_eigen(laplacian(k2, "combinatorial"))
    out = spectral_wavelet(es, FilterSpec.diffusion(50.0), 0)
    assert np.allclose(out, [0.5, 0.5], atol=1e-12)


def test_wavelet_k2_diffusion(k2):
    es = dense_eigen(laplacian(k2, "combinatorial"))
    out = spectral_wavelet(es, FilterSpec.diffusion(0.5), 0)
    assert np.allclose(out, [0.6839, 0.3161], atol=5e-5)


def test_distance_self_zero(p3):
    es = dense_eigen(laplacian(p3, "combinatorial"))
    assert spectral_distance(es, FilterSpec.commute_time(), 1, 1) == 0.0


def test_distance_k2_commute_time(k2):
    es = dense_eigen(laplacian(k2, "combinatorial"))
    d = spectral_distance(es, FilterSpec.commute_time(), 0, 1)
    assert d == pytest.approx(np.sqrt(0.5), abs=1e-12)


def test_distance_filter_scaling(p3):
    es = dense_eigen(laplacian(p3, "combinatorial"))
    base = FilterSpec.polynomial([0.0, 1.0])
    scaled = FilterSpec.polynomial([0.0, 2.5])
    d1 = spectral_distance(es, base, 0, 2)
    d2 = spectral_distance(es, scaled, 0, 2)
    assert d2 == pytest.approx(2.5 * d1, rel=1e-12)


def test_distance_symmetric():
    _, lap = random_lap(16, seed=6)
    es = dense_eigen(lap)
    filt = FilterSpec.biharmonic()
    assert spectral_distance(es, filt, 2, 9) == pytest.approx(
        spectral_distance(es, filt, 9, 2), rel=1e-12)


# ---------------------------------------------------------------------------
# convolution
# ---------------------------------------------------------------------------


def test_convolution_with_all_ones_coefficients():
    _, lap = random_lap(12, seed=2)
    es = dense_eigen(lap)
    g = es.eigenvectors.sum(axis=1)  # all spectral coefficients equal 1
    f = np.random.default_rng(1).standard_normal(12)
    assert np.max(np.abs(convolution(es, f, g) - f)) <= 1e-8


def test_convolution_orthogonal_eigenvectors():
    _, lap = random_lap(10, seed=3)
    es = dense_eigen(lap)
    x1, x2 = es.eigenvectors[:, 1], es.eigenvectors[:, 2]
    assert np.max(np.abs(convolution(es, x1, x2))) <= 1e-10


def test_convolution_diagonal_action():
    _, lap = random_lap(10, seed=4)
    es = dense_eigen(lap)
    c = 1.7
    x2 = es.eigenvectors[:, 2]
    out = convolution(es, c * x2, c * x2)
    assert np.allclose(out, c**2 * x2, atol=1e-10)


def test_convolution_commutative_bilinear():
    _, lap = random_lap(14, seed=5)
    es = dense_eigen(lap)
    rng = np.random.default_rng(2)
    for _ in range(10):
        f, g, h = rng.standard_normal((3, 14))
        a, b = rng.standard_normal(2)
        assert np.max(np.abs(convolution(es, f, g) - convolution(es, g, f))) <= 1e-10
        lhs = convolution(es, a * f + b * h, g)
        rhs = a * convolution(es, f, g) + b * convolution(es, h, g)
        assert np.max(np.abs(lhs - rhs)) <= 1e-10 * max(1, np.max(np.abs(rhs)))


# ---------------------------------------------------------------------------
# fourier-based filters
# ---------------------------------------------------------------------------


def fourier_grid(M=4096, half=8.0):
    ds = 2 * half / M
    return (np.arange(M) - M / 2) * ds


def test_even_filter_has_real_transform(p3):
    es = dense_eigen(laplacian(p3, "combinatorial"))
    s = fourier_grid()
    gauss = np.exp(-(s**2) / 2)
    imag = fourier_based_filter(es, s, gauss, part="imaginary")
    assert np.max(np.abs(imag.values)) <= 1e-10
    real = fourier_based_filter(es, s, gauss, part="real")
    # oracle: analytic transform of the Gaussian is sqrt(2 pi) exp(-w^2 / 2)
    w = real.grid
    sel = np.abs(w) <= 6.0
    assert np.max(np.abs(real.values[sel] - np.sqrt(2 * np.pi) * np.exp(-w[sel]**2 / 2))) <= 1e-10


def test_impulse_flat_magnitude(p3):
    es = dense_eigen(laplacian(p3, "combinatorial"))
    s = fourier_grid(1024, 4.0)
    spike = np.zeros_like(s)
    spike[len(s) // 2] = 1.0
    re = fourier_based_filter(es, s, spike, part="real")
    im = fourier_based_filter(es, s, spike, part="imaginary")
    mag = np.hypot(re.values, im.values)
    assert np.max(mag) - np.min(mag) <= 1e-12


def test_parseval_grid_bound():
    _, lap = random_lap(12, seed=8)
    es = dense_eigen(lap)
    s = fourier_grid()
    gauss = np.exp(-(s**2) / 2)
    re = fourier_based_filter(es, s, gauss, part="real")
    im = fourier_based_filter(es, s, gauss, part="imaginary")
    at_eigs = re(es.eigenvalues) ** 2 + im(es.eigenvalues) ** 2
    grid_norm = np.sum(re.values**2 + im.values**2)
    assert np.sum(at_eigs) <= grid_norm


def test_eigenvalue_outside_range_raises(p3):
    es = dense_eigen(laplacian(p3, "combinatorial"))
    # coarse spacing keeps the max FFT frequency below lambda_max = 3
    s = (np.arange(16) - 8) * 1.5
    with pytest.raises(ExtrapolationError):
        fourier_based_filter(es, s, np.exp(-(s**2)), part="real")


# ---------------------------------------------------------------------------
# invariants: norm and filter-difference bounds
# ---------------------------------------------------------------------------


FILTER_ZOO = [
    FilterSpec.identity(),
    FilterSpec.diffusion(0.01),
    FilterSpec.diffusion(0.5),
    FilterSpec.mexican(0.2),
    FilterSpec.commute_time(),
    FilterSpec.biharmonic(),
    FilterSpec.polynomial([0.3, -0.2, 0.05]),
]


def test_norm_bound():
    rng = np.random.default_rng(11)
    for s in range(4):
        _, lap = random_lap(16, kind="combinatorial", seed=30 + s)
        es = dense_eigen(lap)
        for filt in FILTER_ZOO:
            vals = es.filter_values(filt)
            for _ in range(5):
                f = rng.standard_normal(16)
                out = apply_filter_truncated(es, f, filt)
                lhs = np.sqrt(out @ (es.mass * out))
                rhs = np.max(np.abs(vals)) * np.sqrt(f @ (es.mass * f))
                assert lhs <= rhs + 1e-8


def test_filter_difference_exact_expansion():
    for s in range(3):
        _, lap = random_lap(14, kind="random-walk", seed=40 + s)
        es = dense_eigen(lap)
        f1, f2 = FilterSpec.diffusion(0.1), FilterSpec.diffusion(0.7)
        v1, v2 = es.filter_values(f1), es.filter_values(f2)
        for p in (0, 7):
            w1 = spectral_wavelet(es, f1, p)
            w2 = spectral_wavelet(es, f2, p)
            diff = w1 - w2
            lhs = diff @ (es.mass * diff)
            rhs = np.sum((v1 - v2) ** 2 * es.eigenvectors[p, :] ** 2)
            assert lhs == pytest.approx(rhs, rel=1e-10, abs=1e-12)


def test_eigensystem_csv_export(tmp_path, p3):
    es = dense_eigen(laplacian(p3, "combinatorial"))
    values_path = tmp_path / "vals.csv"
    vectors_path = tmp_path / "vecs.csv"
    es.to_csv(values_path, vectors_path)
    vals = np.genfromtxt(values_path, delimiter=",", names=True)
    assert np.allclose(vals["eigenvalue"], es.eigenvalues, atol=1e-12)
    vecs = np.genfromtxt(vectors_path, delimiter=",", skip_header=1)
    assert np.allclose(vecs, es.eigenvectors, atol=1e-12)


def test_default_fourier_grid_contract():
    from spectrafree import default_fourier_grid

    grid = default_fourier_grid(2.0)
    assert len(grid) == 4096
    assert grid[len(grid) // 2] == 0.0
    assert grid[0] == -16.0
    step = np.diff(grid)
    assert np.allclose(step, step[0])


def test_kernel_composition():
    for s in range(3):
        _, lap = random_lap(12, seed=50 + s)
        es = dense_eigen(lap)
        f1, f2 = FilterSpec.diffusion(0.2), FilterSpec.polynomial([1.0, 0.5])
        K1 = spectral_kernel_matrix(es, f1)
        K2 = spectral_kernel_matrix(es, f2)
        v12 = es.filter_values(f1) * es.filter_values(f2)
        K12 = (es.eigenvectors * v12) @ (es.eigenvectors.T * es.mass[None, :])
        assert np.max(np.abs(K1 @ K2 - K12)) <= 1e-8
