import numpy as np
import pytest

from spectrafree import FilterSpec, dense_eigen, laplacian, spectral_distance
from spectrafree._errors import ArgumentError, ValidationError
from spectrafree.methods import MethodEngine, exp_taylor_coefficients, parse_method

from conftest import random_lap


def test_parse_method():
    assert parse_method("oracle") == ("oracle", None)
    assert parse_method("cheb:30") == ("cheb", 30)
    assert parse_method("pade:5") == ("pade", 5)
    assert parse_method("cheb-rational:12") == ("cheb-rational", 12)
    assert parse_method("truncated:100") == ("truncated", 100)
    with pytest.raises(ArgumentError):
        parse_method("magic:3")


def test_exp_taylor():
    a = exp_taylor_coefficients(4)
    assert np.allclose(a, [1, -1, 0.5, -1 / 6, 1 / 24])


def test_identity_filter_all_methods(p5):
    lap = laplacian(p5, "random-walk")
    engine = MethodEngine(lap, p5)
    f = np.arange(5, dtype=float)
    for m in ("oracle", "cheb:20", "pade:5", "cheb-rational:10"):
        assert np.allclose(engine.apply(f, FilterSpec.identity(), m), f, atol=1e-8)


def test_diffusion_methods_agree_with_oracle():
    rng = np.random.default_rng(0)
    for kind in ("combinatorial", "random-walk", "symmetric-normalized"):
        g, lap = random_lap(24, kind=kind, seed=1)
        engine = MethodEngine(lap, g)
        f = rng.standard_normal(24)
        t = 0.2 if kind == "combinatorial" else 0.8
        filt = FilterSpec.diffusion(t)
        ref = engine.apply(f, filt, "oracle")
        for m, tol in (("cheb:60", 1e-8), ("pade:7", 1e-6), ("cheb-rational:20", 1e-4)):
            err = np.linalg.norm(engine.apply(f, filt, m) - ref) / np.linalg.norm(ref)
            assert err <= tol, (kind, m, err)


def test_inverse_power_matches_oracle_pseudo_inverse():
    rng = np.random.default_rng(1)
    for kind in ("combinatorial", "random-walk"):
        for power, filt in ((1, FilterSpec.commute_time()),
                            (2, FilterSpec.biharmonic()),
                            (3, FilterSpec.inverse_power(3))):
            g, lap = random_lap(20, kind=kind, seed=2 + power)
            engine = MethodEngine(lap, g)
            f = rng.standard_normal(20)
            ref = engine.apply(f, filt, "oracle")
            for m in ("pade:5", "cheb-rational:20"):
                err = np.linalg.norm(engine.apply(f, filt, m) - ref)
                assert err <= 1e-7 * max(np.linalg.norm(ref), 1.0), (kind, power, m)


def test_mexican_postmultiply_matches_oracle():
    rng = np.random.default_rng(2)
    g, lap = random_lap(22, kind="random-walk", seed=5)
    engine = MethodEngine(lap, g)
    f = rng.standard_normal(22)
    filt = FilterSpec.mexican(0.3)
    ref = engine.apply(f, filt, "oracle")
    for m in ("pade:7", "cheb-rational:20"):
        err = np.linalg.norm(engine.apply(f, filt, m) - ref) / np.linalg.norm(ref)
        assert err <= 1e-4, (m, err)


def test_truncated_is_partial_oracle():
    g, lap = random_lap(18, seed=6)
    engine = MethodEngine(lap, g)
    es = engine.eigensystem()
    f = np.random.default_rng(3).standard_normal(18)
    filt = FilterSpec.diffusion(0.1)
    out = engine.apply(f, filt, "truncated:5")
    vals = np.exp(-0.1 * es.eigenvalues[:5])
    manual = es.eigenvectors[:, :5] @ (vals * es.coefficients(f)[:5])
    assert np.allclose(out, manual, atol=1e-12)


def test_distance_methods_match_oracle_definition():
    g, lap = random_lap(16, kind="random-walk", seed=7)
    engine = MethodEngine(lap, g)
    es = dense_eigen(lap)
    for filt in (FilterSpec.commute_time(), FilterSpec.biharmonic(),
                 FilterSpec.inverse_power(3)):
        want = spectral_distance(es, filt, 2, 11)
        got_oracle = engine.distance(2, 11, filt, "oracle")
        got_free = engine.distance(2, 11, filt, "pade:5")
        assert got_oracle == pytest.approx(want, rel=1e-8)
        assert got_free == pytest.approx(want, rel=1e-6)


def test_kernel_column_identity_is_delta(p5):
    lap = laplacian(p5, "combinatorial")
    engine = MethodEngine(lap, p5)
    col = engine.kernel_column(3, FilterSpec.identity(), "pade:5")
    delta = np.zeros(5)
    delta[3] = 1.0
    assert np.allclose(col, delta)


def test_disconnected_graph_rejected_for_inverse():
    from spectrafree import Graph

    g = Graph(4, [(0, 1, 1.0), (2, 3, 1.0)])
    lap = laplacian(g, "combinatorial")
    engine = MethodEngine(lap, g)
    with pytest.raises(ValidationError):
        engine.apply(np.ones(4), FilterSpec.commute_time(), "pade:5")


def test_rational_filterspec_through_engine():
    g, lap = random_lap(14, kind="random-walk", seed=8)
    engine = MethodEngine(lap, g)
    filt = FilterSpec.rational([1.0, 0.25], [1.0, 0.5])  # (1 + s/4) / (1 + s/2)
    f = np.random.default_rng(4).standard_normal(14)
    ref = engine.apply(f, filt, "oracle")
    out = engine.apply(f, filt, "pade:3")
    assert np.linalg.norm(out - ref) <= 1e-8 * np.linalg.norm(ref)


def test_tabulated_filter_has_no_spectrum_free_path(p5):
    lap = laplacian(p5, "combinatorial")
    engine = MethodEngine(lap, p5)
    filt = FilterSpec.tabulated([-10.0, 10.0], [1.0, 1.0])
    with pytest.raises(ArgumentError):
        engine.apply(np.ones(5), filt, "pade:5")
    out = engine.apply(np.ones(5), filt, "oracle")
    assert np.allclose(out, np.ones(5), atol=1e-8)
