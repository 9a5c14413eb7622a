import numpy as np
import pytest

from alphapatch.errors import InvalidSpecError
from alphapatch.fields import ScalarField, VectorField, uniform_grid


def test_coeff_sample_roundtrip():
    """Samples and coefficients stay consistent under the DFT."""
    rng = np.random.default_rng(11)
    for n in (16, 64, 256):
        f = ScalarField(rng.standard_normal(n))
        c = f.coeffs
        x = uniform_grid(n)
        k = np.arange(-n // 2, n // 2)
        rebuilt = np.real(np.exp(1j * np.outer(x, k)) @ c)
        assert np.max(np.abs(rebuilt - f.samples)) < 1e-12 * max(1.0, np.max(np.abs(f.samples)))


def test_trig_coeff_hermitian():
    rng = np.random.default_rng(3)
    f = ScalarField(rng.standard_normal(64))
    for k in (1, 5, 17):
        assert f.trig_coeff(-k) == pytest.approx(np.conj(f.trig_coeff(k)))
    assert f.trig_coeff(64) == 0.0


def test_from_trig_coeffs_places_modes():
    f = ScalarField.from_trig_coeffs({3: 0.5, -3: 0.5, 0: 1.0}, 32)
    x = uniform_grid(32)
    np.testing.assert_allclose(f.samples, 1.0 + np.cos(3 * x), atol=1e-14)
    assert f.trig_coeff(3) == pytest.approx(0.5, abs=1e-14)


def test_derivative_and_shift():
    n = 128
    x = uniform_grid(n)
    f = ScalarField(np.sin(3 * x))
    np.testing.assert_allclose(f.derivative().samples, 3 * np.cos(3 * x), atol=1e-11)
    np.testing.assert_allclose(f.shift(0.4).samples, np.sin(3 * (x + 0.4)), atol=1e-12)


def test_shift_nyquist_mode():
    # the unpaired cos(N/2 x) mode shifts through a real multiplier
    n = 16
    x = uniform_grid(n)
    f = ScalarField(np.cos(8 * x))
    h = 0.3
    np.testing.assert_allclose(f.shift(h).samples, np.cos(8 * x) * np.cos(8 * h), atol=1e-13)


def test_antiderivative_zero_mean():
    n = 64
    x = uniform_grid(n)
    f = ScalarField(np.cos(2 * x) + 5.0)
    a = f.antiderivative_zero_mean()
    np.testing.assert_allclose(a.samples, 0.5 * np.sin(2 * x), atol=1e-12)


def test_lp_norms_of_cosine():
    f = ScalarField.from_function(np.cos, 256)
    assert f.lp_norm(2) == pytest.approx(np.sqrt(np.pi), rel=1e-10)
    assert f.lp_norm(np.inf) == pytest.approx(1.0, rel=1e-10)
    assert f.lp_norm(4) == pytest.approx((2 * np.pi * 3 / 8) ** 0.25, rel=1e-8)
    assert f.lp_norm(1) == pytest.approx(4.0, rel=1e-3)
    with pytest.raises(InvalidSpecError):
        f.lp_norm(0.5)


def test_oversample_preserves_bandlimited():
    n = 32
    f = ScalarField.from_function(lambda x: np.sin(5 * x) - 2 * np.cos(x), n)
    g = f.oversampled(4)
    x = uniform_grid(4 * n)
    np.testing.assert_allclose(g.samples, np.sin(5 * x) - 2 * np.cos(x), atol=1e-12)


def test_eval_at_matches_grid():
    rng = np.random.default_rng(7)
    f = ScalarField(rng.standard_normal(64))
    x = uniform_grid(64)
    np.testing.assert_allclose(f.eval_at(x), f.samples, atol=1e-12)
    assert f.eval_at(float(x[5])) == pytest.approx(f.samples[5], abs=1e-12)


def test_even_odd_split():
    n = 64
    x = uniform_grid(n)
    f = ScalarField(np.cos(2 * x) + 0.25 * np.sin(3 * x))
    np.testing.assert_allclose(f.even_part().samples, np.cos(2 * x), atol=1e-13)
    assert f.odd_mass() == pytest.approx(0.25 * np.sqrt(np.pi), rel=1e-10)


def test_period_scaling():
    L = 5.0
    f = ScalarField.from_function(lambda s: np.sin(2 * np.pi * s / L), 64, period=L)
    d = f.derivative()
    x = uniform_grid(64, L)
    np.testing.assert_allclose(
        d.samples, (2 * np.pi / L) * np.cos(2 * np.pi * x / L), atol=1e-11
    )
    assert f.lp_norm(2) == pytest.approx(np.sqrt(L / 2), rel=1e-10)


def test_vector_field_frame_ops():
    rng = np.random.default_rng(5)
    v = VectorField(rng.standard_normal((32, 2)))
    p = v.perp()
    assert np.allclose(v.dot(p).samples, 0.0)
    assert np.allclose(p.pointwise_norm().samples, v.pointwise_norm().samples)
    with pytest.raises(InvalidSpecError):
        VectorField(np.zeros((4, 3)))
