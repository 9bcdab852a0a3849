"""
Tests for Fourier profiles and their bounds.

Closed forms: ``h = 2 pi r^2`` for ``|z|^2`` at ``k = 0``, ``h = pi r^2`` for
``Re z^2`` at ``k = 2`` and ``h = pi r^2 log r`` for ``r^2 log r cos 2 theta``
at ``k = 2``.
"""

import math

import numpy as np
import pytest

from src.analysis.fourier_bounds import (
    TestFunction,
    bound_denominator,
    bound_table,
    check_bound,
    fourier_profile,
    model_functions,
    ode_residual,
    standard_functions,
)
from src.errors import ConfigError
from src.geometry.metric_models import FubiniStudy

RADII = np.array([0.05, 0.1, 0.2, 0.3])


@pytest.fixture(name="functions", scope="module")
def functions_fixture():
    return standard_functions()


def test_profiles_closed_form(functions):
    """Covers: fourier_profile() on closed-form cases"""
    assert np.allclose(fourier_profile(functions["abs_sq"], 0, RADII, threads=1), 2 * math.pi * RADII**2)
    assert np.allclose(fourier_profile(functions["re_z2"], 2, RADII, threads=1), math.pi * RADII**2)
    assert np.allclose(
        fourier_profile(functions["r2logr_cos2"], 2, RADII, threads=1), math.pi * RADII**2 * np.log(RADII)
    )
    assert np.allclose(fourier_profile(functions["re_z2"], 1, RADII, threads=1), 0.0, atol=1e-14)


def test_profile_validation(functions):
    """Covers: fourier_profile() mode and radius checks"""
    with pytest.raises(ConfigError):
        fourier_profile(functions["abs_sq"], -1, RADII)
    with pytest.raises(ConfigError):
        fourier_profile(functions["abs_sq"], 0, [0.6])


def test_log_bound_is_sharp(functions):
    """Test that the logarithmic bound is attained with constant pi.

    Covers: check_bound() on r^2 log r cos 2 theta
    """
    result = check_bound(functions["r2logr_cos2"], 2, 0.3, threads=1)
    assert result.sup == pytest.approx(math.pi, abs=1e-4)
    assert result.jet_order == 1


def test_no_log_companion(functions):
    """Covers: check_bound() at k = 0 without the log factor"""
    result = check_bound(functions["abs_sq"], 0, 0.3, threads=1)
    assert math.isfinite(result.sup)
    assert result.sup == pytest.approx(2 * math.pi, rel=1e-10)


def test_fourth_order_bound(functions):
    """Covers: check_bound() for a function vanishing to third order"""
    result = check_bound(functions["r4logr_cos4"], 4, 0.3, threads=1)
    assert result.sup == pytest.approx(math.pi, abs=1e-4)
    with pytest.raises(ConfigError):
        check_bound(functions["r4logr_cos4"], 4, 0.3, jet_order=1)


def test_bound_denominator():
    """Covers: bound_denominator() for both cases"""
    r = np.array([0.01, 0.5])
    assert np.allclose(bound_denominator(r, 0, 1), r**2)
    assert np.allclose(bound_denominator(r, 2, 1), r**2 * np.maximum(1, np.abs(np.log(r))))
    assert np.allclose(bound_denominator(r, 4, 3), r**4 * np.maximum(1, np.abs(np.log(r))))
    assert np.allclose(bound_denominator(r, 1, 3), r**4)


def test_bound_table(functions):
    """Covers: bound_table() row layout"""
    rows = bound_table(functions["abs_sq"], 0, [0.1, 0.2], threads=1)
    assert len(rows) == 2
    r, h, den, ratio = rows[0]
    assert r == 0.1
    assert ratio == pytest.approx(h / den)


@pytest.mark.parametrize("name, k", [("abs_sq", 0), ("re_z2", 2), ("r2logr_cos2", 2)])
def test_ode_residual(functions, name, k):
    """Covers: ode_residual() on the standard functions"""
    residual = ode_residual(functions[name], k, np.linspace(0.1, 0.4, 4), threads=1)
    assert np.max(np.abs(residual)) < 1e-6


def test_test_function_verify(functions):
    """Covers: TestFunction.verify() and its vanishing checks"""
    assert functions["abs_sq"].verify() == pytest.approx({"K1": 0.25, "K2": 4.0})
    with pytest.raises(ConfigError):
        TestFunction("constant", lambda z: np.ones(np.shape(z))).verify()
    with pytest.raises(ConfigError):
        TestFunction("bad", lambda z: z, jet_order=2)


def test_model_functions(fs_model: FubiniStudy):
    """Covers: model_functions() in the Kähler coordinate"""
    functions = model_functions(fs_model)
    assert set(functions) == {"fubini_study:psi", "fubini_study:phi"}
    for tf in functions.values():
        assert abs(tf.values(np.array([0j]))[0]) < 1e-14
        assert np.all(np.isfinite(fourier_profile(tf, 2, [0.1, 0.2], threads=1)))


def test_profile_is_linear(functions):
    """Covers: fourier_profile() on a linear combination of test functions"""
    a, b = functions["abs_sq"], functions["r2logr_cos2"]
    combo = TestFunction("combo", lambda z: 2.5 * a.f(z) - 0.75 * b.f(z), 1)
    for k in (0, 2, 3):
        expected = 2.5 * fourier_profile(a, k, RADII, threads=1) - 0.75 * fourier_profile(b, k, RADII, threads=1)
        assert np.allclose(fourier_profile(combo, k, RADII, threads=1), expected, rtol=1e-10, atol=1e-14)


@pytest.mark.parametrize("k", [0, 1, 3, 4, 7])
def test_harmonic_modes_vanish_off_their_index(functions, k):
    """Covers: fourier_profile() of Re z^2 away from k = 2"""
    assert np.max(np.abs(fourier_profile(functions["re_z2"], k, RADII, threads=1))) < 1e-12
