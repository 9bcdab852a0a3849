"""
Tests for the analytic metric models.

Each model's closed-form ``g`` is checked against its weight (finite
differences) and its jets (exact derivatives).
"""

import math

import numpy as np
import pytest

from src.errors import ConfigError
from src.geometry.metric_models import (
    FlatGaussian,
    FubiniStudy,
    OscillationModel,
    PositivityDiagnostic,
    SharpExample,
    Symmetry,
    curvature_at,
    flat_gaussian,
    oscillation_family,
    radial_symmetry_residual,
    sample_points,
)

POINTS = np.array([0.3 + 0.1j, -0.6 + 0.4j, 0.8j, 1.2 - 0.3j])


def test_fubini_study(fs_model: FubiniStudy):
    """Covers: FubiniStudy weight, metric, density and compatibility"""
    assert fs_model.symmetry is Symmetry.RADIAL
    assert fs_model.bandwidth == 0
    assert math.isinf(fs_model.chart_radius)
    assert fs_model.density(0.0) == pytest.approx(1 / math.pi)
    assert np.max(fs_model.compatibility_residual(POINTS)) < 1e-6
    polar = fs_model.polar_log_density(np.array([[0.5]]), np.array([[0.0, 1.0]]))
    assert polar.shape == (1, 2)
    assert np.allclose(polar, np.log(fs_model.density(0.5)))


def test_fubini_study_curvature(fs_model: FubiniStudy):
    """Covers: curvature_at() on Fubini-Study"""
    expected = 1.0 / (math.pi * (1 + np.abs(POINTS) ** 2) ** 4)
    assert np.allclose(curvature_at(fs_model, POINTS), expected, rtol=1e-10)


def test_flat_gaussian(flat_model: FlatGaussian):
    """Covers: FlatGaussian unit density and chart radius validation"""
    assert np.allclose(flat_model.density(POINTS), 1.0)
    assert np.max(flat_model.compatibility_residual(POINTS)) < 1e-8
    assert flat_model.chart_radius == 8.0
    with pytest.raises(ConfigError):
        flat_gaussian(chart_radius=-1.0)


def test_sharp_example(sharp_model: SharpExample):
    """Test the sharp model's closed-form metric against its weight and jets.

    Covers: SharpExample.metric_coeff(), log_weight_jet(), compatibility_residual()
    """
    assert sharp_model.symmetry is Symmetry.ANGULAR_BAND
    assert sharp_model.bandwidth == 1
    assert sharp_model.breakpoints == (0.5, 1.0)
    assert np.all(sharp_model.metric_coeff(POINTS) > 0)
    assert np.max(sharp_model.compatibility_residual(POINTS)) < 1e-6
    jet_value = sharp_model.metric_jet(POINTS).value.real
    assert np.allclose(jet_value, sharp_model.metric_coeff(POINTS), rtol=1e-9)


def test_sharp_example_polar_matches_cartesian(sharp_model: SharpExample):
    """Covers: SharpExample.polar_log_weight(), polar_log_density()"""
    r, theta = np.array([[0.4], [0.7]]), np.array([[0.0, 1.0, 2.5]])
    z = r * np.exp(1j * theta)
    assert np.allclose(sharp_model.polar_log_weight(r, theta), sharp_model.log_weight(z))
    assert np.allclose(sharp_model.polar_log_density(r, theta), np.log(sharp_model.density(z)))


def test_sharp_example_is_not_radial(sharp_model: SharpExample, fs_model: FubiniStudy):
    """Covers: radial_symmetry_residual()"""
    assert radial_symmetry_residual(fs_model, [0.3, 1.0, 2.0]) < 1e-14
    assert radial_symmetry_residual(sharp_model, [0.3, 0.7]) > 1e-6


def test_oscillation_model_positive():
    """Covers: oscillation_family() for an index above the positivity threshold"""
    model = oscillation_family(8)
    assert isinstance(model, OscillationModel)
    assert model.symmetry is Symmetry.GENERIC
    assert model.bandwidth is None
    jet_value = model.metric_jet(POINTS).value.real
    assert np.allclose(jet_value, model.metric_coeff(POINTS), rtol=1e-8)
    assert np.max(model.compatibility_residual(POINTS[:3])) < 1e-5


def test_oscillation_model_diagnostic():
    """Covers: oscillation_family() returning PositivityDiagnostic, index validation"""
    diagnostic = oscillation_family(1)
    assert isinstance(diagnostic, PositivityDiagnostic)
    assert diagnostic.min_metric < 0
    assert 1 < diagnostic.threshold <= 8
    with pytest.raises(ConfigError):
        oscillation_family(0)


def test_check_degree(fs_model: FubiniStudy):
    """Covers: MetricModel.check_degree()"""
    fs_model.check_degree(1)
    fs_model.check_degree(fs_model.degree_cap)
    with pytest.raises(ConfigError):
        fs_model.check_degree(0)
    with pytest.raises(ConfigError):
        fs_model.check_degree(fs_model.degree_cap + 1)


def test_sample_points_seeded(sharp_model: SharpExample):
    """Covers: sample_points() determinism and sampling disc"""
    first = sample_points(sharp_model, 50, seed=3)
    assert np.array_equal(first, sample_points(sharp_model, 50, seed=3))
    assert not np.array_equal(first, sample_points(sharp_model, 50, seed=4))
    assert np.all(np.abs(first) <= sharp_model.sample_radius)


def test_describe(sharp_model: SharpExample):
    """Covers: MetricModel.describe()"""
    info = sharp_model.describe()
    assert info["name"] == "sharp_example"
    assert info["symmetry"] == "angular_band"
    assert info["degree_cap"] == 2048
    assert info["params"] == {"amplitude": 1.0 / 400.0}
