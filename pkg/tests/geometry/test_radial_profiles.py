"""
Tests for the ODE-defined radial families.
"""

import math

import numpy as np
import pytest

from src.errors import ConfigError
from src.geometry.radial_profiles import CuspFamily, LowerBoundFamily, cusp_family, family_7_2


@pytest.fixture(name="family", scope="module")
def family_fixture():
    return family_7_2(1)


def test_family_normalization(family: LowerBoundFamily):
    """Test the volume window and the half mass at the unit circle.

    Covers: family_7_2(), LowerBoundFamily._volume(), RadialProfileModel._solve()
    """
    assert 2 * math.pi < family.volume < 20 * math.pi
    assert family.unit_state[0] == pytest.approx(0.5, abs=1e-8)
    mass, _ = family.ode_state(np.array([8.0]))
    assert mass[0] == pytest.approx(1.0, abs=1e-6)


def test_family_value_at_one(family: LowerBoundFamily):
    """Covers: LowerBoundFamily.value_at_one(), metric_coeff()"""
    assert family.metric_coeff(np.array([1.0 + 0j]))[0] == pytest.approx(family.value_at_one(), rel=1e-10)
    assert family.value_at_one() == pytest.approx(math.exp(-2) / (2 * family.volume))


def test_family_reflection(family: LowerBoundFamily):
    """Covers: g(r) = g(1/r) / r^4 beyond the unit circle"""
    r = np.array([0.5, 0.8])
    inner = family.metric_coeff(r + 0j)
    outer = family.metric_coeff(1.0 / r + 0j)
    assert np.allclose(outer, inner * r**4, rtol=1e-10)


def test_family_weight_equation(family: LowerBoundFamily):
    """Covers: RadialProfileModel.compatibility_residual()"""
    assert np.max(family.compatibility_residual(np.array([0.3, 0.6 + 0.2j, 0.9j]))) < 1e-6


def test_family_jet_matches_values(family: LowerBoundFamily):
    """Covers: RadialProfileModel.metric_jet() inside and outside the core"""
    points = np.array([1e-5, 0.4 + 0.3j, 0.9])
    jet = family.metric_jet(points)
    assert np.allclose(jet.value.real, family.metric_coeff(points), rtol=1e-9)
    assert np.all(np.isfinite(family.normalized_sectional_curvature(points)))


def test_family_index_range():
    """Covers: family_7_2() index validation"""
    with pytest.raises(ConfigError):
        family_7_2(0)
    with pytest.raises(ConfigError):
        family_7_2(6)


def test_cusp_family():
    """Test normalization and growth of the origin value with n.

    Covers: cusp_family(), CuspFamily.origin_ratio(), CuspFamily.tail_state()
    """
    first, third = cusp_family(1), cusp_family(3)
    assert isinstance(first, CuspFamily)
    for model in (first, third):
        assert model.unit_state[0] == pytest.approx(1 - 0.5 * math.pi / model.volume, abs=1e-8)
        mass, _ = model.ode_state(np.array([10.0]))
        assert mass[0] == pytest.approx(1.0, abs=1e-6)
    assert third.origin_ratio() > first.origin_ratio() > 0


def test_cusp_family_validation():
    """Covers: CuspFamily parameter validation"""
    with pytest.raises(ConfigError):
        cusp_family(0)
    with pytest.raises(ConfigError):
        cusp_family(2, theta=1.5)
