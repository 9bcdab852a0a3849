"""
Tests for the shared normalization conventions.
"""

import math

import numpy as np
import pytest

from src.geometry.conventions import (
    curvature_from_metric_jet,
    gradient_norm,
    hessian_norm,
    kahler_scale,
    metric_jet_from_log_weight,
)
from src.numerics.jets import WirtingerJet

POINTS = np.array([0.0, 0.5, 0.3 - 1.1j, 2.0 + 2.0j])


def _fs_metric_jet(z0):
    z, zbar = WirtingerJet.variables(z0)
    return metric_jet_from_log_weight(-(1.0 + z * zbar).log())


def test_fubini_study_metric_coefficient():
    """Covers: metric_jet_from_log_weight() normalization g = -(1/2 pi) d dbar log a"""
    jet = _fs_metric_jet(POINTS)
    expected = 1.0 / (2 * math.pi * (1 + np.abs(POINTS) ** 2) ** 2)
    assert np.allclose(jet.value.real, expected, rtol=1e-12)


def test_fubini_study_curvature():
    """Test R = 1/(pi (1+|z|^2)^4) and the constant Gaussian curvature 4 pi.

    Covers: curvature_from_metric_jet()
    """
    jet = _fs_metric_jet(POINTS)
    curvature = curvature_from_metric_jet(jet)
    assert np.allclose(curvature, 1.0 / (math.pi * (1 + np.abs(POINTS) ** 2) ** 4), rtol=1e-10)
    assert np.allclose(curvature / jet.value.real**2, 4 * math.pi, rtol=1e-10)


def test_real_norms_from_wirtinger_derivatives():
    """Covers: gradient_norm(), hessian_norm() against x, |z|^2 and x^2"""
    assert gradient_norm(0.5) == pytest.approx(1.0)
    assert hessian_norm(0.0, 1.0) == pytest.approx(2 * math.sqrt(2))
    assert hessian_norm(0.5, 0.5) == pytest.approx(2.0)


def test_kahler_scale():
    """Covers: kahler_scale()"""
    assert kahler_scale(4.0) == pytest.approx(0.5)
