"""
Tests for the smooth radial cutoff.
"""

import numpy as np
import pytest

from src.errors import ModelError
from src.geometry.cutoff import CutoffProfile


@pytest.fixture(name="cutoff")
def cutoff_fixture():
    return CutoffProfile()


def test_verify_default_bounds(cutoff: CutoffProfile):
    """Covers: CutoffProfile.verify() declared bounds and monotonicity"""
    report = cutoff.verify()
    assert report["monotone"]
    assert report["max_gradient"] <= cutoff.max_gradient_bound
    assert report["max_hessian"] <= cutoff.max_hessian_bound


def test_values(cutoff: CutoffProfile):
    """Test the plateau values and the symmetric midpoint.

    Covers: CutoffProfile.value()
    """
    values = cutoff.value([0.0, 0.2, 0.5, 0.75, 1.0, 3.0])
    assert values[0] == 1.0
    assert values[1] == 1.0
    assert values[2] == 1.0
    assert values[3] == pytest.approx(0.5)
    assert values[4] == 0.0
    assert values[5] == 0.0


def test_value_continuous_at_ramp_ends(cutoff: CutoffProfile):
    """Covers: CutoffProfile.value() matching pieces across ramp boundaries"""
    for edge in (cutoff.r_in + cutoff.ramp, cutoff.r_out - cutoff.ramp):
        left, right = cutoff.value([edge - 1e-9, edge + 1e-9])
        assert left == pytest.approx(right, abs=1e-8)


@pytest.mark.parametrize("r", [0.55, 0.6, 0.75, 0.9, 0.97])
def test_derivatives_match_finite_differences(cutoff: CutoffProfile, r):
    """Covers: CutoffProfile.derivative(), second_derivative(), radial_jet()"""
    h = 1e-5
    fd = (cutoff.value(r + h) - cutoff.value(r - h)) / (2 * h)
    assert cutoff.derivative(r) == pytest.approx(fd, rel=1e-5, abs=1e-8)
    fd2 = (cutoff.derivative(r + h) - cutoff.derivative(r - h)) / (2 * h)
    assert cutoff.second_derivative(r) == pytest.approx(fd2, rel=1e-4, abs=1e-6)

    taylor = cutoff.radial_jet(np.array([r])).taylor()
    assert taylor[0][0].real == pytest.approx(cutoff.value(r))
    assert taylor[1][0].real == pytest.approx(cutoff.derivative(r), rel=1e-9, abs=1e-12)
    assert 2 * taylor[2][0].real == pytest.approx(cutoff.second_derivative(r), rel=1e-9, abs=1e-10)


def test_jet_is_constant_inside(cutoff: CutoffProfile):
    """Covers: CutoffProfile.jet() away from the transition annulus"""
    jet = cutoff.jet(np.array([0.1 + 0.1j, 2.0]))
    assert np.allclose(jet.value, [1.0, 0.0])
    assert np.allclose(jet.coeffs[..., 1:, :], 0.0)


def test_jet_matches_radial_derivative(cutoff: CutoffProfile):
    """Test d eta(|z|) = eta'(r) zbar / (2 r) on the positive axis.

    Covers: CutoffProfile.jet() in the transition annulus
    """
    jet = cutoff.jet(np.array([0.7 + 0j]))
    assert jet.derivative(1, 0)[0].real == pytest.approx(cutoff.derivative(0.7) / 2)


def test_impossible_slope():
    """Covers: CutoffProfile.__post_init__() ModelError"""
    with pytest.raises(ModelError):
        CutoffProfile(slope=1.0)
