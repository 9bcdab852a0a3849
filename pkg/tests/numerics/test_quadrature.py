"""
Tests for the log-domain quadrature.

Gaussian moments at large m have closed forms
``int_0^inf r^{2p+1} e^{-pi m r^2} dr = p! / (2 (pi m)^{p+1})``.
"""

import math

import numpy as np
import pytest
from pydantic import ValidationError

from src.errors import AliasingSuspected, NonConvergence
from src.numerics.quadrature import (
    QuadSpec,
    adaptive_log_integral,
    TOP_BAND,
    angular_modes,
    angular_spectrum,
    gk15_rule,
    integrate_disc,
    integrate_radial,
)


def test_gk15_rule_weights_and_exactness():
    """Covers: gk15_rule() weight sums and polynomial exactness"""
    nodes, kronrod, gauss = gk15_rule(np.array([0.0, 0.5, 1.0]))
    assert nodes.shape == (2, 15)
    assert kronrod.sum() == pytest.approx(1.0)
    assert gauss.sum() == pytest.approx(1.0)
    assert np.sum(kronrod * nodes**10) == pytest.approx(1.0 / 11.0)


def test_quad_spec_nodes():
    """Covers: QuadSpec.nodes_for(), angular_nodes validation"""
    assert QuadSpec().nodes_for(0) == 256
    assert QuadSpec().nodes_for(100) == 1024
    assert QuadSpec(angular_nodes=64).nodes_for(100) == 64
    with pytest.raises(ValidationError):
        QuadSpec(angular_nodes=100)


def test_adaptive_gaussian():
    """Covers: adaptive_log_integral() on a finite interval"""
    result = adaptive_log_integral(lambda x: -(x**2), -10.0, 10.0)
    assert result.value.real() == pytest.approx(math.sqrt(math.pi), rel=1e-9)
    assert result.rel_error <= 1e-10
    assert result.n_panels > 0


@pytest.mark.parametrize("m, p", [(1e4, 0), (1e6, 3), (1e9, 1)])
def test_radial_gaussian_moments(m, p):
    """Test peaked radial moments against their closed form in log-domain.

    Covers: integrate_radial() with the log-r substitution
    """
    value = integrate_radial(lambda r: (2 * p + 1) * np.log(r) - math.pi * m * r**2)
    expected = math.lgamma(p + 1) - math.log(2.0) - (p + 1) * math.log(math.pi * m)
    assert value.log_mag == pytest.approx(expected, abs=1e-9)


@pytest.mark.parametrize("m", [1, 10, 100, 1000])
def test_gaussian_moment_table(m):
    """Covers: integrate_radial() on r^{2p+1} e^{-pi m r^2} for p = 0..8"""
    for p in range(9):
        value = integrate_radial(lambda r, p=p: (2 * p + 1) * np.log(r) - math.pi * m * r**2)
        expected = math.lgamma(p + 1) - math.log(2.0) - (p + 1) * math.log(math.pi * m)
        assert value.log_mag == pytest.approx(expected, abs=1e-10), p


def _rational_tail(r):
    return 3 * np.log(r) - 20.0 * np.log1p(r**2)


@pytest.mark.parametrize("log_c", [math.log(3.7), 700.0, -700.0])
def test_radial_scaling_equivariance(log_c):
    """Test that scaling the integrand by c shifts log_mag by log c, beyond double range.

    Covers: integrate_radial() equivariance on finite and infinite intervals
    """
    for a, b in ((0.0, math.inf), (0.2, 1.5)):
        base = integrate_radial(_rational_tail, a, b)
        scaled = integrate_radial(lambda r: _rational_tail(r) + log_c, a, b)
        assert scaled.log_mag - base.log_mag == pytest.approx(log_c, abs=1e-10)


def test_radial_zero_integrand():
    """Covers: integrate_radial() on an identically zero integrand"""
    value = integrate_radial(lambda r: np.full_like(r, -np.inf), 0.0, 1.0)
    assert value.is_zero


def test_radial_empty_interval():
    """Covers: integrate_radial() with a >= b"""
    assert integrate_radial(lambda r: np.zeros_like(r), 1.0, 1.0).is_zero


def test_non_convergence():
    """Test the subdivision budget on an endpoint singularity.

    Covers: adaptive_log_integral() NonConvergence and the non-raising path
    """
    spec = QuadSpec(rel_tol=1e-14, max_subdivisions=2)
    with pytest.raises(NonConvergence) as e:
        adaptive_log_integral(lambda x: -0.5 * np.log(x), 0.0, 1.0, spec)
    assert e.value.partial is not None
    assert e.value.error_estimate > 1e-14

    result = adaptive_log_integral(lambda x: -0.5 * np.log(x), 0.0, 1.0, spec, raise_on_failure=False)
    assert result.rel_error > 1e-14
    assert result.value.real() == pytest.approx(2.0, rel=1e-2)


def test_angular_modes():
    """Covers: angular_modes() on cos(3 theta)"""
    modes = angular_modes(lambda theta: np.cos(3 * theta), 4)
    assert len(modes) == 5
    assert modes[3].real() == pytest.approx(math.pi)
    for k in (0, 1, 2, 4):
        assert abs(modes[k].value()) < 1e-12


def test_angular_spectrum_top_band():
    """Test which modes count as near-Nyquist.

    Covers: angular_spectrum() scaling and the |k| >= 0.4 N cut
    """
    n = 20
    theta = 2 * np.pi * np.arange(n) / n
    assert TOP_BAND * n == pytest.approx(8.0)
    modes, fraction = angular_spectrum(np.exp(3j * theta))
    assert modes[3] == pytest.approx(2 * math.pi)
    assert fraction < 1e-12
    for k in (8, -8, 10):
        assert angular_spectrum(np.exp(1j * k * theta))[1] == pytest.approx(1.0)
    assert angular_spectrum(np.exp(7j * theta))[1] < 1e-12
    both = np.stack([np.exp(7j * theta), np.exp(7j * theta) + np.exp(9j * theta)])
    assert angular_spectrum(both)[1] == pytest.approx([0.0, 0.5], abs=1e-12)


def test_angular_aliasing():
    """Covers: angular_modes() raising AliasingSuspected"""
    with pytest.raises(AliasingSuspected):
        angular_modes(lambda theta: np.exp(7j * theta), 2, QuadSpec(angular_nodes=16))


def test_integrate_disc():
    """Test area integrals of |z|^2 and Re z^2 over the unit disc.

    Covers: integrate_disc() value and exact angular cancellation
    """
    value = integrate_disc(lambda r, theta: np.broadcast_to(2 * np.log(r), np.broadcast_shapes(r.shape, theta.shape)), 1.0)
    assert value.real() == pytest.approx(math.pi / 2, rel=1e-9)

    def re_z2(r, theta):
        f = r**2 * np.cos(2 * theta)
        with np.errstate(divide="ignore"):
            return np.log(np.abs(f)), np.sign(f)

    assert integrate_disc(re_z2, 1.0).is_zero
