"""
Tests for peak sections.

For the flat Gaussian ``lambda_p^{-2} = p! P(p + 1, pi m c^2) / (pi^p m^{p+1})``
and the triangular basis at the origin has ``f0 = 1``, ``f1 = sqrt(pi)``,
``f2 = pi`` exactly.
"""

import math

import pytest
from scipy.special import gammaincc, gammaln

from src.bergman.peak_sections import (
    PeakSpec,
    check_peak_normalization,
    flat_lambda_inv_sq,
    jet_asymptotics,
    lambda_inv_sq,
    peak_overlap,
    peak_table,
)
from src.errors import ConfigError
from src.geometry.metric_models import FlatGaussian, SharpExample


def test_peak_spec():
    """Covers: PeakSpec validation and default cutoff"""
    assert PeakSpec(0, 64).radius == pytest.approx(math.log(64) / 8)
    assert PeakSpec(1, 64, cutoff=0.2).radius == 0.2
    with pytest.raises(ConfigError):
        PeakSpec(-1, 64)
    with pytest.raises(ConfigError):
        PeakSpec(0, 4)


@pytest.mark.parametrize("p, m", [(0, 64), (1, 128), (2, 256)])
def test_flat_normalization_matches_closed_form(flat_model: FlatGaussian, p, m):
    """Covers: lambda_inv_sq() on a radial model, flat_lambda_inv_sq()"""
    spec = PeakSpec(p, m)
    value = lambda_inv_sq(flat_model, spec)
    assert value.real() == pytest.approx(flat_lambda_inv_sq(p, m, spec.radius), rel=1e-9)


def test_flat_normalization_bounded(flat_model: FlatGaussian):
    """Covers: check_peak_normalization()"""
    check = check_peak_normalization(flat_model, 1, [64, 128, 256], threads=1)
    assert check.bounded
    assert check.m_list == [64, 128, 256]
    assert all(r < 1e-6 for r in check.residuals)


def test_flat_overlaps_vanish(flat_model: FlatGaussian):
    """Covers: peak_overlap() exact angular cancellation, distinct-index check"""
    assert peak_overlap(flat_model, 64, 0, 1).is_zero
    with pytest.raises(ConfigError):
        peak_overlap(flat_model, 64, 1, 1)


def test_sharp_overlap_conjugate_symmetry(sharp_model: SharpExample):
    """Covers: peak_overlap() on a non-radial model and index swap"""
    forward = peak_overlap(sharp_model, 64, 0, 1)
    backward = peak_overlap(sharp_model, 64, 1, 0)
    assert not forward.is_zero
    assert forward.log_mag == backward.log_mag
    assert forward.phase == pytest.approx(backward.phase.conjugate())
    assert abs(forward.value()) < 0.1


def test_peak_table_rows(flat_model: FlatGaussian):
    """Covers: peak_table()"""
    rows = peak_table(flat_model, [0, 1], [64, 128], threads=1)
    assert [(row.m, row.p) for row in rows] == [(64, 0), (64, 1), (128, 0), (128, 1)]
    assert all(row.overlap_2_abs == 0 for row in rows)


def test_flat_jet_limits(flat_model: FlatGaussian):
    """Covers: jet_asymptotics() limits and verdicts"""
    result = jet_asymptotics(flat_model, [16, 32, 64], threads=1)
    for row in result.rows:
        assert row.f0 == pytest.approx(1.0, rel=1e-8)
        assert row.f1 == pytest.approx(math.sqrt(math.pi), rel=1e-8)
        assert row.f2 == pytest.approx(math.pi, rel=1e-8)
        assert row.mixed == pytest.approx(0.0, abs=1e-8)
    assert result.bounded
    assert set(result.verdicts) == {"f0", "f1", "f2", "mixed"}


@pytest.mark.parametrize("m", [64, 256, 1024])
def test_cutoff_doubling_within_tail_bound(flat_model: FlatGaussian, m):
    """Test that doubling the cutoff moves lambda^{-2} by no more than the Gaussian mass beyond it.

    Covers: lambda_inv_sq() with an explicit cutoff
    """
    for p in (0, 1, 2):
        spec = PeakSpec(p, m)
        near = lambda_inv_sq(flat_model, spec).real()
        far = lambda_inv_sq(flat_model, PeakSpec(p, m, cutoff=2 * spec.radius)).real()
        log_total = gammaln(p + 1.0) - p * math.log(math.pi) - (p + 1) * math.log(m)
        tail = math.exp(log_total) * gammaincc(p + 1.0, math.pi * m * spec.radius**2)
        assert abs(far - near) <= tail + 1e-9 * near


@pytest.mark.parametrize("m", [64, 128, 256])
def test_doubling_m_scales_by_power_of_two(flat_model: FlatGaussian, m):
    """Covers: lambda_inv_sq() ratio 2^{-(1+p)} under m -> 2m on the flat Gaussian"""
    for p in (0, 1, 2):
        ratio = lambda_inv_sq(flat_model, PeakSpec(p, 2 * m)).real() / lambda_inv_sq(flat_model, PeakSpec(p, m)).real()
        assert ratio == pytest.approx(2.0 ** (-(1 + p)), rel=1e-6)
