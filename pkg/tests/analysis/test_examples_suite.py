"""
Tests for the quantitative checks on the model families.
"""

import math

import numpy as np
import pytest

from src.analysis.examples_suite import (
    SHARP_LIMITS,
    GapResult,
    SharpReport,
    SharpRow,
    _log_double_factorial_odd,
    _window_errors,
    cusp_criteria,
    family_7_2_gap,
    family_model_checks,
    hessian_gap_nondecreasing,
    norm_leading,
    oscillation_identity,
    oscillation_identity_bounded,
    oscillation_l1,
    oscillation_l1_above_floor,
    overlap_leading,
    sharp_constants,
    sharp_norm_asymptotics,
    sharp_overlap_asymptotics,
)
from src.errors import ConfigError


def test_leading_terms():
    """Covers: norm_leading(), overlap_leading(), _log_double_factorial_odd()"""
    assert norm_leading(2, 10) == pytest.approx(2e-3)
    assert math.exp(_log_double_factorial_odd(5)) == pytest.approx(15.0)
    expected = (-5 / 800) * math.sqrt(math.pi) * 3 / (2**3 * 400**2.5)
    assert overlap_leading(0, 400) == pytest.approx(expected)
    assert overlap_leading(0, 400, published=True) == pytest.approx(-expected / 5)


def test_moment_index_range():
    """Covers: moment index validation"""
    with pytest.raises(ConfigError):
        sharp_norm_asymptotics([400], 4)


def test_norm_asymptotics_at_400(sharp_model):
    """Covers: sharp_norm_asymptotics() against k! / m^(k+1)"""
    table = sharp_norm_asymptotics([400], 0, sharp_model, threads=1)
    assert table.kind == "norm"
    assert table.ratios[0] == pytest.approx(1.0, abs=0.05)


def test_overlap_asymptotics_at_400(sharp_model):
    """Covers: sharp_overlap_asymptotics() at a single m"""
    table = sharp_overlap_asymptotics([400], 0, sharp_model, threads=1)
    m, value, leading, ratio = table.rows[0]
    assert m == 400
    assert value != 0
    assert ratio == pytest.approx(value / leading)


@pytest.mark.slow
def test_sharp_constants(sharp_model):
    """Covers: sharp_constants() two-path agreement and limits"""
    report = sharp_constants([256, 512, 1024], sharp_model, threads=1)
    flags = report.criteria()
    assert flags["paths_agree"]
    assert flags["m_beta01_within_10pct"]
    assert flags["sqrt_m_grad_within_10pct"]


def test_sharp_report_criteria():
    """Covers: SharpReport.criteria() on synthetic rows"""
    row = SharpRow(1024, 0.0, 0.0, 0.0, SHARP_LIMITS["m_beta01"], SHARP_LIMITS["m_beta12"] * 1.5, -1.0, -1.0, 0.1, 0.0)
    report = SharpReport([row], expected=dict(SHARP_LIMITS))
    flags = report.criteria()
    assert flags["m_beta01_within_10pct"]
    assert not flags["m_beta12_within_10pct"]
    assert flags["paths_agree"]
    assert flags["limit_errors_shrink"]


def test_family_gap():
    """Test the exact lower bound at [1, 1] and the reflection symmetry of the norms.

    Covers: family_7_2_gap(), GapResult.passed
    """
    result = family_7_2_gap(1, 9)
    assert isinstance(result, GapResult)
    assert result.passed
    assert result.lower_bound == pytest.approx(1 / (4 * math.pi * 100))
    assert result.symmetry_residual < 1e-10
    with pytest.raises(ConfigError):
        family_7_2_gap(1, 8)


def test_family_model_checks():
    """Covers: family_model_checks()"""
    checks = family_model_checks(1, n_points=50)
    assert 2 * math.pi < checks["volume"] < 20 * math.pi
    assert checks["sec_bounded"]
    assert checks["symmetry_residual"] < 1e-12


def test_oscillation_l1():
    """Covers: oscillation_l1(), oscillation_l1_above_floor()"""
    for ref in ("zero", "previous", "half_mean"):
        rows = oscillation_l1([8, 12], ref, n_r=100, n_theta=256)
        assert [k for k, _ in rows] == [8, 12]
        assert oscillation_l1_above_floor(rows, ref)
    with pytest.raises(ConfigError) as e:
        oscillation_l1([8], "mean")
    assert "zero" in e.value.suggestions


def test_oscillation_identity():
    """Covers: oscillation_identity(), oscillation_identity_bounded()"""
    rows = oscillation_identity([8, 12], n_r=20, n_theta=32)
    assert [r[0] for r in rows] == [8, 12]
    assert all(math.isfinite(r[1]) and r[2] == pytest.approx(r[0] * r[1]) for r in rows)
    assert oscillation_identity_bounded([(8, 0.1, 0.8), (12, 0.07, 0.84), (16, 0.05, 0.8)])
    with pytest.raises(ConfigError):
        oscillation_identity([1])


def test_hessian_gap_nondecreasing():
    """Covers: hessian_gap_nondecreasing() slack"""
    assert hessian_gap_nondecreasing([(8, 1.0), (12, 0.95), (16, 2.0)])
    assert not hessian_gap_nondecreasing([(8, 1.0), (12, 0.5)])


def test_cusp_criteria():
    """Covers: cusp_criteria() on synthetic rows"""
    rows = [(1, 16, 1.5, 0.9), (2, 16, 3.0, 1.0), (3, 16, 6.0, 1.1)]
    assert cusp_criteria(rows) == {"model_ratio_grows": True, "bergman_ratio_bounded": True}
    rows = [(1, 16, 1.5, 0.1), (2, 16, 1.4, 2.0)]
    assert cusp_criteria(rows) == {"model_ratio_grows": False, "bergman_ratio_bounded": False}


def test_window_errors_shrink_with_m():
    """Test Richardson error bars on a sequence with a known expansion in 1/sqrt(m).

    Covers: _window_errors(), SharpReport.shrink_ratio()
    """
    m = [128, 256, 512, 1024]
    values = [-1e-3 + 0.3 * k**-0.5 + 0.2 / k + 0.1 * k**-1.5 for k in m]
    errors = _window_errors(m, values, 0.5)
    assert len(errors) == 2
    assert errors[1] < errors[0]
    short = _window_errors(m[:3], values[:3], 0.5)
    assert len(short) == 2
    assert short[1] < short[0]
    assert _window_errors(m[:2], values[:2], 0.5) == []
    report = SharpReport([], window_errors={"m_beta01": errors})
    assert report.shrink_ratio() == pytest.approx(errors[1] / errors[0])


def test_growing_error_bars_fail():
    """Covers: SharpReport.criteria() limit_errors_shrink on growing error bars"""
    row = SharpRow(1024, 0.0, 0.0, 0.0, SHARP_LIMITS["m_beta01"], SHARP_LIMITS["m_beta12"], -1.0, -1.0, 0.1, 0.0)
    report = SharpReport(
        [row], expected=dict(SHARP_LIMITS), window_errors={"m_beta01": [1e-6, 5e-7], "m_beta12": [1e-6, 2e-6]}
    )
    assert report.shrink_ratio() == pytest.approx(2.0)
    assert not report.criteria()["limit_errors_shrink"]


def test_sharp_error_bars_are_tight(sharp_model):
    """Test that the two-path error bars stay a small fraction of the gradient.

    Covers: sharp_constants() err_a, err_b and paths_agree on a short sweep
    """
    report = sharp_constants([64, 128, 256], sharp_model, threads=1)
    for row in report.rows:
        assert abs(row.sqrt_m_grad_a - row.sqrt_m_grad_b) <= row.err_a + row.err_b
        assert row.err_a + row.err_b < 1e-3 * abs(row.sqrt_m_grad_b)
    errs = np.array([row.err_a for row in report.rows])
    assert np.all(np.diff(errs) < 0)
    assert set(report.window_errors) == {"m_beta01", "m_beta12", "sqrt_m_grad"}
