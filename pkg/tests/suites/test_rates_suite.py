"""
Tests for the rates verb.
"""

import pytest

from src.suites.rates_suite import RatesSuite


def test_rates_fubini_study(run_config):
    """Test that Fubini–Study is reproduced exactly at every m.

    Covers: RatesSuite.compute() with the exactness flag
    """
    config = run_config("rates", model={"name": "fubini_study"}, m_list=[4, 8, 16, 32], export_gram=True)
    result = RatesSuite(config, threads=1).run(raise_on_failure=False)
    flags = {c.name: c for c in result.criteria}
    assert flags["sup_err_exact"].passed
    assert flags["sup_err_exact"].value < 1e-9
    assert flags["sup_err_exact"].artifact.endswith("rates.csv")
    assert (config.output_dir / "gram_fubini_study_m32.csv").exists()
    assert set(result.summary["slopes"]) >= {"sup_err", "grad_err_x0"}


@pytest.mark.slow
def test_rates_sharp(run_config):
    """Covers: RatesSuite on the default sharp sweep"""
    result = RatesSuite(run_config("rates")).run(raise_on_failure=False)
    flags = {c.name: c.passed for c in result.criteria}
    assert flags["sup_err_slope"]
    assert flags["grad_err_x0_slope"]
    assert flags["c1alpha_band"]
