"""
Tests for the peak verb.
"""

from src.suites.peak_suite import PeakSuite


def test_peak_flat(run_config):
    """Covers: PeakSuite.compute() on the flat Gaussian"""
    config = run_config("peak", m_list=[64, 128, 256], p_list=[0, 1])
    result = PeakSuite(config, threads=1).run(raise_on_failure=False)
    flags = {c.name: c.passed for c in result.criteria}
    assert flags["normalization_p0_bounded"]
    assert flags["normalization_p1_bounded"]
    assert "normalization_p2_bounded" not in flags
    assert {"jet_f0_bounded", "jet_f1_bounded", "jet_f2_bounded"} <= set(flags)
    assert {p.name for p in result.artifacts} == {"peak.csv", "jets.csv", "peak.json"}
