"""``sharp`` verb: moment asymptotics and sharp constants of the sharp example.

Classes
-------
SharpSuite : BaseSuite
    Overlap and norm moments against their leading terms, and the two-path
    computation of ``m beta_01``, ``m beta_12`` and ``sqrt(m) dg_m(0)``
"""

import logging

from src.analysis.examples_suite import (
    PUBLISHED,
    sharp_constants,
    sharp_norm_asymptotics,
    sharp_overlap_asymptotics,
)
from src.suites.base_suite import BaseSuite, Criterion, SuiteOutput

logger = logging.getLogger(__name__)

MOMENT_TOL = 0.05
DIRECT_M = 400
RICHARDSON_LADDER = (512, 1024, 2048)


class SharpSuite(BaseSuite):
    """Sharp-rate constants."""

    command = "sharp"
    default_model = "sharp_example"
    default_m_list = (128, 256, 512, 1024)

    def _moments(self, model, k_list):
        rows, criteria = [], []
        for k in k_list:
            # the k >= 1 overlaps carry O(1/m) corrections too large to test directly
            ladder = [DIRECT_M] if k == 0 else list(RICHARDSON_LADDER)
            overlap = sharp_overlap_asymptotics(ladder, k, model, self.quad, self.threads)
            ratio = overlap.ratios[0] if k == 0 else overlap.extrapolated()[0]
            criteria.append(Criterion(f"overlap_k{k}_within_5pct", abs(ratio - 1) < MOMENT_TOL, ratio, "moments"))
            norm = sharp_norm_asymptotics([DIRECT_M], k, model, self.quad, self.threads)
            criteria.append(
                Criterion(f"norm_k{k}_within_5pct", abs(norm.ratios[0] - 1) < MOMENT_TOL, norm.ratios[0], "moments")
            )
            rows.extend(("overlap", k, *row) for row in overlap.rows)
            rows.extend(("norm", k, *row) for row in norm.rows)
        return rows, criteria

    def compute(self) -> SuiteOutput:
        model = self.build_model()
        k_list = list(self.config.k_list or (0, 1, 2))
        moment_rows, criteria = self._moments(model, k_list)

        report = sharp_constants(self.m_list, model, self.quad, self.threads)
        last = report.rows[-1]
        values = {
            "m_beta01_within_10pct": last.m_beta01,
            "m_beta12_within_10pct": last.m_beta12,
            "sqrt_m_grad_within_10pct": last.sqrt_m_grad_b,
            "paths_agree": max(abs(r.sqrt_m_grad_a - r.sqrt_m_grad_b) for r in report.rows),
            "limit_errors_shrink": report.shrink_ratio(),
        }
        criteria.extend(Criterion(name, passed, values[name], "sharp") for name, passed in report.criteria().items())
        summary = {
            "expected": report.expected,
            "published": PUBLISHED,
            "limits": {name: {"value": v, "error": e} for name, (v, e) in report.limits.items()},
            "window_errors": report.window_errors,
        }
        logger.info("sharp: limits %s", summary["limits"])
        return SuiteOutput(tables={"sharp": report.rows, "moments": moment_rows}, summary=summary, criteria=criteria)
