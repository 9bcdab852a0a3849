"""``families`` verb: the lower-bound family and, optionally, the cusp family.

Classes
-------
FamiliesSuite : BaseSuite
    ``g_m(1) >= 1 / (4 pi (m + 1)^2)`` for every tested member, ``g(1)``
    decreasing along the family, and the model invariants
"""

import logging

from src.analysis.examples_suite import cusp_criteria, cusp_demo, family_7_2_gap, family_model_checks
from src.suites.base_suite import BaseSuite, Criterion, SuiteOutput

logger = logging.getLogger(__name__)

SYMMETRY_TOL = 1e-10
CUSP_N = (1, 2, 3)


class FamiliesSuite(BaseSuite):
    """Example families."""

    command = "families"
    default_m_list = (9, 21)
    default_k_list = (1, 2)

    @property
    def model_name(self) -> str:
        return "family_7_2"

    def compute(self) -> SuiteOutput:
        k_list = list(self.config.k_list or self.default_k_list)
        gaps = [family_7_2_gap(k, m, self.quad) for k in k_list for m in self.m_list]
        checks = [family_model_checks(k, seed=self.config.seed) for k in k_list]

        criteria = [
            Criterion(f"lower_bound_k{g.k}_m{g.m}", g.passed, g.bergman_value / g.lower_bound, "families")
            for g in gaps
        ]
        worst_symmetry = max(g.symmetry_residual for g in gaps)
        criteria.append(Criterion("gram_symmetry", worst_symmetry < SYMMETRY_TOL, worst_symmetry, "families"))
        metric_values = [c for c in gaps if c.m == self.m_list[0]]
        decreasing = all(b.metric_value < a.metric_value for a, b in zip(metric_values[:-1], metric_values[1:]))
        criteria.append(Criterion("metric_value_decreasing", decreasing, metric_values[-1].metric_value, "families"))
        criteria.append(
            Criterion(
                "sec_bounded",
                all(c["sec_bounded"] for c in checks),
                max(c["max_abs_sec"] for c in checks),
                "family_models",
            )
        )
        tables = {"families": gaps, "family_models": checks}

        if self.config.cusp:
            rows = cusp_demo(CUSP_N, self.m_list, quad=self.quad)
            tables["cusp"] = rows
            criteria.extend(Criterion(name, passed, None, "cusp") for name, passed in cusp_criteria(rows).items())
        logger.info("families: %d gap checks, %d failed", len(gaps), sum(not g.passed for g in gaps))
        return SuiteOutput(tables=tables, summary={"family_models": checks}, criteria=criteria)
