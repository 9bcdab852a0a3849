"""``oscillation`` verb: the oscillating family.

Classes
-------
OscillationSuite : BaseSuite
    L1 distances of ``k^4 phi_k`` from fixed references, the curvature
    identity and the Bergman Hessian gap
"""

import logging

from src.analysis.examples_suite import (
    F_REFERENCES,
    hessian_gap_nondecreasing,
    oscillation_hessian_gap,
    oscillation_identity,
    oscillation_identity_bounded,
    oscillation_l1,
    oscillation_l1_above_floor,
)
from src.suites.base_suite import BaseSuite, Criterion, SuiteOutput

logger = logging.getLogger(__name__)


class OscillationSuite(BaseSuite):
    """Oscillation obstruction."""

    command = "oscillation"
    default_m_list = (32,)
    default_k_list = (8, 12, 16)

    @property
    def model_name(self) -> str:
        return "oscillation_family"

    def compute(self) -> SuiteOutput:
        k_list = list(self.config.k_list or self.default_k_list)
        l1_rows, criteria = [], []
        for f_ref in F_REFERENCES:
            rows = oscillation_l1(k_list, f_ref)
            l1_rows.extend((f_ref, k, value) for k, value in rows)
            criteria.append(
                Criterion(
                    f"l1_above_floor_{f_ref}",
                    oscillation_l1_above_floor(rows, f_ref),
                    min(value for _, value in rows),
                    "oscillation_l1",
                )
            )
        identity = oscillation_identity(k_list)
        criteria.append(
            Criterion("curvature_identity_bounded", oscillation_identity_bounded(identity), max(r[2] for r in identity), "oscillation_identity")
        )
        hessian_rows = []
        for m in self.m_list:
            gaps = oscillation_hessian_gap(m, k_list, quad=self.quad, threads=self.threads)
            hessian_rows.extend((m, k, gap) for k, gap in gaps)
            criteria.append(
                Criterion(
                    f"hessian_gap_nondecreasing_m{m}", hessian_gap_nondecreasing(gaps), gaps[-1][1], "oscillation_hessian"
                )
            )
        logger.info("oscillation: %d flags", len(criteria))
        return SuiteOutput(
            tables={
                "oscillation_l1": l1_rows,
                "oscillation_identity": identity,
                "oscillation_hessian": hessian_rows,
            },
            criteria=criteria,
        )
