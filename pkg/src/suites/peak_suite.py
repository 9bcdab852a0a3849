"""``peak`` verb: peak-section normalizations, overlaps and jet asymptotics.

Classes
-------
PeakSuite : BaseSuite
    Tabulates ``peak_table`` and ``jet_asymptotics`` and checks the
    boundedness of their normalized residuals
"""

import logging

from src.bergman.peak_sections import PEAK_FLOOR, jet_asymptotics, peak_table
from src.numerics.fitting import bounded_check
from src.suites.base_suite import BaseSuite, Criterion, SuiteOutput

logger = logging.getLogger(__name__)


class PeakSuite(BaseSuite):
    """Peak sections of one model over an ``m`` sweep."""

    command = "peak"
    default_model = "flat_gaussian"
    default_m_list = (64, 128, 256, 512, 1024)
    default_p_list = (0, 1, 2)

    def compute(self) -> SuiteOutput:
        model = self.build_model()
        p_list = list(self.config.p_list or self.default_p_list)
        rows = peak_table(model, p_list, self.m_list, self.quad, self.threads)
        criteria = []
        for p in p_list:
            mine = [row for row in rows if row.p == p]
            verdict = bounded_check([r.m for r in mine], [r.residual for r in mine], floor=PEAK_FLOOR)
            logger.info("peak p=%d: spread %.3g, slope %.3g", p, verdict.spread, verdict.slope)
            criteria.append(Criterion(f"normalization_p{p}_bounded", verdict.bounded, verdict.spread, "peak"))

        jets = jet_asymptotics(model, self.m_list, alpha=self.config.alpha, quad=self.quad, threads=self.threads)
        for name, verdict in jets.verdicts.items():
            criteria.append(Criterion(f"jet_{name}_bounded", verdict.bounded, verdict.spread, "jets"))
        summary = {
            "model": model.describe(),
            "jet_verdicts": {name: {"spread": v.spread, "slope": v.slope} for name, v in jets.verdicts.items()},
        }
        return SuiteOutput(tables={"peak": rows, "jets": jets.rows}, summary=summary, criteria=criteria)
