"""``rates`` verb: convergence of ``g_m`` to ``g`` over an ``m`` sweep.

Classes
-------
RatesSuite : BaseSuite
    Runs ``rate_report`` and turns its criteria into flags
"""

import logging

from src.bergman.rates import rate_report
from src.bergman.section_space import export_gram_csv, gram
from src.suites.base_suite import BaseSuite, Criterion, SuiteOutput

logger = logging.getLogger(__name__)


class RatesSuite(BaseSuite):
    """Rates of ``sup |g_m - g|``, the gradient error and the Hessian bounds."""

    command = "rates"
    default_model = "sharp_example"
    default_m_list = (64, 128, 256, 512, 1024)

    def compute(self) -> SuiteOutput:
        model = self.build_model()
        report = rate_report(
            model,
            self.m_list,
            alpha=self.config.alpha,
            q=self.config.q,
            spec=self.quad,
            seed=self.config.seed,
            threads=self.threads,
        )
        if self.config.export_gram:
            for m in report.m_list:
                path = self.artifact_dir / f"gram_{model.name}_m{int(m)}.csv"
                export_gram_csv(gram(model, int(m), self.quad), path)
                logger.info("wrote %s", path)
        slopes = [
            (name, fit.slope, fit.log_constant, fit.rms_residual) for name, fit in report.slopes.items()
        ]
        flags = report.criteria()
        values = {
            "sup_err_slope": report.slopes["sup_err"].slope,
            "grad_err_x0_slope": report.slopes["grad_err_x0"].slope,
            "c1alpha_band": report.holder_band(),
        }
        criteria = [
            Criterion(name, passed, values.get(name), "slopes" if name.endswith("_slope") else "rates")
            for name, passed in flags.items()
        ]
        if model.name == "fubini_study":
            # balanced for every m
            worst = float(max(report.column("sup_err")))
            criteria.append(Criterion("sup_err_exact", report.exact("sup_err"), worst, "rates"))
        summary = {
            "model": model.describe(),
            "slopes": {name: {"slope": fit.slope, "defined": fit.defined} for name, fit in report.slopes.items()},
            "holder_normalized": list(report.holder_normalized()),
            "exact": {name: report.exact(name) for name in ("sup_err", "grad_err_x0", "c1alpha_mod")},
        }
        return SuiteOutput(tables={"rates": report.rows, "slopes": slopes}, summary=summary, criteria=criteria)
