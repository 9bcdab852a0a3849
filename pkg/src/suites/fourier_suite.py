"""``fourier`` verb: angular profiles, their ODE and the sharp bounds.

Classes
-------
FourierSuite : BaseSuite
    Bound tables for the standard functions and the model-induced ones,
    plus ODE residuals on ``[0.1, 0.4]``
"""

import logging
import math

import numpy as np

from src.analysis.fourier_bounds import bound_table, check_bound, model_functions, ode_residual, standard_functions
from src.suites.base_suite import BaseSuite, Criterion, SuiteOutput

logger = logging.getLogger(__name__)

SHARPNESS_TOL = 1e-4
ODE_TOL = 1e-6
ODE_RADII = tuple(np.linspace(0.1, 0.4, 7))
# (function, mode) pairs with closed-form ODE sides
ODE_CASES = (("r2logr_cos2", 2), ("re_z2", 2), ("abs_sq", 0))
# (function, mode, r_max) pairs tabulated and bounded
BOUND_CASES = (
    ("r2logr_cos2", 2, 0.3),
    ("abs_sq", 0, 0.3),
    ("cubic_bump", 1, 0.3),
    ("r4logr_cos4", 4, 0.3),
)


class FourierSuite(BaseSuite):
    """Fourier-profile bounds."""

    command = "fourier"
    default_model = "sharp_example"

    def compute(self) -> SuiteOutput:
        functions = standard_functions()
        model = self.build_model()
        induced = model_functions(model)
        k_list = list(self.config.k_list or (0, 1, 2))

        table, results = [], {}
        cases = list(BOUND_CASES) + [(name, k, 0.3) for name in induced for k in k_list]
        for name, k, r_max in cases:
            tf = functions.get(name) or induced[name]
            result = check_bound(tf, k, r_max, self.quad, self.threads)
            results[(name, k)] = result
            radii = np.geomspace(1e-3 * r_max, r_max, 25)
            table.extend((name, k, *row) for row in bound_table(tf, k, radii, self.quad, self.threads))

        ode_rows = []
        for name, k in ODE_CASES:
            residuals = ode_residual(functions[name], k, ODE_RADII, self.quad, self.threads)
            ode_rows.extend((name, k, float(r), float(v)) for r, v in zip(ODE_RADII, residuals))
        worst_ode = max(abs(row[3]) for row in ode_rows)

        sharp = results[("r2logr_cos2", 2)].sup
        criteria = [
            Criterion("log_bound_sharp", abs(sharp - math.pi) < SHARPNESS_TOL, sharp, "fourier"),
            Criterion("no_log_k0_finite", math.isfinite(results[("abs_sq", 0)].sup), results[("abs_sq", 0)].sup, "fourier"),
            Criterion("ode_residual", worst_ode < ODE_TOL, worst_ode, "ode"),
        ]
        induced_sups = [results[(name, k)].sup for name in induced for k in k_list]
        criteria.append(
            Criterion("model_functions_finite", all(math.isfinite(s) for s in induced_sups), max(induced_sups), "fourier")
        )
        summary = {
            "bounds": [
                {"name": r.name, "k": r.k, "jet_order": r.jet_order, "sup": r.sup, "r_at_sup": r.r_at_sup}
                for r in results.values()
            ],
            "verification": {name: functions[name].verify() for name in ("r2logr_cos2", "abs_sq", "r4logr_cos4")},
        }
        logger.info("fourier: sharp ratio %.8f, worst ODE residual %.3e", sharp, worst_ode)
        return SuiteOutput(tables={"fourier": table, "ode": ode_rows}, summary=summary, criteria=criteria)
