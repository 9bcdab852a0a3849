"""``models`` verb: registry listing, model self-checks and the Fubini–Study
Gram oracle.

Classes
-------
ModelsSuite : BaseSuite
    Lists every registered model, checks each one's weight against its
    metric, and checks the exact monomial norms of Fubini–Study

Functions
---------
fs_gram_oracle
    Computed against exact Fubini–Study monomial norms
model_checks
    Compatibility and rotation-invariance residuals of one model
"""

import json
import logging

import numpy as np
from scipy.special import gammaln

from src.bergman.section_space import gram
from src.geometry.metric_models import MetricModel, Symmetry, fubini_study, radial_symmetry_residual, sample_points
from src.geometry.registry import build_model, describe_models
from src.suites.base_suite import BaseSuite, Criterion, SuiteOutput

logger = logging.getLogger(__name__)

GRAM_ORACLE_M = 32
GRAM_ORACLE_TOL = 1e-10
COMPAT_POINTS = 100
COMPAT_TOL = 1e-6
RADIAL_TOL = 1e-12


def fs_gram_oracle(m: int = GRAM_ORACLE_M, quad=None) -> list[tuple]:
    """``(m, j, log G_jj, log(j!(m-j)!/(m+1)!), rel_error)`` for Fubini–Study."""
    g = gram(fubini_study(), m, quad)
    j = np.arange(m + 1)
    expected = gammaln(j + 1.0) + gammaln(m - j + 1.0) - gammaln(m + 2.0)
    rel = np.abs(np.expm1(g.log_diag - expected))
    return [(m, int(i), float(a), float(b), float(e)) for i, a, b, e in zip(j, g.log_diag, expected, rel)]


def model_checks(model: MetricModel, seed: int = 0) -> tuple[float, float | None]:
    """Worst compatibility residual at seeded random points, and the
    rotation residual for radial models (``None`` otherwise)."""
    points = sample_points(model, COMPAT_POINTS, seed)
    points = points[np.abs(points) > 0]
    compat = float(np.max(model.compatibility_residual(points)))
    radial = None
    if model.symmetry is Symmetry.RADIAL:
        radii = np.linspace(0.05, model.sample_radius, 12)
        radial = radial_symmetry_residual(model, radii)
    return compat, radial


class ModelsSuite(BaseSuite):
    """Registry listing."""

    command = "models"

    def compute(self) -> SuiteOutput:
        rows, criteria = [], []
        for entry in describe_models():
            model = build_model(entry["name"])
            info = model.describe()
            compat, radial = model_checks(model, self.config.seed)
            logger.info("%s: compatibility residual %.3e", entry["name"], compat)
            rows.append(
                {
                    "name": entry["name"],
                    "symmetry": entry["symmetry"],
                    "degree_cap": entry["degree_cap"],
                    "bandwidth": info["bandwidth"],
                    "chart_radius": info["chart_radius"],
                    "compat_residual": compat,
                    "radial_residual": radial,
                    "params": json.dumps(entry["params"].get("properties", {}), sort_keys=True),
                }
            )
            criteria.append(Criterion(f"compatibility_{entry['name']}", compat < COMPAT_TOL, compat, "models"))
            if radial is not None:
                criteria.append(Criterion(f"radial_{entry['name']}", radial < RADIAL_TOL, radial, "models"))
        oracle = fs_gram_oracle(quad=self.quad)
        worst = max(row[4] for row in oracle)
        logger.info("Fubini-Study Gram oracle: worst relative error %.3e", worst)
        criteria = [
            Criterion("registry_constructible", True, float(len(rows)), "models"),
            Criterion("fs_gram_oracle", worst < GRAM_ORACLE_TOL, worst, "gram_oracle"),
            *criteria,
        ]
        return SuiteOutput(
            tables={"models": rows, "gram_oracle": oracle},
            summary={"schemas": {e["name"]: e["params"] for e in describe_models()}},
            criteria=criteria,
        )
