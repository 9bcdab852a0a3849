"""
Tests for the models verb.
"""

import numpy as np

from src.geometry.metric_models import fubini_study, sharp_example
from src.suites.models_suite import COMPAT_TOL, ModelsSuite, fs_gram_oracle, model_checks


def test_fs_gram_oracle():
    """Covers: fs_gram_oracle() against exact monomial norms"""
    rows = fs_gram_oracle(16)
    assert [row[1] for row in rows] == list(range(17))
    assert max(row[4] for row in rows) < 1e-10


def test_model_checks():
    """Covers: model_checks() for radial and non-radial models"""
    compat, radial = model_checks(fubini_study())
    assert compat < COMPAT_TOL
    assert radial < 1e-12
    compat, radial = model_checks(sharp_example(), seed=3)
    assert compat < COMPAT_TOL
    assert radial is None


def test_models_suite(run_config, session):
    """Test the registry listing and its flags.

    Covers: ModelsSuite.compute(), ModelsSuite.run()
    """
    result = ModelsSuite(run_config("models")).run(session, raise_on_failure=False)
    names = [c.name for c in result.criteria]
    assert names[:2] == ["registry_constructible", "fs_gram_oracle"]
    assert "compatibility_sharp_example" in names
    assert "radial_fubini_study" in names
    assert "radial_sharp_example" not in names
    flags = {c.name: c.passed for c in result.criteria}
    assert flags["fs_gram_oracle"]
    assert flags["compatibility_fubini_study"] and flags["compatibility_sharp_example"]
    assert flags["radial_fubini_study"]
    assert any(path.name == "models.csv" for path in result.artifacts)
    assert np.isfinite(result.criteria[0].value)
