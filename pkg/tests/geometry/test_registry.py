"""
Tests for the model registry.
"""

import pytest

from src.errors import ConfigError
from src.geometry.metric_models import FlatGaussian, FubiniStudy
from src.geometry.registry import build_model, describe_models, model_names, parameter_schema


def test_model_names():
    """Covers: model_names()"""
    assert model_names() == [
        "fubini_study",
        "flat_gaussian",
        "sharp_example",
        "oscillation_family",
        "family_7_2",
        "cusp_family",
    ]


def test_build_model():
    """Covers: build_model() with default and explicit parameters"""
    assert isinstance(build_model("fubini_study"), FubiniStudy)
    model = build_model("flat_gaussian", {"chart_radius": 4.0})
    assert isinstance(model, FlatGaussian)
    assert model.chart_radius == 4.0


def test_unknown_model_suggestions():
    """Covers: build_model() ConfigError with close matches"""
    with pytest.raises(ConfigError) as e:
        build_model("fubini")
    assert "unknown model" in e.value.detail
    assert "fubini_study" in e.value.suggestions
    assert e.value.exit_code == 2


@pytest.mark.parametrize(
    "name, params",
    [("flat_gaussian", {"chart_radius": -1}), ("fubini_study", {"radius": 1}), ("family_7_2", {"k": 9})],
)
def test_invalid_parameters(name, params):
    """Covers: build_model() parameter validation"""
    with pytest.raises(ConfigError) as e:
        build_model(name, params)
    assert name in e.value.detail


def test_oscillation_below_threshold():
    """Covers: build_model() turning a PositivityDiagnostic into a ConfigError"""
    with pytest.raises(ConfigError) as e:
        build_model("oscillation_family", {"k": 1})
    assert "use k >=" in e.value.detail


def test_schemas_and_listing():
    """Covers: parameter_schema(), describe_models()"""
    assert set(parameter_schema("cusp_family")["properties"]) == {"n", "theta"}
    listing = describe_models()
    assert [entry["name"] for entry in listing] == model_names()
    assert {entry["symmetry"] for entry in listing} == {"radial", "angular_band", "generic"}
