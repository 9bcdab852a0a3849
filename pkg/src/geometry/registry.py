"""Model registry: names, parameter schemas and construction.

Functions
---------
model_names
    Registered model names
parameter_schema
    JSON schema of a model's parameters
build_model
    Validate parameters and construct a model by name
describe_models
    Registry listing used by the ``models`` verb
"""

import difflib
import logging
from typing import Callable

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from src.errors import ConfigError
from src.geometry import metric_models, radial_profiles
from src.geometry.metric_models import MetricModel, PositivityDiagnostic

logger = logging.getLogger(__name__)


class _Params(BaseModel):
    model_config = ConfigDict(extra="forbid")


class NoParams(_Params):
    pass


class FlatParams(_Params):
    chart_radius: float = Field(default=8.0, gt=0)


class SharpParams(_Params):
    amplitude: float = 1.0 / 400.0


class OscillationParams(_Params):
    k: int = Field(default=8, ge=1)


class FamilyParams(_Params):
    k: int = Field(default=2, ge=1, le=5)


class CuspParams(_Params):
    n: int = Field(default=2, ge=1)
    theta: float = Field(default=0.5, gt=0, lt=1)


_REGISTRY: dict[str, tuple[type[_Params], Callable, str, int]] = {
    "fubini_study": (NoParams, lambda p: metric_models.fubini_study(), "radial", 4096),
    "flat_gaussian": (FlatParams, lambda p: metric_models.flat_gaussian(p.chart_radius), "radial", 4096),
    "sharp_example": (SharpParams, lambda p: metric_models.sharp_example(amplitude=p.amplitude), "angular_band", 2048),
    "oscillation_family": (OscillationParams, lambda p: metric_models.oscillation_family(p.k), "generic", 128),
    "family_7_2": (FamilyParams, lambda p: radial_profiles.family_7_2(p.k), "radial", 4096),
    "cusp_family": (CuspParams, lambda p: radial_profiles.cusp_family(p.n, p.theta), "radial", 4096),
}


def model_names() -> list[str]:
    return list(_REGISTRY)


def _entry(name: str):
    try:
        return _REGISTRY[name]
    except KeyError as e:
        suggestions = difflib.get_close_matches(name, _REGISTRY, n=3, cutoff=0.4)
        raise ConfigError(f"unknown model '{name}'", suggestions or model_names()) from e


def parameter_schema(name: str) -> dict:
    return _entry(name)[0].model_json_schema()


def build_model(name: str, params: dict | None = None) -> MetricModel:
    """Construct a registered model.

    Parameters
    ----------
    name : str
        Registry name
    params : dict, optional
        Model parameters, validated against the model's schema

    Returns
    -------
    MetricModel

    Raises
    ------
    ConfigError
        Unknown name (with close matches), invalid parameters, or an
        oscillation index below the positivity threshold
    """
    schema, factory, _, _ = _entry(name)
    try:
        parsed = schema.model_validate(params or {})
    except ValidationError as e:
        raise ConfigError(f"invalid parameters for {name}: {e.errors()[0]['msg']}") from e
    model = factory(parsed)
    if isinstance(model, PositivityDiagnostic):
        raise ConfigError(
            f"oscillation_family(k={model.k}) is not positive (min g = {model.min_metric:.3e}); "
            f"use k >= {model.threshold}"
        )
    logger.debug("built model %r", model)
    return model


def describe_models() -> list[dict]:
    """One entry per model: name, symmetry, parameter schema and degree cap."""
    out = []
    for name, (schema, _, symmetry, cap) in _REGISTRY.items():
        out.append({"name": name, "symmetry": symmetry, "degree_cap": cap, "params": schema.model_json_schema()})
    return out
