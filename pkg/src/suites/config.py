"""Run configuration.

Classes
-------
ModelChoice : pydantic.BaseModel
    Registry name plus parameters
RunConfig : pydantic.BaseModel
    Everything a suite needs to run

Functions
---------
parse_int_list
    ``"64,128,256"`` or the doubling range ``"64..1024"``
load_config
    Read a JSON config file with line-precise validation errors
resolve_config
    Merge a loaded config with explicit overrides and validate
"""

import json
import logging
from pathlib import Path
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from src.errors import ConfigError
from src.numerics.quadrature import QuadSpec

logger = logging.getLogger(__name__)

COMMANDS = ("models", "rates", "peak", "fourier", "sharp", "families", "oscillation", "all")


class ModelChoice(BaseModel):
    """A registry model and its parameters."""

    model_config = ConfigDict(extra="forbid")

    name: str
    params: dict = Field(default_factory=dict)


class RunConfig(BaseModel):
    """Resolved configuration of one run.

    Attributes
    ----------
    command : str
        One of ``COMMANDS``
    model : ModelChoice | None
        Model under test; each suite has its own default
    m_list : list[int] | None
        Strictly ascending tensor powers; suite default when omitted
    p_list : list[int] | None
        Peak indices
    k_list : list[int] | None
        Family, mode or moment indices, depending on the suite
    alpha : float
        Hölder exponent in ``(0, 1)``
    q : float
        Sobolev exponent, ``> 1``
    quadrature : QuadSpec
        Quadrature overrides
    output_dir : Path
        Directory receiving CSV/JSON reports; the ledger is kept beside it
    seed : int
        Seed for random cross-check points and pairs
    format : str
        ``csv``, ``json`` or ``both``
    cusp : bool
        Add the cusp family demo to ``families``
    export_gram : bool
        Write the Gram matrix of every ``m`` in ``rates``
    """

    model_config = ConfigDict(extra="forbid")

    command: Literal["models", "rates", "peak", "fourier", "sharp", "families", "oscillation", "all"]
    model: ModelChoice | None = None
    m_list: list[int] | None = None
    p_list: list[int] | None = None
    k_list: list[int] | None = None
    alpha: float = Field(default=0.5, gt=0, lt=1)
    q: float = Field(default=2.0, gt=1)
    quadrature: QuadSpec = Field(default_factory=QuadSpec)
    output_dir: Path = Path("results")
    seed: int = 0
    format: Literal["csv", "json", "both"] = "both"
    cusp: bool = False
    export_gram: bool = False

    @field_validator("m_list")
    @classmethod
    def _ascending(cls, value):
        if value is None:
            return value
        if not value or any(m < 1 for m in value):
            raise ValueError("m_list must contain positive integers")
        if any(b <= a for a, b in zip(value[:-1], value[1:])):
            raise ValueError("m_list must be strictly ascending")
        return value

    @field_validator("p_list", "k_list")
    @classmethod
    def _non_negative(cls, value):
        if value is not None and any(v < 0 for v in value):
            raise ValueError("indices must be non-negative")
        return value

    def for_suite(self, command: str) -> "RunConfig":
        """Copy for one suite of ``all``; sweeps fall back to that suite's defaults."""
        return self.model_copy(update={"command": command, "m_list": None, "p_list": None, "k_list": None})

    @property
    def writes_csv(self) -> bool:
        return self.format in ("csv", "both")

    @property
    def writes_json(self) -> bool:
        return self.format in ("json", "both")


def parse_int_list(text: str) -> list[int]:
    """Parse ``"a,b,c"`` or ``"lo..hi"`` (doubling from ``lo`` up to ``hi``).

    Raises
    ------
    ConfigError
        If the text is malformed
    """
    text = text.strip()
    try:
        if ".." in text:
            lo, hi = (int(part) for part in text.split(".."))
            if lo < 1 or hi < lo:
                raise ValueError
            out = []
            m = lo
            while m <= hi:
                out.append(m)
                m *= 2
            return out
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError as e:
        raise ConfigError(f"cannot parse integer list '{text}' (use 'a,b,c' or 'lo..hi')") from e


def _line_of(text: str, loc: tuple) -> int | None:
    """Line of the innermost key of ``loc`` found in order in ``text``."""
    pos = 0
    found = None
    for part in loc:
        if not isinstance(part, str):
            continue
        hit = text.find(f'"{part}"', pos)
        if hit < 0:
            break
        pos = hit
        found = text.count("\n", 0, hit) + 1
    return found


def _describe(error: ValidationError, text: str | None = None, source: str = "config") -> str:
    lines = []
    for item in error.errors():
        path = ".".join(str(part) for part in item["loc"]) or "<root>"
        where = source
        if text is not None:
            line = _line_of(text, item["loc"])
            if line is not None:
                where = f"{source}:{line}"
        lines.append(f"{where}: {path}: {item['msg']}")
    return "; ".join(lines)


def load_config(path) -> tuple[dict, str]:
    """Read a JSON config file.

    Returns
    -------
    tuple[dict, str]
        The parsed mapping and the raw text (for line lookups)

    Raises
    ------
    ConfigError
        Unreadable file, invalid JSON (with line and column) or a non-object
        document
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError(f"cannot read config {path}: {e.strerror}") from e
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(f"{path}:{e.lineno}:{e.colno}: {e.msg}") from e
    if not isinstance(data, dict):
        raise ConfigError(f"{path}:1: config must be a JSON object")
    return data, text


def resolve_config(overrides: dict, config_path=None) -> RunConfig:
    """Validate a config, letting explicit ``overrides`` win over the file.

    Parameters
    ----------
    overrides : dict
        Fields set on the command line; ``None`` values are ignored and
        mappings are merged into the loaded ones
    config_path : path-like, optional
        JSON file with a full or partial config

    Returns
    -------
    RunConfig

    Raises
    ------
    ConfigError
        With ``file:line: field: message`` entries for every invalid field
    """
    data, text, source = {}, None, "config"
    if config_path is not None:
        data, text = load_config(config_path)
        source = str(config_path)
    merged = dict(data)
    for key, value in overrides.items():
        if value is None:
            continue
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = {**merged[key], **value}
        else:
            merged[key] = value
    try:
        config = RunConfig.model_validate(merged)
    except ValidationError as e:
        raise ConfigError(_describe(e, text, source)) from e
    logger.debug("resolved config: %s", config.model_dump_json())
    return config
