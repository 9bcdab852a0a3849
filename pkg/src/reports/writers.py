"""CSV and JSON report writers.

CSVs follow the column orders in ``src.reports.schema`` and are written by
pandas with ``float_format="%.17g"`` so that reruns with the same
configuration are byte-identical. JSON summaries embed the resolved run
configuration, the tool version and the quadrature settings.

Functions
---------
to_frame
    Rows (dataclasses, mappings or tuples) to an ordered ``DataFrame``
write_csv
    Write one table
write_json
    Write a summary with the config echo
to_plain
    Convert numpy scalars, dataclasses and paths to JSON-ready values
"""

import dataclasses
import enum
import json
import logging
import math
from pathlib import Path

import numpy as np
import pandas as pd
from pydantic import BaseModel

from src import __version__
from src.reports.schema import columns

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.17g"


def to_plain(value):
    """JSON-ready copy of ``value``; non-finite floats become ``None``."""
    if isinstance(value, BaseModel):
        return to_plain(value.model_dump(mode="json"))
    if dataclasses.is_dataclass(value) and not isinstance(value, type):
        return to_plain(dataclasses.asdict(value))
    if isinstance(value, dict):
        return {str(k): to_plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, np.ndarray)):
        return [to_plain(v) for v in value]
    if isinstance(value, enum.Enum):
        return value.value
    if isinstance(value, Path):
        return str(value)
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if math.isfinite(value) else None
    if isinstance(value, (complex, np.complexfloating)):
        return {"re": to_plain(value.real), "im": to_plain(value.imag)}
    return value


def _as_record(row, names: tuple[str, ...]) -> dict:
    if dataclasses.is_dataclass(row):
        row = dataclasses.asdict(row)
    if isinstance(row, dict):
        return {name: row.get(name) for name in names}
    if len(row) != len(names):
        raise ValueError(f"row of length {len(row)} does not match {len(names)} columns")
    return dict(zip(names, row))


def to_frame(table: str, rows) -> pd.DataFrame:
    """Ordered frame for ``table``.

    Parameters
    ----------
    table : str
        Name registered in ``src.reports.schema.TABLES``
    rows : Iterable
        Dataclass instances, mappings or tuples in column order

    Returns
    -------
    pd.DataFrame
    """
    names = columns(table)
    return pd.DataFrame([_as_record(row, names) for row in rows], columns=list(names))


def write_csv(table: str, rows, output_dir, stem: str | None = None) -> Path:
    """Write ``rows`` to ``<output_dir>/<stem or table>.csv`` and return the path."""
    path = Path(output_dir) / f"{stem or table}.csv"
    path.parent.mkdir(parents=True, exist_ok=True)
    to_frame(table, rows).to_csv(path, index=False, float_format=FLOAT_FORMAT)
    logger.info("wrote %s", path)
    return path


def write_json(stem: str, payload: dict, config, quadrature, output_dir) -> Path:
    """Write ``payload`` with the config echo to ``<output_dir>/<stem>.json``.

    Parameters
    ----------
    stem : str
        File name without extension
    payload : dict
        Suite summary (criteria, slopes, limits, tables)
    config : pydantic.BaseModel | dict
        Resolved run configuration
    quadrature : QuadSpec | dict
        Quadrature settings in effect
    output_dir : path-like
        Target directory

    Returns
    -------
    Path
    """
    path = Path(output_dir) / f"{stem}.json"
    path.parent.mkdir(parents=True, exist_ok=True)
    document = {
        "version": __version__,
        "config": to_plain(config),
        "quadrature": to_plain(quadrature),
        **to_plain(payload),
    }
    path.write_text(json.dumps(document, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    logger.info("wrote %s", path)
    return path
