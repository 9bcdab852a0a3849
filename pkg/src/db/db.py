"""Run-ledger engine configuration.

Runs writing into an output directory share a SQLite ledger kept beside it
as ``<output_dir>.<ledger name>``, so the directory itself holds only the
reports. ``BERGMAN_LEDGER_PATH`` moves every ledger to one file and
``BERGMAN_LEDGER_NAME`` renames the sibling file (see ``src.settings``).

Functions
---------
ledger_path
    Ledger file for an output directory
ledger_url
    SQLAlchemy URL of that file
get_engine
    Cached engine per ledger URL
get_session
    Session generator with setup and teardown

Notes
-----
Engines are created with ``echo=False``; SQL statements are not part of the
lab's log output.
"""

from functools import lru_cache
from pathlib import Path

from sqlalchemy.engine import Engine
from sqlmodel import Session, create_engine

from src import settings


def ledger_path(output_dir) -> Path:
    """``BERGMAN_LEDGER_PATH`` if set, else ``<output_dir>.<ledger name>``."""
    if settings.LEDGER_PATH:
        return Path(settings.LEDGER_PATH).resolve()
    out = Path(output_dir).resolve()
    return out.with_name(f"{out.name}.{settings.LEDGER_NAME}")


def ledger_url(output_dir) -> str:
    return f"sqlite:///{ledger_path(output_dir)}"


@lru_cache(maxsize=None)
def _engine_for(url: str) -> Engine:
    return create_engine(url, echo=False, connect_args={"check_same_thread": False})


def get_engine(output_dir) -> Engine:
    """Engine for the ledger of ``output_dir``, creating both directories if needed."""
    Path(output_dir).mkdir(parents=True, exist_ok=True)
    ledger_path(output_dir).parent.mkdir(parents=True, exist_ok=True)
    return _engine_for(ledger_url(output_dir))


def get_session(output_dir):
    """
    Get a ledger session. Handles setup and teardown of the session.

    Yields
    ------
    Session
        A session bound to the ledger of ``output_dir``
    """
    with Session(get_engine(output_dir)) as session:
        yield session
