"""Ledger table initialization and pinned-config setup.

Functions
---------
drop_all_tables : None
    Drop every ledger table
create_tables : None
    Create every ledger table
initialize_pinned_configs : list[PinnedConfig]
    Store the acceptance configurations in the ledger
main : None
    Reset the ledger of an output directory
"""

import json
import logging
import sys

from sqlalchemy.engine import Engine
from sqlalchemy.exc import SQLAlchemyError
from sqlmodel import Session, SQLModel

from src.db import models
from src.db.db import get_engine, get_session
from src.db_init.acceptance_configs import ACCEPTANCE_CONFIGS
from src.errors import LedgerError

logger = logging.getLogger(__name__)


def drop_all_tables(db_engine: Engine):
    """Drop all ledger tables.

    Parameters
    ----------
    db_engine : sqlalchemy.engine.Engine
        Engine of the ledger
    """
    SQLModel.metadata.drop_all(db_engine)


def create_tables(db_engine: Engine):
    """Create all ledger tables that do not exist yet.

    Parameters
    ----------
    db_engine : sqlalchemy.engine.Engine
        Engine of the ledger
    """
    SQLModel.metadata.create_all(db_engine)


def initialize_pinned_configs(session: Session) -> list[models.PinnedConfig]:
    """Store (or refresh) every entry of ``ACCEPTANCE_CONFIGS``.

    Parameters
    ----------
    session : sqlmodel.Session
        Ledger session

    Returns
    -------
    list[PinnedConfig]
        The stored rows, in pinned order

    Raises
    ------
    LedgerError
        If the rows cannot be written
    """
    rows = []
    try:
        for entry in ACCEPTANCE_CONFIGS:
            row = models.PinnedConfig(
                label=entry["label"],
                criteria=json.dumps(entry["flags"], sort_keys=True),
                config_json=json.dumps(entry["config"], sort_keys=True),
            )
            rows.append(session.merge(row))
        session.commit()
    except SQLAlchemyError as e:
        session.rollback()
        raise LedgerError(f"Ledger error: {e}") from e
    logger.debug("stored %d pinned configs", len(rows))
    return rows


def main(output_dir: str = "results"):
    """Drop, recreate and seed the ledger of ``output_dir``."""
    engine = get_engine(output_dir)
    drop_all_tables(engine)
    create_tables(engine)

    session_gen = get_session(output_dir)
    session = next(session_gen)
    try:
        initialize_pinned_configs(session)
    finally:
        session_gen.close()


if __name__ == "__main__":
    main(*sys.argv[1:2])
