"""Ledger tables.

The ledger records what ran and which pass/fail flags it produced. It is an
output, never an input: nothing in the lab reads it back to drive a
computation.

Classes
-------
RunStatus : enum.Enum
    Lifecycle of a run
RunRecord : SQLModel
    One suite execution
CriterionRecord : SQLModel
    One pass/fail flag of a run
PinnedConfig : SQLModel
    A stored acceptance configuration used by ``reproduce``
"""

import enum
from datetime import datetime

from sqlalchemy import Enum
from sqlmodel import Field, Relationship, SQLModel


class RunStatus(enum.Enum):
    """Run lifecycle.

    Attributes
    ----------
    RUNNING : str
        Started, not yet finished
    PASSED : str
        Every flag passed
    FAILED : str
        At least one flag failed
    ERROR : str
        A numerical or configuration error stopped the run
    """

    RUNNING = "running"
    PASSED = "passed"
    FAILED = "failed"
    ERROR = "error"


class RunRecord(SQLModel, table=True):
    """One suite execution.

    Attributes
    ----------
    id : int | None
        Primary key, auto-generated
    command : str
        Suite verb
    model : str | None
        Model name, when the suite takes one
    config_json : str
        Resolved configuration as JSON
    version : str
        Tool version
    started_at, finished_at : datetime
        Wall-clock bounds of the run
    status : RunStatus
        Outcome
    exit_code : int | None
        Process exit status the run maps to
    criteria : list[CriterionRecord]
        Flags produced by the run
    """

    __tablename__ = "run"

    id: int | None = Field(default=None, primary_key=True)
    command: str = Field(index=True)
    model: str | None = None
    config_json: str
    version: str
    started_at: datetime = Field(default_factory=datetime.now)
    finished_at: datetime | None = None
    status: RunStatus = Field(
        default=RunStatus.RUNNING,
        sa_type=Enum(
            RunStatus,
            name="run_status",
            values_callable=lambda x: [e.value for e in x],
        ),
    )
    exit_code: int | None = None

    criteria: list["CriterionRecord"] = Relationship(back_populates="run")


class CriterionRecord(SQLModel, table=True):
    """A pass/fail flag.

    Attributes
    ----------
    id : int | None
    run_id : int
        Foreign key to ``run``
    name : str
        Flag name, unique within its run
    passed : bool
    value : float | None
        The number the flag was decided on, when there is one
    artifact : str | None
        File the value can be found in
    """

    __tablename__ = "criterion"

    id: int | None = Field(default=None, primary_key=True)
    run_id: int = Field(foreign_key="run.id", index=True)
    name: str
    passed: bool
    value: float | None = None
    artifact: str | None = None

    run: RunRecord = Relationship(back_populates="criteria")


class PinnedConfig(SQLModel, table=True):
    """An acceptance configuration.

    Attributes
    ----------
    label : str
        Primary key; also the artifact sub-directory
    criteria : str
        JSON mapping of acceptance criterion numbers to the flags of this
        run that decide them
    config_json : str
        ``RunConfig`` fields as JSON (without ``output_dir``)
    """

    __tablename__ = "pinned_config"

    label: str = Field(primary_key=True)
    criteria: str
    config_json: str
