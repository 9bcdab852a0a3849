"""
Base class for suites.

A suite turns a ``RunConfig`` into report tables and pass/fail flags,
writes the CSV/JSON artifacts and records the run in the ledger. Each verb
of the command line inherits from ``BaseSuite`` and implements
``compute``.
"""

import logging
from dataclasses import dataclass, field
from datetime import datetime
from pathlib import Path

from sqlalchemy.exc import SQLAlchemyError
from sqlmodel import Session

from src import __version__
from src.db.models import CriterionRecord, RunRecord, RunStatus
from src.errors import ConfigError, LabError, LedgerError, SuiteFailure
from src.geometry.metric_models import MetricModel
from src.geometry.registry import build_model
from src.reports.writers import to_frame, write_csv, write_json
from src.suites.config import RunConfig

logger = logging.getLogger(__name__)


@dataclass
class Criterion:
    """A pass/fail flag.

    Attributes
    ----------
    name : str
        Flag name
    passed : bool
        Verdict
    value : float | None
        Number the verdict was decided on
    table : str | None
        Table holding the underlying rows; resolved to a file on write
    artifact : str | None
        Path of that file once written
    """

    name: str
    passed: bool
    value: float | None = None
    table: str | None = None
    artifact: str | None = None

    def __post_init__(self):
        self.passed = bool(self.passed)
        if self.value is not None:
            self.value = float(self.value)


@dataclass
class SuiteOutput:
    """What ``compute`` returns: tables by name, a JSON summary and flags."""

    tables: dict = field(default_factory=dict)
    summary: dict = field(default_factory=dict)
    criteria: list = field(default_factory=list)


@dataclass
class SuiteResult:
    """Outcome of ``BaseSuite.run``.

    Attributes
    ----------
    command : str
    criteria : list[Criterion]
    artifacts : list[Path]
    summary : dict
    run_id : int | None
        Ledger id, when a session was given
    """

    command: str
    criteria: list
    artifacts: list
    summary: dict = field(default_factory=dict)
    run_id: int | None = None

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.criteria)

    @property
    def failed(self) -> list[str]:
        return [c.name for c in self.criteria if not c.passed]


class BaseSuite:
    """Base class for suites.

    Attributes
    ----------
    command : str
        Verb of the suite
    default_model : str | None
        Registry model used when the config names none
    default_m_list : tuple[int, ...]
        Sweep used when the config gives none
    config : RunConfig
        Resolved configuration
    artifact_dir : Path
        Where CSV/JSON files go; the config's ``output_dir`` by default
    threads : int | None
        Worker-pool size override

    Methods
    -------
    compute : SuiteOutput
        Run the numerics; implemented by subclasses
    write : list[Path]
        Write the tables and the JSON summary
    record_start : RunRecord
        Add a running entry to the ledger
    record_finish : RunRecord
        Store the outcome and the flags of a run
    run : SuiteResult
        ``compute``, ``write`` and record, raising on failed flags
    """

    command = "base"
    default_model: str | None = None
    default_m_list: tuple = ()

    def __init__(self, config: RunConfig, artifact_dir=None, threads: int | None = None):
        """Initialize the suite.

        Parameters
        ----------
        config : RunConfig
            Resolved configuration
        artifact_dir : path-like, optional
            Target directory, defaulting to ``config.output_dir``
        threads : int, optional
            Worker-pool size
        """
        self.config = config
        self.artifact_dir = Path(artifact_dir) if artifact_dir is not None else Path(config.output_dir)
        self.threads = threads

    @property
    def quad(self):
        return self.config.quadrature

    @property
    def m_list(self) -> list[int]:
        return list(self.config.m_list or self.default_m_list)

    @property
    def model_name(self) -> str | None:
        return self.config.model.name if self.config.model else self.default_model

    def build_model(self) -> MetricModel:
        params = self.config.model.params if self.config.model else {}
        return build_model(self.model_name, params)

    def compute(self) -> SuiteOutput:
        raise NotImplementedError

    def write(self, output: SuiteOutput) -> list[Path]:
        """Write every table (CSV) and the summary (JSON) as configured.

        Criteria that name a table get that table's file as their artifact.
        """
        paths = []
        by_table = {}
        if self.config.writes_csv:
            for table, rows in output.tables.items():
                path = write_csv(table, rows, self.artifact_dir)
                by_table[table] = path
                paths.append(path)
        summary_path = None
        if self.config.writes_json:
            payload = {
                "command": self.command,
                "model": self.model_name,
                "summary": output.summary,
                "tables": {t: to_frame(t, rows).to_dict(orient="records") for t, rows in output.tables.items()},
                "criteria": {c.name: c.passed for c in output.criteria},
            }
            summary_path = write_json(self.command, payload, self.config, self.quad, self.artifact_dir)
            paths.append(summary_path)
        for criterion in output.criteria:
            target = by_table.get(criterion.table, summary_path)
            criterion.artifact = str(target) if target is not None else None
        return paths

    def record_start(self, session: Session) -> RunRecord:
        """Create/Post a running ledger entry.

        Raises
        ------
        LedgerError
            If the ledger cannot be written
        """
        record = RunRecord(
            command=self.command,
            model=self.model_name,
            config_json=self.config.model_dump_json(),
            version=__version__,
        )
        try:
            session.add(record)
            session.commit()
            session.refresh(record)
            return record
        except SQLAlchemyError as e:
            session.rollback()
            raise LedgerError(f"Ledger error: {e}") from e

    def record_finish(
        self, session: Session, record: RunRecord, status: RunStatus, exit_code: int, criteria=()
    ) -> RunRecord:
        """Update/Put the outcome of a run together with its flags.

        Raises
        ------
        LedgerError
            If the ledger cannot be written
        """
        try:
            for criterion in criteria:
                session.add(
                    CriterionRecord(
                        run_id=record.id,
                        name=criterion.name,
                        passed=criterion.passed,
                        value=criterion.value,
                        artifact=criterion.artifact,
                    )
                )
            record.status = status
            record.exit_code = exit_code
            record.finished_at = datetime.now()
            session.add(record)
            session.commit()
            session.refresh(record)
            return record
        except SQLAlchemyError as e:
            session.rollback()
            raise LedgerError(f"Ledger error: {e}") from e

    def _prepare_dir(self):
        try:
            self.artifact_dir.mkdir(parents=True, exist_ok=True)
        except OSError as e:
            raise ConfigError(f"output directory {self.artifact_dir} is not writable: {e.strerror}") from e

    def run(self, session: Session | None = None, raise_on_failure: bool = True) -> SuiteResult:
        """Compute, write and record.

        Parameters
        ----------
        session : Session, optional
            Ledger session; the run is not recorded when omitted
        raise_on_failure : bool
            Raise ``SuiteFailure`` when a flag fails

        Returns
        -------
        SuiteResult

        Raises
        ------
        SuiteFailure
            If a flag failed and ``raise_on_failure`` is set
        LabError
            Configuration and numerical errors, after recording them
        """
        self._prepare_dir()
        record = self.record_start(session) if session is not None else None
        logger.info("%s: start (model %s)", self.command, self.model_name)
        try:
            output = self.compute()
        except LabError as e:
            logger.error("%s: %s", self.command, e.detail)
            if record is not None:
                self.record_finish(session, record, RunStatus.ERROR, e.exit_code)
            raise
        artifacts = self.write(output)
        result = SuiteResult(self.command, output.criteria, artifacts, output.summary)
        status = RunStatus.PASSED if result.passed else RunStatus.FAILED
        exit_code = 0 if result.passed else SuiteFailure.exit_code
        if record is not None:
            result.run_id = self.record_finish(session, record, status, exit_code, output.criteria).id
        logger.info("%s: %s, %d artifacts", self.command, status.value, len(artifacts))
        if raise_on_failure and not result.passed:
            raise SuiteFailure(f"{self.command}: failed flags {', '.join(result.failed)}", [result])
        return result

