"""
Tests for the ledger tables.

Classes
-------
TestRunRecord
    Defaults, status storage and the criteria relationship
TestCriterionRecord
    Foreign key and optional fields
TestPinnedConfig
    Primary key on the label
"""

from datetime import datetime

import pytest
from sqlalchemy import text
from sqlalchemy.exc import IntegrityError
from sqlmodel import Session, select

from src.db.models import CriterionRecord, PinnedConfig, RunRecord, RunStatus


def _run(session: Session, **fields) -> RunRecord:
    run = RunRecord(command="rates", config_json="{}", version="0.1.0", **fields)
    session.add(run)
    session.commit()
    session.refresh(run)
    return run


class TestRunRecord:
    def test_defaults(self, session: Session):
        """Covers: RunRecord id, started_at and status defaults"""
        run = _run(session)
        assert run.id is not None
        assert isinstance(run.started_at, datetime)
        assert run.status is RunStatus.RUNNING
        assert run.finished_at is None
        assert run.exit_code is None

    def test_status_stored_by_value(self, session: Session):
        """Covers: RunStatus stored as its lowercase value"""
        _run(session, status=RunStatus.FAILED)
        stored = session.connection().execute(text("SELECT status FROM run")).scalar_one()
        assert stored == "failed"

    def test_criteria_relationship(self, session: Session):
        """Covers: RunRecord.criteria back-population"""
        run = _run(session)
        session.add(CriterionRecord(run_id=run.id, name="sup_err_slope", passed=True, value=-0.98))
        session.add(CriterionRecord(run_id=run.id, name="c1alpha_band", passed=False))
        session.commit()
        session.refresh(run)
        assert sorted(c.name for c in run.criteria) == ["c1alpha_band", "sup_err_slope"]
        assert run.criteria[0].run is run


class TestCriterionRecord:
    def test_optional_fields(self, session: Session):
        run = _run(session)
        criterion = CriterionRecord(run_id=run.id, name="ode_residual", passed=True)
        session.add(criterion)
        session.commit()
        session.refresh(criterion)
        assert criterion.value is None
        assert criterion.artifact is None

    def test_query_by_run(self, session: Session):
        """Covers: selecting the flags of one run"""
        first, second = _run(session), _run(session)
        session.add(CriterionRecord(run_id=first.id, name="a", passed=True))
        session.add(CriterionRecord(run_id=second.id, name="b", passed=False))
        session.commit()
        names = session.exec(select(CriterionRecord.name).where(CriterionRecord.run_id == second.id)).all()
        assert names == ["b"]


class TestPinnedConfig:
    def test_label_is_primary_key(self, session: Session):
        """Covers: PinnedConfig label uniqueness"""
        session.add(PinnedConfig(label="models", criteria="{}", config_json="{}"))
        session.commit()
        session.add(PinnedConfig(label="models", criteria="{}", config_json="{}"))
        with pytest.raises(IntegrityError):
            session.commit()
