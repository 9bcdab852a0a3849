"""
Tests for the suite base class.

A minimal subclass stands in for the numerics so that writing, ledger
recording and the failure paths can be checked in isolation.
"""

import json
from unittest.mock import MagicMock

import pytest
from sqlalchemy.exc import SQLAlchemyError
from sqlmodel import Session, select

from src.db.models import CriterionRecord, RunRecord, RunStatus
from src.errors import LedgerError, NonConvergence, SuiteFailure
from src.suites.base_suite import BaseSuite, Criterion, SuiteOutput


class DummySuite(BaseSuite):
    command = "dummy"
    default_model = "flat_gaussian"
    default_m_list = (8, 16)

    def __init__(self, config, passed=True, error=None, **kwargs):
        super().__init__(config, **kwargs)
        self.passed = passed
        self.error = error

    def compute(self) -> SuiteOutput:
        if self.error is not None:
            raise self.error
        rows = [(8, 1.0, 2.0, 3.0, 0.0), (16, 1.0, 2.0, 3.0, 0.0)]
        return SuiteOutput(
            tables={"jets": rows},
            summary={"note": "dummy"},
            criteria=[Criterion("jets_ok", self.passed, 0.5, "jets"), Criterion("summary_only", True)],
        )


def test_defaults(run_config):
    """Covers: BaseSuite m_list, model_name and build_model defaults"""
    suite = DummySuite(run_config("rates"))
    assert suite.m_list == [8, 16]
    assert suite.model_name == "flat_gaussian"
    assert suite.build_model().name == "flat_gaussian"
    suite = DummySuite(run_config("rates", m_list=[4], model={"name": "fubini_study"}))
    assert suite.m_list == [4]
    assert suite.build_model().name == "fubini_study"


def test_compute_not_implemented(run_config):
    with pytest.raises(NotImplementedError):
        BaseSuite(run_config("rates")).compute()


def test_write_artifacts(run_config, tmp_path):
    """Test that criteria are linked to the file holding their table.

    Covers: BaseSuite.write() for csv and json
    """
    suite = DummySuite(run_config("rates"))
    output = suite.compute()
    paths = suite.write(output)
    assert [p.name for p in paths] == ["jets.csv", "dummy.json"]
    assert output.criteria[0].artifact == str(tmp_path / "jets.csv")
    assert output.criteria[1].artifact == str(tmp_path / "dummy.json")
    document = json.loads((tmp_path / "dummy.json").read_text(encoding="utf-8"))
    assert document["criteria"] == {"jets_ok": True, "summary_only": True}
    assert document["tables"]["jets"][1]["m"] == 16


def test_write_csv_only(run_config):
    suite = DummySuite(run_config("rates", format="csv"))
    output = suite.compute()
    assert [p.name for p in suite.write(output)] == ["jets.csv"]
    assert output.criteria[1].artifact is None


def test_run_records_ledger(run_config, session: Session):
    """Covers: BaseSuite.run() with a ledger session, passing flags"""
    result = DummySuite(run_config("rates")).run(session)
    assert result.passed
    record = session.get(RunRecord, result.run_id)
    assert record.status is RunStatus.PASSED
    assert record.exit_code == 0
    assert record.finished_at is not None
    assert sorted(c.name for c in record.criteria) == ["jets_ok", "summary_only"]


def test_run_failure(run_config, session: Session):
    """Covers: BaseSuite.run() raising SuiteFailure after recording"""
    with pytest.raises(SuiteFailure) as e:
        DummySuite(run_config("rates"), passed=False).run(session)
    assert e.value.exit_code == 1
    assert e.value.results[0].failed == ["jets_ok"]
    record = session.exec(select(RunRecord)).one()
    assert record.status is RunStatus.FAILED
    assert record.exit_code == 1


def test_run_failure_not_raised(run_config):
    result = DummySuite(run_config("rates"), passed=False).run(raise_on_failure=False)
    assert not result.passed
    assert result.run_id is None


def test_run_numerical_error(run_config, session: Session):
    """Covers: BaseSuite.run() recording ERROR on a numerical failure"""
    with pytest.raises(NonConvergence):
        DummySuite(run_config("rates"), error=NonConvergence("stuck", 1.0, 0.1)).run(session)
    record = session.exec(select(RunRecord)).one()
    assert record.status is RunStatus.ERROR
    assert record.exit_code == 3
    assert session.exec(select(CriterionRecord)).all() == []


def test_record_start_ledger_error(run_config):
    """Covers: BaseSuite.record_start() rollback on SQLAlchemyError"""
    session = MagicMock()
    session.commit.side_effect = SQLAlchemyError("locked")
    with pytest.raises(LedgerError):
        DummySuite(run_config("rates")).record_start(session)
    session.rollback.assert_called_once()


def test_record_finish_ledger_error(run_config):
    session = MagicMock()
    session.commit.side_effect = SQLAlchemyError("locked")
    with pytest.raises(LedgerError):
        DummySuite(run_config("rates")).record_finish(session, RunRecord(command="x", config_json="{}", version="1"), RunStatus.PASSED, 0)
    session.rollback.assert_called_once()
