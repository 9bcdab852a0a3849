"""
Pytest configuration and fixtures for the lab.

Fixtures
--------
session : Session
    In-memory SQLite ledger session for isolated testing
quad : QuadSpec
    Default quadrature settings
fs_model : FubiniStudy
    Fubini–Study model
flat_model : FlatGaussian
    Flat Gaussian model
sharp_model : SharpExample
    Sharp example with the default amplitude
run_config : Callable
    Factory for ``RunConfig`` objects writing into a temporary directory

Notes
-----
- Sweeps at m >= 512 and the full acceptance configurations are marked
  ``slow``; deselect them with ``-m "not slow"``
- Each test gets a fresh ledger
"""

import pytest
from sqlmodel import Session, SQLModel, create_engine
from sqlmodel.pool import StaticPool

from src.db import models  # noqa: F401  registers the ledger tables
from src.geometry.metric_models import flat_gaussian, fubini_study, sharp_example
from src.numerics.quadrature import QuadSpec
from src.suites.config import RunConfig


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long sweeps (m >= 512 or acceptance configurations)")


@pytest.fixture(name="session")
def session_fixture():
    """
    Creates a ledger session on an in-memory SQLite database.

    Returns:
        Session: A SQLModel session connected to a fresh ledger
    """
    engine = create_engine("sqlite://", connect_args={"check_same_thread": False}, poolclass=StaticPool)
    SQLModel.metadata.create_all(engine)
    with Session(engine) as session:
        yield session


@pytest.fixture(name="quad")
def quad_fixture():
    return QuadSpec()


@pytest.fixture(name="fs_model")
def fs_model_fixture():
    return fubini_study()


@pytest.fixture(name="flat_model")
def flat_model_fixture():
    return flat_gaussian()


@pytest.fixture(name="sharp_model")
def sharp_model_fixture():
    return sharp_example()


@pytest.fixture(name="run_config")
def run_config_fixture(tmp_path):
    """
    Creates RunConfig objects whose output goes to the test's temporary
    directory.

    Returns:
        Callable: ``make(command, **fields) -> RunConfig``
    """

    def make(command: str, **fields) -> RunConfig:
        return RunConfig.model_validate({"command": command, "output_dir": tmp_path, **fields})

    return make
