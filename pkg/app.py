"""Collects all the suites and runs them against a per-output-directory ledger.

This module is the main entry point of the lab: the command line resolves a
``RunConfig`` and hands it to ``run``; ``reproduce_paper`` replays every
pinned acceptance configuration and writes a manifest.

Attributes
----------
SUITES : dict[str, type[BaseSuite]]
    Verb to suite class, in the order ``all`` runs them

Functions
---------
run : SuiteResult | list[SuiteResult]
    Execute the suite named by a config (every suite for ``all``)
reproduce_paper : dict
    Run the pinned acceptance configurations and write ``manifest.json``

Notes
-----
Every run is recorded in the ledger beside the output directory
(``src.db.db.ledger_path``); the ledger never feeds back into a computation
and stays out of the directory so identical configurations leave identical
files there.
"""

import json
import logging
from pathlib import Path

from src import __version__
from src.db.db import get_engine, get_session
from src.db_init.acceptance_configs import ACCEPTANCE_CONFIGS
from src.db_init.tables_initialize import create_tables, initialize_pinned_configs
from src.errors import LabError, SuiteFailure
from src.reports.writers import to_plain
from src.suites.base_suite import SuiteResult
from src.suites.config import RunConfig
from src.suites.families_suite import FamiliesSuite
from src.suites.fourier_suite import FourierSuite
from src.suites.models_suite import ModelsSuite
from src.suites.oscillation_suite import OscillationSuite
from src.suites.peak_suite import PeakSuite
from src.suites.rates_suite import RatesSuite
from src.suites.sharp_suite import SharpSuite

logger = logging.getLogger(__name__)

SUITES = {
    suite.command: suite
    for suite in (ModelsSuite, RatesSuite, PeakSuite, FourierSuite, SharpSuite, FamiliesSuite, OscillationSuite)
}


def _open_ledger(output_dir):
    create_tables(get_engine(output_dir))
    return get_session(output_dir)


def run(config: RunConfig, threads: int | None = None) -> SuiteResult | list[SuiteResult]:
    """Execute ``config.command``.

    ``all`` runs every suite in ``SUITES`` order, each into
    ``<output_dir>/<verb>/``, and fails after the last one if any failed.

    Raises
    ------
    SuiteFailure
        If a pass/fail flag failed
    LabError
        Configuration or numerical errors
    """
    session_gen = _open_ledger(config.output_dir)
    session = next(session_gen)
    try:
        if config.command != "all":
            return SUITES[config.command](config, threads=threads).run(session)
        results = []
        for command, suite in SUITES.items():
            sub = config.for_suite(command)
            results.append(suite(sub, artifact_dir=Path(config.output_dir) / command, threads=threads).run(session, False))
        failed = [f"{r.command}.{name}" for r in results for name in r.failed]
        if failed:
            raise SuiteFailure(f"all: failed flags {', '.join(failed)}", results)
        return results
    finally:
        session_gen.close()


def reproduce_paper(output_dir="results", seed: int = 0, threads: int | None = None) -> dict:
    """Run every pinned acceptance configuration.

    Artifacts of each configuration go to ``<output_dir>/<label>/``. The
    manifest maps each acceptance criterion to the flags that decide it,
    the files holding their values (relative to ``output_dir``) and a
    verdict; configurations that raise are reported with their error.

    Returns
    -------
    dict
        The manifest, also written to ``<output_dir>/manifest.json``; its
        ``exit_code`` is 0 iff every criterion passed
    """
    output_dir = Path(output_dir)
    session_gen = _open_ledger(output_dir)
    session = next(session_gen)
    runs, flags = {}, {}
    try:
        initialize_pinned_configs(session)
        for entry in ACCEPTANCE_CONFIGS:
            label = entry["label"]
            config = RunConfig.model_validate({**entry["config"], "output_dir": output_dir, "seed": seed})
            suite = SUITES[config.command](config, artifact_dir=output_dir / label, threads=threads)
            try:
                result = suite.run(session, raise_on_failure=False)
            except LabError as e:
                runs[label] = {"status": "error", "exit_code": e.exit_code, "detail": e.detail}
                continue
            runs[label] = {"status": "passed" if result.passed else "failed", "exit_code": 0 if result.passed else 1}
            for criterion in result.criteria:
                artifact = Path(criterion.artifact).relative_to(output_dir) if criterion.artifact else None
                flags[(label, criterion.name)] = (criterion.passed, artifact)
    finally:
        session_gen.close()

    criteria = {}
    for entry in ACCEPTANCE_CONFIGS:
        label = entry["label"]
        for number, names in entry["flags"].items():
            item = criteria.setdefault(number, {"flags": {}, "artifacts": [], "passed": True})
            for name in names:
                passed, artifact = flags.get((label, name), (False, None))
                item["flags"][f"{label}.{name}"] = passed
                item["passed"] = item["passed"] and passed
                if artifact is not None and str(artifact) not in item["artifacts"]:
                    item["artifacts"].append(str(artifact))
    errors = [r["exit_code"] for r in runs.values() if r["status"] == "error"]
    all_passed = all(item["passed"] for item in criteria.values())
    manifest = {
        "version": __version__,
        "seed": seed,
        "runs": runs,
        "criteria": dict(sorted(criteria.items(), key=lambda kv: int(kv[0]))),
        "exit_code": 0 if all_passed and not errors else (max(errors) if errors else 1),
    }
    path = output_dir / "manifest.json"
    path.write_text(json.dumps(to_plain(manifest), indent=2) + "\n", encoding="utf-8")
    logger.info("wrote %s", path)
    return manifest
