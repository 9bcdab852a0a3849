"""
Tests for the command-line front end.

``app.run`` and ``app.reproduce_paper`` are patched; the suites themselves
are tested under ``tests/suites``.
"""

from unittest.mock import patch

import pytest

from src import cli
from src.errors import NotPositiveDefinite, SuiteFailure
from src.suites.base_suite import Criterion, SuiteResult


def _result(passed: bool) -> SuiteResult:
    return SuiteResult("rates", [Criterion("sup_err_slope", passed, -1.0)], [])


def test_parser_verbs():
    """Covers: build_parser() sub-commands and list flags"""
    args = cli.build_parser().parse_args(["peak", "--m", "64..256", "--p", "0,1", "--param", "amplitude=0.01"])
    assert args.command == "peak"
    assert args.m_list == [64, 128, 256]
    assert args.p_list == [0, 1]
    assert args.param == [("amplitude", 0.01)]


def test_parser_rejects_bad_list():
    with pytest.raises(SystemExit):
        cli.build_parser().parse_args(["rates", "--m", "a..b"])


def test_overrides_from():
    """Covers: overrides_from() model and quadrature grouping"""
    args = cli.build_parser().parse_args(["rates", "--model", "flat_gaussian", "--rel-tol", "1e-8", "--cusp"])
    overrides = cli.overrides_from(args)
    assert overrides["model"] == {"name": "flat_gaussian"}
    assert overrides["quadrature"] == {"rel_tol": 1e-8}
    assert overrides["cusp"] is True
    assert overrides["m_list"] is None


@patch("src.cli.app.run")
def test_main_passed(mock_run, tmp_path, capsys):
    """Covers: main() exit status 0 and the flag table"""
    mock_run.return_value = _result(True)
    assert cli.main(["rates", "--output-dir", str(tmp_path)]) == 0
    config = mock_run.call_args.args[0]
    assert config.command == "rates"
    assert config.output_dir == tmp_path
    assert "sup_err_slope" in capsys.readouterr().out


@patch("src.cli.app.run")
def test_main_failed_flag(mock_run, tmp_path, capsys):
    """Covers: main() exit status 1 on SuiteFailure"""
    mock_run.side_effect = SuiteFailure("rates: failed flags sup_err_slope", [_result(False)])
    assert cli.main(["rates", "--output-dir", str(tmp_path)]) == 1
    assert "failed:" in capsys.readouterr().err


def test_main_config_error(tmp_path, capsys):
    """Covers: main() exit status 2 with suggestions"""
    assert cli.main(["rates", "--model", "fubini", "--output-dir", str(tmp_path)]) == 2
    err = capsys.readouterr().err
    assert "did you mean" in err
    assert "fubini_study" in err


def test_main_invalid_field(capsys):
    assert cli.main(["rates", "--alpha", "1.5"]) == 2
    assert "alpha" in capsys.readouterr().err


@patch("src.cli.app.run")
def test_main_numerical_error(mock_run, capsys):
    """Covers: main() exit status 3"""
    mock_run.side_effect = NotPositiveDefinite("pivot 3 is -1e-3", -1e-3)
    assert cli.main(["rates"]) == 3
    assert "pivot" in capsys.readouterr().err


@patch("src.cli.app.reproduce_paper")
def test_main_reproduce(mock_reproduce, tmp_path, capsys):
    """Covers: main() reproduce verb and manifest printing"""
    mock_reproduce.return_value = {
        "runs": {"models": {"status": "error", "exit_code": 3, "detail": "boom"}},
        "criteria": {"2": {"passed": False, "artifacts": []}},
        "exit_code": 3,
    }
    assert cli.main(["reproduce", "--output-dir", str(tmp_path), "--seed", "5"]) == 3
    mock_reproduce.assert_called_once_with(str(tmp_path), 5)
    captured = capsys.readouterr()
    assert "models: error: boom" in captured.err
