"""Command-line front end.

Every verb of ``RunConfig.command`` is a sub-command, plus ``reproduce``
which replays the pinned acceptance configurations. Flags mirror the
``RunConfig`` fields; ``--config path.json`` loads a full config that
explicit flags override.

Exit status: 0 when every pass/fail flag passed, 1 when a flag failed, 2 on
a configuration error and 3 when a numerical failure prevented evaluation.

Functions
---------
build_parser
    The ``argparse`` parser
configure_logging
    Root handler and level from ``-v`` / ``BERGMAN_LOG_LEVEL``
overrides_from
    ``RunConfig`` fields set on the command line
main
    Parse, run and map the outcome to an exit status
"""

import argparse
import json
import logging
import sys

import pandas as pd

import app
from src import __version__, settings
from src.errors import ConfigError, LabError, SuiteFailure
from src.suites.config import COMMANDS, parse_int_list, resolve_config

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(name)s:%(levelname)s:%(message)s"


def _param(text: str) -> tuple[str, object]:
    key, sep, raw = text.partition("=")
    if not sep or not key:
        raise argparse.ArgumentTypeError(f"expected key=value, got '{text}'")
    try:
        return key, json.loads(raw)
    except json.JSONDecodeError:
        return key, raw


def _int_list(text: str) -> list[int]:
    try:
        return parse_int_list(text)
    except ConfigError as e:
        raise argparse.ArgumentTypeError(e.detail) from e


def _common(parser: argparse.ArgumentParser):
    parser.add_argument("--config", help="JSON file with a full or partial run configuration")
    parser.add_argument("--output-dir", dest="output_dir", help="directory for reports (the ledger is kept beside it)")
    parser.add_argument("--seed", type=int, help="seed for random cross-check points")
    parser.add_argument("--format", choices=["csv", "json", "both"])
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v for INFO, -vv for DEBUG")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bergman-lab", description="Numerical checks of Bergman metrics")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for command in COMMANDS:
        verb = sub.add_parser(command, help=f"run the {command} suite")
        _common(verb)
        verb.add_argument("--model", help="registry model name")
        verb.add_argument("--param", type=_param, action="append", default=None, help="model parameter key=value")
        verb.add_argument("--m", dest="m_list", type=_int_list, help="tensor powers: 64,128 or 64..1024")
        verb.add_argument("--p", dest="p_list", type=_int_list, help="peak indices")
        verb.add_argument("--k", dest="k_list", type=_int_list, help="family, mode or moment indices")
        verb.add_argument("--alpha", type=float)
        verb.add_argument("--q", type=float)
        verb.add_argument("--rel-tol", dest="rel_tol", type=float, help="quadrature relative tolerance")
        verb.add_argument("--max-subdivisions", dest="max_subdivisions", type=int)
        verb.add_argument("--angular-nodes", dest="angular_nodes", type=int)
        verb.add_argument("--cusp", action="store_true", default=None, help="add the cusp family demo")
        verb.add_argument("--export-gram", dest="export_gram", action="store_true", default=None)
    _common(sub.add_parser("reproduce", help="run every pinned acceptance configuration"))
    return parser


def configure_logging(verbosity: int):
    if verbosity >= 2:
        level = logging.DEBUG
    elif verbosity == 1:
        level = logging.INFO
    else:
        level = getattr(logging, settings.LOG_LEVEL, logging.WARNING)
    logging.basicConfig(format=LOG_FORMAT, level=level)


def overrides_from(args: argparse.Namespace) -> dict:
    """``RunConfig`` fields given explicitly on the command line."""
    quadrature = {
        key: getattr(args, key)
        for key in ("rel_tol", "max_subdivisions", "angular_nodes")
        if getattr(args, key) is not None
    }
    model = None
    if args.model is not None or args.param:
        model = {}
        if args.model is not None:
            model["name"] = args.model
        if args.param:
            model["params"] = dict(args.param)
    return {
        "command": args.command,
        "model": model,
        "m_list": args.m_list,
        "p_list": args.p_list,
        "k_list": args.k_list,
        "alpha": args.alpha,
        "q": args.q,
        "quadrature": quadrature or None,
        "output_dir": args.output_dir,
        "seed": args.seed,
        "format": args.format,
        "cusp": args.cusp,
        "export_gram": args.export_gram,
    }


def _print_results(results):
    rows = [(r.command, c.name, c.passed, c.value) for r in results for c in r.criteria]
    if rows:
        frame = pd.DataFrame(rows, columns=["suite", "flag", "passed", "value"])
        print(frame.to_string(index=False))


def _print_manifest(manifest: dict):
    rows = [(number, item["passed"], ", ".join(item["artifacts"])) for number, item in manifest["criteria"].items()]
    print(pd.DataFrame(rows, columns=["criterion", "passed", "artifacts"]).to_string(index=False))
    for label, entry in manifest["runs"].items():
        if entry["status"] == "error":
            print(f"{label}: error: {entry['detail']}", file=sys.stderr)


def main(argv=None) -> int:
    """Run the command line and return the process exit status."""
    args = build_parser().parse_args(argv)
    configure_logging(args.verbose)
    try:
        if args.command == "reproduce":
            overrides = {"output_dir": args.output_dir, "seed": args.seed}
            if args.config is not None:
                config = resolve_config({**overrides, "command": "all"}, args.config)
                overrides = {"output_dir": config.output_dir, "seed": config.seed}
            manifest = app.reproduce_paper(overrides["output_dir"] or "results", overrides["seed"] or 0)
            _print_manifest(manifest)
            return manifest["exit_code"]
        config = resolve_config(overrides_from(args), args.config)
        result = app.run(config)
        _print_results(result if isinstance(result, list) else [result])
        return 0
    except ConfigError as e:
        print(f"error: {e.detail}", file=sys.stderr)
        if e.suggestions:
            print(f"did you mean: {', '.join(e.suggestions)}", file=sys.stderr)
        return e.exit_code
    except SuiteFailure as e:
        _print_results(e.results)
        print(f"failed: {e.detail}", file=sys.stderr)
        return e.exit_code
    except LabError as e:
        print(f"error: {e.detail}", file=sys.stderr)
        return e.exit_code


if __name__ == "__main__":
    sys.exit(main())
