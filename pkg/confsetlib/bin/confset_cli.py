##
# The confset command line tool.
#
# Copyright (c) confsetlib contributors
#
# SPDX-License-Identifier: BSD-2-Clause-Patent
##
"""Command line entry point.

```
confset build --model m.json --z 0*1* --gamma 0.99
confset coverage --model m.json --t 12 --gamma 0.5,0.9 --trials 100000 --out coverage.csv
confset growth --config growth.txt --workers 8
confset entropy --model m.json --t 2,4,8
confset oracle-check --trials 200 --junit oracle.xml
```

Every flag except `--config`, `--verbose` and `--quiet` may also come from the config
file given by `--config`; flags override file values. The exit code is 0 on success, or
the `exit_code` of the error that ended the run.
"""

import argparse
import logging
import sys
from typing import Callable, NoReturn, Optional, Sequence

from confsetlib.database import ResultsDB
from confsetlib.database.tables import CoverageTable, EntropyTable, GrowthTable, OracleTable, RunTable
from confsetlib.errors import ConfsetError, UsageError
from confsetlib.harness.build import build_command
from confsetlib.harness.config import CONFIG_KEYS, ExperimentConfig
from confsetlib.harness.coverage import coverage_experiment
from confsetlib.harness.entropy_run import entropy_run
from confsetlib.harness.growth import growth_experiment
from confsetlib.harness.oracle import oracle_check
from confsetlib.harness.report import ExperimentReport
from confsetlib.log.ansi_handler import setup_console_logging
from confsetlib.log.junit_report_format import JunitTestReport

logger = logging.getLogger("confsetlib.cli")

EXPERIMENTS: dict[str, Callable[[ExperimentConfig], ExperimentReport]] = {
    "coverage": coverage_experiment,
    "growth": growth_experiment,
    "entropy": entropy_run,
    "oracle-check": oracle_check,
}

COMMAND_HELP = {
    "build": "print the confidence set of one observation",
    "coverage": "measure how often the randomized set holds the true signal",
    "growth": "compare the per-symbol log size of the set with h(X|Z)",
    "entropy": "compute h(X|Z) with every available method",
    "oracle-check": "compare best-first enumeration with brute force on random models",
}

FLAG_HELP = {
    "model": "JSON model file",
    "gamma": "confidence level(s), comma separated",
    "seed": "base seed, unsigned 64 bit",
    "trials": "coverage trials or oracle cases",
    "t": "sequence length(s), comma separated and increasing",
    "samples": "observations per t (growth)",
    "cap": "maximum core size of an explicit set",
    "out": "output file; stdout when omitted",
    "workers": "parallel workers, -1 for all cores",
    "z": "observation string (build)",
    "surrogate-pi": "erasure probability used to simulate erasure_unknown channels",
    "tolerance": "growth rate tolerance in bits",
    "spread-tolerance": "allowed spread of final growth rates across gammas",
    "reps": "replicates of the Monte Carlo entropy estimate",
    "smb-n": "path length of the Monte Carlo entropy estimate",
    "joint": "joint term of the Monte Carlo estimate: sampled or closed_form",
    "db": "SQLite results database to append the run to",
    "junit": "JUnit xml file for the acceptance checks",
}


class ConfsetArgumentParser(argparse.ArgumentParser):
    """ArgumentParser that raises UsageError instead of exiting."""

    def error(self, message: str) -> NoReturn:
        """Raises a UsageError with argparse's message."""
        raise UsageError(f"{self.prog}: {message}")


def _dest(key: str) -> str:
    return key.replace("-", "_")


def build_parser() -> argparse.ArgumentParser:
    """Returns the parser of the `confset` command line."""
    common = ConfsetArgumentParser(add_help=False)
    common.add_argument("--config", default=None, help="experiment config file of KEY = VALUE lines")
    verbosity = common.add_mutually_exclusive_group()
    verbosity.add_argument("--verbose", action="store_true", help="log debug output")
    verbosity.add_argument("--quiet", action="store_true", help="log warnings and errors only")
    for key in CONFIG_KEYS:
        common.add_argument(f"--{key}", dest=_dest(key), default=None, help=FLAG_HELP[key])

    parser = ConfsetArgumentParser(prog="confset", description="Confidence sets for signals seen through a channel.")
    commands = parser.add_subparsers(dest="command", required=True, parser_class=ConfsetArgumentParser)
    for name, text in COMMAND_HELP.items():
        commands.add_parser(name, parents=[common], help=text)
    return parser


def _emit(text: str, out: Optional[str]) -> None:
    if out is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    with open(out, "w", encoding="utf-8", newline="\n") as f:
        f.write(text)
    logger.info("Wrote %s", out)


def _record(command: str, config: ExperimentConfig, report: ExperimentReport) -> None:
    if config.db is not None:
        db = ResultsDB(config.db)
        db.register(RunTable(), CoverageTable(), GrowthTable(), EntropyTable(), OracleTable())
        try:
            db.record(command, config.as_values(), report)
        finally:
            db.dispose()
    if config.junit is not None:
        junit = JunitTestReport()
        junit.add_checks(report.kind, report.checks)
        junit.Output(config.junit)
        logger.info("Wrote %s", config.junit)


def run_command(command: str, config: ExperimentConfig) -> int:
    """Runs one subcommand and returns its exit code.

    Raises:
        (ConfsetError): any library error; the caller maps it to an exit code
    """
    if command == "build":
        _, text = build_command(config)
        _emit(text, config.out)
        return 0

    if config.out is None and len(config.gammas) > 1 and command in ("coverage", "growth"):
        raise UsageError(f"{command} with several gammas writes one CSV per gamma and needs --out")
    report = EXPERIMENTS[command](config)
    for key, value in report.summary.items():
        logger.info("%s = %s", key, value)
    if config.out is None:
        for text in report.csv_outputs("-").values():
            _emit(text, None)
    else:
        report.write(config.out)
    _record(command, config, report)

    failure = report.failure()
    if failure is not None:
        logger.error("%s", failure)
        return failure.exit_code
    logger.info("%s: all %d checks passed", command, len(report.checks))
    return 0


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Parses argv, runs the command and returns the process exit code."""
    setup_console_logging(logging.INFO)
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        logger.error("%s", exc)
        return exc.exit_code

    level = logging.DEBUG if args.verbose else logging.WARNING if args.quiet else logging.INFO
    setup_console_logging(level)
    try:
        overrides = {key: getattr(args, _dest(key)) for key in CONFIG_KEYS}
        config = ExperimentConfig.from_sources(args.config, overrides)
        return run_command(args.command, config)
    except ConfsetError as exc:
        logger.error("%s", exc)
        return exc.exit_code


def main() -> None:
    """Console script entry point."""
    sys.exit(run())


if __name__ == "__main__":
    main()
