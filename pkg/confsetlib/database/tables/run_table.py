# @file run_table.py
# A module to run a table generator that appends a run with its settings, summary and checks.
##
# Copyright (c) confsetlib contributors
#
# SPDX-License-Identifier: BSD-2-Clause-Patent
##
"""A module to run a table generator that appends a run with its settings, summary and checks."""

import datetime
import math
from typing import Any

from confsetlib.database import CheckResult, Run, RunValue, Session
from confsetlib.database.tables import TableGenerator
from confsetlib.harness.report import ExperimentReport


class RunTable(TableGenerator):
    """A table generator that records the command, config values, summary and checks of a run."""

    def __init__(self, *args: Any, **kwargs: Any) -> "RunTable":
        """Initialize the query with the specific settings."""

    def parse(
        self, session: Session, id: str, command: str, config_values: dict[str, str], report: ExperimentReport
    ) -> None:
        """Adds the run row and its key-value rows."""
        values = [RunValue(run_id=id, section="config", key=key, value=value) for key, value in config_values.items()]
        values += [
            RunValue(run_id=id, section="summary", key=key, value=value)
            for key, value in report.summary_values().items()
        ]
        checks = [
            CheckResult(
                run_id=id,
                name=check.name,
                passed=check.passed,
                observed=None if math.isnan(check.observed) else check.observed,
                expected=check.expected,
                tolerance=check.tolerance,
                message=check.message,
            )
            for check in report.checks
        ]
        session.add(
            Run(
                id=id,
                date=datetime.datetime.now(),
                command=command,
                passed=report.passed,
                values=values,
                checks=checks,
            )
        )
