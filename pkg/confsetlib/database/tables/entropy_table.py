# @file entropy_table.py
# A module to run a table generator that stores conditional entropy rate values.
##
# Copyright (c) confsetlib contributors
#
# SPDX-License-Identifier: BSD-2-Clause-Patent
##
"""A module to run a table generator that stores conditional entropy rate values."""

from typing import Any

from confsetlib.database import EntropyValue, Session
from confsetlib.database.results_db import report_records
from confsetlib.database.tables import TableGenerator
from confsetlib.harness.report import ExperimentReport


class EntropyTable(TableGenerator):
    """A table generator for entropy reports."""

    def __init__(self, *args: Any, **kwargs: Any) -> "EntropyTable":
        """Initialize the query with the specific settings."""

    def parse(
        self, session: Session, id: str, command: str, config_values: dict[str, str], report: ExperimentReport
    ) -> None:
        """Adds one row per method and block length."""
        if report.kind != "entropy":
            return
        session.add_all(
            EntropyValue(
                run_id=id,
                method=row["method"],
                n=None if row["n"] is None else int(row["n"]),
                reps=None if row["reps"] is None else int(row["reps"]),
                value=float(row["value"]),
                std_error=row["std_error"],
            )
            for row in report_records(report)
        )
