# @file oracle_table.py
# A module to run a table generator that stores oracle check cases.
##
# Copyright (c) confsetlib contributors
#
# SPDX-License-Identifier: BSD-2-Clause-Patent
##
"""A module to run a table generator that stores oracle check cases."""

from typing import Any

from confsetlib.database import OracleCase, Session
from confsetlib.database.results_db import report_records
from confsetlib.database.tables import TableGenerator
from confsetlib.harness.report import ExperimentReport


class OracleTable(TableGenerator):
    """A table generator for oracle reports."""

    def __init__(self, *args: Any, **kwargs: Any) -> "OracleTable":
        """Initialize the query with the specific settings."""

    def parse(
        self, session: Session, id: str, command: str, config_values: dict[str, str], report: ExperimentReport
    ) -> None:
        """Adds one row per case, the reference example included."""
        if report.kind != "oracle":
            return
        session.add_all(
            OracleCase(
                run_id=id,
                case=int(row["case"]),
                seed=None if row["seed"] is None else str(row["seed"]),
                channel=row["channel"],
                t=int(row["t"]),
                gamma=float(row["gamma"]),
                items=int(row["items"]),
                expected_size=float(row["expected_size"]),
                matched=bool(row["matched"]),
            )
            for row in report_records(report)
        )
