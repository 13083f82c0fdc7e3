# @file coverage_table.py
# A module to run a table generator that stores the trials of a coverage experiment.
##
# Copyright (c) confsetlib contributors
#
# SPDX-License-Identifier: BSD-2-Clause-Patent
##
"""A module to run a table generator that stores the trials of a coverage experiment."""

from typing import Any

from confsetlib.database import CoverageTrial, Session
from confsetlib.database.results_db import report_records
from confsetlib.database.tables import TableGenerator
from confsetlib.harness.report import ExperimentReport


class CoverageTable(TableGenerator):
    """A table generator for coverage reports; other reports are ignored."""

    def __init__(self, *args: Any, **kwargs: Any) -> "CoverageTable":
        """Initialize the query with the specific settings."""

    def parse(
        self, session: Session, id: str, command: str, config_values: dict[str, str], report: ExperimentReport
    ) -> None:
        """Adds one row per (gamma, trial)."""
        if report.kind != "coverage":
            return
        session.add_all(
            CoverageTrial(
                run_id=id,
                gamma=float(row["gamma"]),
                trial=int(row["trial"]),
                seed=str(row["seed"]),
                covered=None if row["covered"] is None else bool(row["covered"]),
                core_size=None if row["core_size"] is None else int(row["core_size"]),
                expected_size=row["expected_size"],
            )
            for row in report_records(report)
        )
