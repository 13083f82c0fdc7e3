# @file growth_table.py
# A module to run a table generator that stores the samples of a growth experiment.
##
# Copyright (c) confsetlib contributors
#
# SPDX-License-Identifier: BSD-2-Clause-Patent
##
"""A module to run a table generator that stores the samples of a growth experiment."""

from typing import Any

from confsetlib.database import GrowthSample, Session
from confsetlib.database.results_db import report_records
from confsetlib.database.tables import TableGenerator
from confsetlib.harness.report import ExperimentReport


class GrowthTable(TableGenerator):
    """A table generator for growth reports."""

    def __init__(self, *args: Any, **kwargs: Any) -> "GrowthTable":
        """Initialize the query with the specific settings."""

    def parse(
        self, session: Session, id: str, command: str, config_values: dict[str, str], report: ExperimentReport
    ) -> None:
        """Adds one row per (gamma, t, sample)."""
        if report.kind != "growth":
            return
        session.add_all(
            GrowthSample(
                run_id=id,
                gamma=float(row["gamma"]),
                t=int(row["t"]),
                sample=int(row["sample"]),
                log2_expected_size=row["log2_expected_size"],
                rate=row["rate"],
            )
            for row in report_records(report)
        )
