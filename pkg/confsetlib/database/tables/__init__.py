##
# Copyright (c) confsetlib contributors
#
# SPDX-License-Identifier: BSD-2-Clause-Patent
##
"""A collection of table generators that record finished experiment reports."""

from confsetlib.database.results_db import TableGenerator  # noqa: F401
from confsetlib.database.tables.coverage_table import CoverageTable  # noqa: F401
from confsetlib.database.tables.entropy_table import EntropyTable  # noqa: F401
from confsetlib.database.tables.growth_table import GrowthTable  # noqa: F401
from confsetlib.database.tables.oracle_table import OracleTable  # noqa: F401
from confsetlib.database.tables.run_table import RunTable  # noqa: F401
