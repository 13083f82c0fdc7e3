# @file results_db.py
# A class for recording experiment runs in a SQLite database.
##
# Copyright (c) confsetlib contributors
#
# SPDX-License-Identifier: BSD-2-Clause-Patent
##
"""A class for recording experiment runs in a SQLite database."""

import logging
import time
import uuid
from contextlib import contextmanager
from typing import Any, Iterator

import pandas as pd
from sqlalchemy import create_engine
from sqlalchemy.orm import DeclarativeBase, Session

from confsetlib.harness.report import ExperimentReport

logger = logging.getLogger(__name__)


class Base(DeclarativeBase):
    """The base class for creating database table models.

    This class should be the subclass for any table model that will be used with ResultsDB.
    """


class ResultsDB:
    """A SQLite database of completed experiment runs.

    Table generators registered with the database turn a finished `ExperimentReport` into rows.
    Each call of `record` adds one run; earlier runs are kept, so the file accumulates the
    history of a parameter study and can be queried with any SQLite client.

    Example:
        ```python
        from confsetlib.database.tables import CoverageTable, RunTable
        db = ResultsDB("results.db")
        db.register(RunTable(), CoverageTable())
        run_id = db.record("coverage", config.as_values(), report)
        ```
    """

    Base = Base

    def __init__(self: "ResultsDB", db_path: str, **kwargs: dict[str, Any]) -> "ResultsDB":
        """Initializes the database.

        Args:
            db_path: Path to create or load the database from
            **kwargs: passed to sqlalchemy's create_engine
        """
        self.db_path = db_path
        self.clear_tables()
        self.engine = create_engine(f"sqlite:///{db_path}", **kwargs)
        self.Base.metadata.create_all(self.engine)

    @contextmanager
    def session(self) -> Iterator[Session]:
        """Provides a context manager for a session with the database.

        Handles commiting changes and rolling back if an exception is raised.
        """
        session = Session(self.engine)
        try:
            yield session
            session.commit()
        except Exception as e:
            session.rollback()
            raise e
        finally:
            session.close()

    def register(self, *tables: "TableGenerator") -> None:
        """Registers one or more table generators.

        Args:
            *tables: One or more instantiated TableGenerator object
        """
        for table in tables:
            self._tables.append(table)

    def clear_tables(self) -> None:
        """Empties the list of registered table generators."""
        self._tables = []

    def record(self, command: str, config_values: dict[str, str], report: ExperimentReport) -> str:
        """Runs all registered table generators against one finished report.

        All generators share one session, so a failing generator leaves no rows of the run behind.

        Returns:
            (str): the id of the new run
        """
        id = str(uuid.uuid4().hex)
        with self.session() as session:
            for table in self._tables:
                logger.debug(f"[{table.__class__.__name__}] starting...")
                t = time.time()
                table.parse(session, id, command, config_values, report)
                session.flush()
                logger.debug(f"Finished in {round(time.time() - t, 2)}")
        logger.info("Recorded run %s in %s", id, self.db_path)
        return id

    def dispose(self) -> None:
        """Releases the engine's connections."""
        self.engine.dispose()


def report_records(report: ExperimentReport) -> list[dict]:
    """Report rows as dicts, with None in place of missing values."""
    frame = report.rows.astype(object)
    return frame.where(pd.notna(frame), None).to_dict("records")


class TableGenerator:
    """An interface for a generator that fills a table maintained by ResultsDB.

    ResultsDB commits the changes of every generator once all of them return, and rolls
    them all back if any raises.
    """

    def __init__(self, *args: Any, **kwargs: Any) -> "TableGenerator":
        """Initialize the generator with the specific settings."""

    def parse(
        self, session: Session, id: str, command: str, config_values: dict[str, str], report: ExperimentReport
    ) -> None:
        """Add the rows of one run to the database."""
        raise NotImplementedError
