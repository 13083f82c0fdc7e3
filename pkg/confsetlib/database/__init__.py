# @file __init__.py
# The core classes used to interact with the results database.
# This prevents needing to do deeply nested imports and can simply `from confsetlib.database import`
##
# Copyright (c) confsetlib contributors
#
# SPDX-License-Identifier: BSD-2-Clause-Patent
##
"""Core classes used to interact with the results database."""

import datetime
from typing import List, Optional

from sqlalchemy import ForeignKey, String, func
from sqlalchemy.orm import Mapped, Session, mapped_column, relationship  # noqa: F401

from .results_db import ResultsDB  # noqa: F401


class Run(ResultsDB.Base):
    """One completed command invocation."""

    __tablename__ = "run"

    id: Mapped[str] = mapped_column(primary_key=True)
    date: Mapped[datetime.datetime] = mapped_column(insert_default=func.now())
    command: Mapped[str] = mapped_column(String(20))
    passed: Mapped[bool]
    values: Mapped[List["RunValue"]] = relationship(back_populates="run", cascade="all, delete-orphan")
    checks: Mapped[List["CheckResult"]] = relationship(back_populates="run", cascade="all, delete-orphan")


class RunValue(ResultsDB.Base):
    """A key-value pair of a run; section is `config` or `summary`."""

    __tablename__ = "run_value"

    run_id: Mapped[str] = mapped_column(ForeignKey("run.id"), primary_key=True, index=True)
    section: Mapped[str] = mapped_column(String(10), primary_key=True)
    key: Mapped[str] = mapped_column(primary_key=True)
    value: Mapped[str]
    run: Mapped["Run"] = relationship(back_populates="values")


class CheckResult(ResultsDB.Base):
    """The outcome of one acceptance check."""

    __tablename__ = "check_result"

    run_id: Mapped[str] = mapped_column(ForeignKey("run.id"), primary_key=True, index=True)
    name: Mapped[str] = mapped_column(primary_key=True)
    passed: Mapped[bool]
    observed: Mapped[Optional[float]]
    expected: Mapped[float]
    tolerance: Mapped[float]
    message: Mapped[str]
    run: Mapped["Run"] = relationship(back_populates="checks")


class CoverageTrial(ResultsDB.Base):
    """A coverage trial. Seeds are unsigned 64 bit values and stored as text."""

    __tablename__ = "coverage_trial"

    id: Mapped[int] = mapped_column(primary_key=True, autoincrement=True)
    run_id: Mapped[str] = mapped_column(ForeignKey("run.id"), index=True)
    gamma: Mapped[float]
    trial: Mapped[int]
    seed: Mapped[str]
    covered: Mapped[Optional[bool]]
    core_size: Mapped[Optional[int]]
    expected_size: Mapped[Optional[float]]


class GrowthSample(ResultsDB.Base):
    """A growth experiment sample."""

    __tablename__ = "growth_sample"

    id: Mapped[int] = mapped_column(primary_key=True, autoincrement=True)
    run_id: Mapped[str] = mapped_column(ForeignKey("run.id"), index=True)
    gamma: Mapped[float]
    t: Mapped[int]
    sample: Mapped[int]
    log2_expected_size: Mapped[Optional[float]]
    rate: Mapped[Optional[float]]


class EntropyValue(ResultsDB.Base):
    """A conditional entropy rate value."""

    __tablename__ = "entropy_value"

    id: Mapped[int] = mapped_column(primary_key=True, autoincrement=True)
    run_id: Mapped[str] = mapped_column(ForeignKey("run.id"), index=True)
    method: Mapped[str]
    n: Mapped[Optional[int]]
    reps: Mapped[Optional[int]]
    value: Mapped[float]
    std_error: Mapped[Optional[float]]


class OracleCase(ResultsDB.Base):
    """An oracle check case."""

    __tablename__ = "oracle_case"

    id: Mapped[int] = mapped_column(primary_key=True, autoincrement=True)
    run_id: Mapped[str] = mapped_column(ForeignKey("run.id"), index=True)
    case: Mapped[int]
    seed: Mapped[Optional[str]]
    channel: Mapped[str]
    t: Mapped[int]
    gamma: Mapped[float]
    items: Mapped[int]
    expected_size: Mapped[float]
    matched: Mapped[bool]
