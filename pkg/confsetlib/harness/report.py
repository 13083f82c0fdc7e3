##
# Experiment reports: CSV rows, summary values and acceptance checks.
#
# Copyright (c) confsetlib contributors
#
# SPDX-License-Identifier: BSD-2-Clause-Patent
##
"""Experiment reports.

A report keeps its rows in a pandas DataFrame. Rows may carry a `gamma` column
that is not part of the CSV schema; a report over several gammas is written as
one CSV per gamma, named `<stem>_g<gamma><ext>`. Floats are written with 17
significant digits and LF line endings, so equal rows give byte-identical files.
"""

import json
import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import pandas as pd
from scipy.stats import norm

from confsetlib.errors import AcceptanceError, CapRateExceededError, ConfsetError

logger = logging.getLogger(__name__)


def wilson_interval(successes: int, n: int, level: float = 0.99) -> tuple[float, float]:
    """Wilson score interval of a binomial proportion.

    Args:
        successes: number of successes
        n: number of trials
        level: two-sided confidence level

    Returns:
        (tuple): lower and upper bound, clipped to [0, 1]
    """
    if n <= 0:
        raise ValueError(f"n must be positive, got {n}")
    z = float(norm.ppf(1.0 - (1.0 - level) / 2.0))
    p_hat = successes / n
    z2 = z * z
    denom = 1.0 + z2 / n
    center = (p_hat + z2 / (2.0 * n)) / denom
    margin = z * math.sqrt(p_hat * (1.0 - p_hat) / n + z2 / (4.0 * n * n)) / denom
    return max(0.0, center - margin), min(1.0, center + margin)


def gamma_label(gamma: float) -> str:
    """Shortest text that reads back as gamma, used in file names and check names."""
    return repr(float(gamma))


@dataclass(frozen=True)
class Check:
    """One acceptance check.

    Attributes:
        name (str): identifier, e.g. `coverage_g0.9`
        passed (bool): outcome
        observed (float): measured value
        expected (float): target value
        tolerance (float): allowed deviation
        message (str): human readable outcome
        exit_code (int): exit code of the run when this check fails
    """

    name: str
    passed: bool
    observed: float
    expected: float
    tolerance: float
    message: str
    exit_code: int = AcceptanceError.exit_code


class ExperimentReport(object):
    """Rows, summary values and checks of one experiment.

    Attributes:
        kind (str): experiment name (coverage, growth, entropy, oracle)
        columns (list[str]): CSV schema
        rows (pd.DataFrame): one record per trial or sample
        summary (dict): summary statistics
        checks (list[Check]): acceptance checks
        attachments (dict): JSON documents written next to the CSV, keyed by file suffix
    """

    def __init__(self, kind: str, columns: list[str], rows: Optional[pd.DataFrame] = None) -> "ExperimentReport":
        """Inits a report; rows default to an empty frame with the given columns."""
        self.kind = kind
        self.columns = list(columns)
        self.rows = rows if rows is not None else pd.DataFrame(columns=self.columns)
        self.summary = {}
        self.checks = []
        self.attachments = {}

    def add_check(
        self,
        name: str,
        passed: bool,
        observed: float,
        expected: float,
        tolerance: float,
        message: str,
        exit_code: int = AcceptanceError.exit_code,
    ) -> Check:
        """Records a check and logs its outcome."""
        check = Check(name, bool(passed), float(observed), float(expected), float(tolerance), message, exit_code)
        self.checks.append(check)
        if check.passed:
            logger.info("PASS %s: %s", name, message)
        else:
            logger.error("FAIL %s: %s", name, message)
        return check

    @property
    def passed(self) -> bool:
        """True when every check passed."""
        return all(check.passed for check in self.checks)

    def failure(self) -> Optional[ConfsetError]:
        """Returns the error describing the failed checks, or None.

        A failed check that carries the cap exit code takes precedence.
        """
        failed = [check for check in self.checks if not check.passed]
        if not failed:
            return None
        names = ", ".join(check.name for check in failed)
        if any(check.exit_code == CapRateExceededError.exit_code for check in failed):
            return CapRateExceededError(f"{self.kind}: confidence set cap exceeded too often ({names})")
        return AcceptanceError(f"{self.kind}: failed checks {names}")

    def frames(self) -> dict[Optional[float], pd.DataFrame]:
        """Splits the rows per gamma; a single frame keyed by None when there is no gamma split.

        Rows whose schema holds gamma as an ordinary column are never split.
        """
        if "gamma" not in self.rows.columns or "gamma" in self.columns or self.rows["gamma"].nunique() <= 1:
            return {None: self.rows}
        return {float(gamma): frame for gamma, frame in self.rows.groupby("gamma", sort=True)}

    @staticmethod
    def to_csv_text(frame: pd.DataFrame, columns: list[str]) -> str:
        """Serializes rows in the given column order."""
        return frame.to_csv(columns=columns, index=False, lineterminator="\n", float_format="%.17g", na_rep="")

    def csv_outputs(self, out: str) -> dict[Path, str]:
        """Returns the CSV text of each output file."""
        path = Path(out)
        outputs = {}
        for gamma, frame in self.frames().items():
            target = path if gamma is None else path.with_name(f"{path.stem}_g{gamma_label(gamma)}{path.suffix}")
            outputs[target] = self.to_csv_text(frame, self.columns)
        return outputs

    def write(self, out: str) -> list[Path]:
        """Writes the CSV file(s) and attachments; returns the written paths."""
        written = []
        for target, text in self.csv_outputs(out).items():
            with open(target, "w", encoding="utf-8", newline="\n") as f:
                f.write(text)
            written.append(target)
        path = Path(out)
        for suffix, document in self.attachments.items():
            target = path.with_name(f"{path.stem}_{suffix}.json")
            with open(target, "w", encoding="utf-8", newline="\n") as f:
                json.dump(document, f, indent=2, sort_keys=True)
                f.write("\n")
            written.append(target)
        for target in written:
            logger.info("Wrote %s", target)
        return written

    def summary_values(self) -> dict[str, str]:
        """Flattened summary, for run records."""
        return {key: (repr(value) if isinstance(value, float) else str(value)) for key, value in self.summary.items()}
