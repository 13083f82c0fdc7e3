##
# Utility Functions to support re-use across the confsetlib modules.
#
# Copyright (c) confsetlib contributors
#
# SPDX-License-Identifier: BSD-2-Clause-Patent
##
"""Module containing utility functions to support re-use in confsetlib."""

import functools
import logging
import time
from typing import Any, Callable, Iterable


def timing(f: Callable) -> Callable:
    """This is a mixin to do timing on a function.

    Example:
        ```
            @timing
            def function_i_want_to_time():
        ```
    """

    @functools.wraps(f)
    def wrap(*args: Any, **kwargs: Any) -> Any:  # noqa: ANN401
        time1 = time.perf_counter()
        ret = f(*args, **kwargs)
        time2 = time.perf_counter()
        logging.getLogger("confsetlib.timing").debug(
            "{:s} function took {:.3f} ms".format(f.__name__, (time2 - time1) * 1000.0)
        )
        return ret

    return wrap


class CompensatedSum(object):
    """Running sum of floats with Neumaier (improved Kahan) compensation.

    The error of the running total stays at a few ulps regardless of the
    number of terms, which keeps confidence set mass accounting exact to 1e-12.

    Example:
        ```python
        acc = CompensatedSum()
        for p in (0.81, 0.09, 0.09):
            acc.add(p)
        acc.value  # 0.99
        ```
    """

    def __init__(self, values: Iterable[float] = ()) -> "CompensatedSum":
        """Inits the sum, optionally with initial terms."""
        self._sum = 0.0
        self._compensation = 0.0
        for v in values:
            self.add(v)

    def add(self, value: float) -> "CompensatedSum":
        """Adds a term and returns self."""
        total = self._sum + value
        if abs(self._sum) >= abs(value):
            self._compensation += (self._sum - total) + value
        else:
            self._compensation += (value - total) + self._sum
        self._sum = total
        return self

    def peek(self, value: float) -> float:
        """Returns the total the sum would have after adding value, without adding it."""
        total = self._sum + value
        if abs(self._sum) >= abs(value):
            compensation = self._compensation + ((self._sum - total) + value)
        else:
            compensation = self._compensation + ((value - total) + self._sum)
        return total + compensation

    @property
    def value(self) -> float:
        """The compensated total."""
        return self._sum + self._compensation
