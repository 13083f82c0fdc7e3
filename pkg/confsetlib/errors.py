##
# Exception hierarchy shared by the library and the confset command line tool.
#
# Copyright (c) confsetlib contributors
#
# SPDX-License-Identifier: BSD-2-Clause-Patent
##
"""Exceptions raised by confsetlib.

Every exception carries an `exit_code` that the command line tool returns when
the exception escapes a subcommand.
"""


class ConfsetError(Exception):
    """Base class for all confsetlib errors."""

    exit_code = 1


class UsageError(ConfsetError):
    """Bad flags, bad config values or an unsupported combination of options."""

    exit_code = 1


class ModelValidationError(ConfsetError, ValueError):
    """The model file or model candidate violates a model invariant."""

    exit_code = 2


class ImpossibleObservationError(ConfsetError):
    """The observation has probability zero under the model."""

    exit_code = 3

    def __init__(self, observation: str = "") -> "ImpossibleObservationError":
        """Inits the error for the given (formatted) observation."""
        self.observation = observation
        super().__init__(f"Observation '{observation}' has zero probability under the model")


class CapExceededError(ConfsetError):
    """The confidence set core grew past the cap before reaching the confidence level.

    Attributes:
        cap (int): the core size limit that was hit
        mass_attained (float): posterior mass of the core when the cap was hit
    """

    exit_code = 4

    def __init__(self, cap: int, mass_attained: float) -> "CapExceededError":
        """Inits the error with the cap and the mass reached so far."""
        self.cap = cap
        self.mass_attained = mass_attained
        super().__init__(f"Core size cap {cap} exceeded with posterior mass {mass_attained:.12g}")


class EnumerationLimitError(ConfsetError):
    """A ranked stream reached its item limit while sequences remained."""

    exit_code = 4

    def __init__(self, limit: int) -> "EnumerationLimitError":
        """Inits the error with the limit that was reached."""
        self.limit = limit
        super().__init__(f"Enumeration limit of {limit} items reached before exhaustion")


class GuardExceededError(ConfsetError, ValueError):
    """An exhaustive computation was asked for more work than its guard allows."""

    exit_code = 1


class ClosedFormUnavailableError(ConfsetError, ValueError):
    """The model is outside the class with a closed form entropy rate."""

    exit_code = 1


class AcceptanceError(ConfsetError):
    """An experiment finished but failed its declared tolerances."""

    exit_code = 5


class CapRateExceededError(ConfsetError):
    """Too many trials of an experiment hit the confidence set cap."""

    exit_code = 4
