##
# Handle basic logging with color via ANSI commands
#
# Copyright (c) confsetlib contributors
#
# SPDX-License-Identifier: BSD-2-Clause-Patent
##
"""Handle basic logging with color via ANSI commands.

Color codes are stripped when the stream is not a terminal, so redirected
output and CI logs stay plain text.
"""

import logging
import re
import sys
from enum import IntEnum
from typing import IO, Optional


class AnsiColor(IntEnum):
    """SGR foreground color codes."""

    BLACK = 30
    RED = 31
    GREEN = 32
    YELLOW = 33
    BLUE = 34
    MAGENTA = 35
    CYAN = 36
    WHITE = 37
    RESET = 39
    LIGHTWHITE_EX = 97


def get_ansi_string(color: int = AnsiColor.RESET) -> str:
    """Escape sequence selecting a color; unknown codes select the default color."""
    try:
        color = AnsiColor(color)
    except ValueError:
        color = AnsiColor.RESET
    return f"\033[{color.value}m"


class ColoredFormatter(logging.Formatter):
    """The formatter that outputs ANSI codes as needed.

    Below WARNING only the level name is colored; from WARNING on the whole message is.
    """

    AZURE_COLORS = {"CRITICAL": "section", "ERROR": "error", "WARNING": "warning"}

    COLORS = {
        "WARNING": AnsiColor.YELLOW,
        "INFO": AnsiColor.CYAN,
        "DEBUG": AnsiColor.BLUE,
        "CRITICAL": AnsiColor.LIGHTWHITE_EX,
        "ERROR": AnsiColor.RED,
    }

    def __init__(self, msg: str = "", use_azure: bool = False) -> "ColoredFormatter":
        """Inits the formatter."""
        logging.Formatter.__init__(self, msg or "%(levelname)s - %(message)s")
        self.use_azure = use_azure

    def format(self, record: logging.LogRecord) -> str:
        """Formats the given record and returns it."""
        levelname = record.levelname
        org_message = record.msg

        if not self.use_azure and levelname in ColoredFormatter.COLORS:
            color = get_ansi_string(ColoredFormatter.COLORS[levelname])
            if record.levelno < logging.WARNING:
                record.levelname = color + levelname + get_ansi_string()
            else:
                record.levelname = color + levelname
                record.msg = str(org_message) + get_ansi_string()

        if self.use_azure and levelname in ColoredFormatter.AZURE_COLORS:
            record.levelname = "##[" + ColoredFormatter.AZURE_COLORS[levelname] + "]"

        try:
            return logging.Formatter.format(self, record)
        finally:
            record.levelname = levelname
            record.msg = org_message


class ColoredStreamHandler(logging.StreamHandler):
    """Stream handler that writes ANSI colors to terminals and plain text elsewhere."""

    # Control Sequence Introducer
    ANSI_CSI_RE = re.compile("\001?\033\\[((?:\\d|;)*)([a-zA-Z])\002?")

    def __init__(self, stream: Optional[IO] = None, strip: Optional[bool] = None) -> "ColoredStreamHandler":
        """Inits a Colored Stream Handler.

        Args:
            stream: output stream, stderr by default
            strip: remove ANSI sequences; by default whenever the stream is not a TTY
        """
        logging.StreamHandler.__init__(self, stream)
        if strip is None:
            isatty = getattr(self.stream, "isatty", None)
            strip = getattr(self.stream, "closed", False) or isatty is None or not isatty()
        self.strip = strip

    def emit(self, record: logging.LogRecord) -> None:
        """Logging.handler method we are overriding to emit a record."""
        try:
            msg = self.format(record)
            if self.strip:
                msg = self.ANSI_CSI_RE.sub("", msg)
            self.stream.write(msg + self.terminator)
            self.flush()
        except Exception:
            self.handleError(record)


def setup_console_logging(
    level: int = logging.INFO, stream: Optional[IO] = None, use_azure: bool = False
) -> logging.Handler:
    """Attaches a ColoredStreamHandler to the root logger and returns it.

    Handlers installed by an earlier call are replaced, so repeated CLI invocations in one
    process do not duplicate output.
    """
    root = logging.getLogger()
    for handler in list(root.handlers):
        if isinstance(handler, ColoredStreamHandler):
            root.removeHandler(handler)
    handler = ColoredStreamHandler(stream if stream is not None else sys.stderr)
    handler.setFormatter(ColoredFormatter(use_azure=use_azure))
    handler.setLevel(level)
    root.addHandler(handler)
    root.setLevel(level)
    return handler
