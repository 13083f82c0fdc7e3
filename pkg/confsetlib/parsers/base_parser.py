# @file base_parser.py
# Code to support parsing model and experiment files
#
# Copyright (c) confsetlib contributors
#
# SPDX-License-Identifier: BSD-2-Clause-Patent
##
"""Code to support parsing model and experiment files."""

import logging
import os
import re
from typing import Optional, Union

VARIABLE_RE = re.compile(r"\$\(([^)]*)\)")


class BaseParser(object):
    """Shared state and helpers of the text file parsers.

    Attributes:
        Parsed (bool): a file has been parsed
        Lines (list): lines of the last file read, without line endings
        LocalVars (dict): values defined by the file itself
        TargetFilePath (str): absolute path of the last file read
    """

    def __init__(self, log: str = "BaseParser") -> "BaseParser":
        """Inits an empty Parser logging to the named logger."""
        self.Logger = logging.getLogger(log)
        self.TargetFilePath = None
        self.ResetParserState()

    def FindPath(self, *p: str) -> Optional[str]:
        """Resolves a path as given, then relative to the file being parsed.

        Args:
            *p (str): path components

        Returns:
            (str): absolute path of the first candidate that exists
            (None): no candidate exists
        """
        if not p or p[0] is None:
            return None

        candidates = [os.path.join(*p)]
        if self.TargetFilePath is not None:
            candidates.append(os.path.join(os.path.dirname(self.TargetFilePath), *p))
        for candidate in candidates:
            if os.path.exists(candidate):
                return candidate if os.path.isabs(candidate) else os.path.abspath(candidate)

        self.Logger.error(f"Invalid file path: {p}")
        return None

    def ReadLines(self, filepath: str) -> list[str]:
        """Resolves a path, remembers it as TargetFilePath and returns its lines.

        Raises:
            (FileNotFoundError): the path cannot be resolved
        """
        resolved = self.FindPath(filepath)
        if resolved is None:
            raise FileNotFoundError(filepath)
        self.TargetFilePath = resolved
        with open(resolved, "r", encoding="utf-8") as f:
            self.Lines = f.read().splitlines()
        return self.Lines

    def ConvertToInt(self, value: Union[str, int]) -> int:
        """Converts decimal, `0x` hexadecimal or `base^exponent` text to an int.

        Raises:
            (ValueError): the text is none of these
        """
        if isinstance(value, int):
            return value
        text = value.strip()
        if "^" in text:
            base, exponent = text.split("^", 1)
            return self.ConvertToInt(base) ** self.ConvertToInt(exponent)
        return int(text, 16) if text.lower().startswith("0x") else int(text, 10)

    def ReplaceVariables(self, line: str) -> str:
        """Substitutes `$(NAME)` references with LocalVars.

        Unknown names are left in place.
        """

        def lookup(match: re.Match) -> str:
            name = match.group(1)
            if name in self.LocalVars:
                return str(self.LocalVars[name])
            self.Logger.debug("No replacement for $(%s)" % name)
            return match.group(0)

        return VARIABLE_RE.sub(lookup, line)

    def ResetParserState(self) -> None:
        """Forgets the lines and local values of the last parse."""
        self.Lines = []
        self.LocalVars = {}
        self.Parsed = False


class HashFileParser(BaseParser):
    """Base class for files that use # for comments."""

    def StripComment(self, line: str) -> str:
        """Cuts a line at the first `#` outside quotes and strips whitespace.

        A backslash escapes the next character, so `\\"` does not open a quote.
        """
        quote = None
        index = 0
        while index < len(line):
            char = line[index]
            if char == "\\":
                index += 2
                continue
            if quote is not None:
                if char == quote:
                    quote = None
            elif char in "\"'":
                quote = char
            elif char == "#":
                return line[:index].strip()
            index += 1
        return line.strip()
