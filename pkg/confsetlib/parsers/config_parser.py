# @file config_parser.py
# Code to help parse experiment config files
#
# Copyright (c) confsetlib contributors
#
# SPDX-License-Identifier: BSD-2-Clause-Patent
##
"""Code to help parse experiment config files.

A config file holds one `KEY = VALUE` pair per line, `#` starts a comment and a
value may reference an earlier key as `$(KEY)`:

```
model = models/erasure_iid.json
gamma = 0.5, 0.95   # one csv per gamma
t     = 50, 100, 200
out   = growth.csv
```
"""

from confsetlib.errors import UsageError
from confsetlib.parsers.base_parser import HashFileParser


class ExperimentConfigParser(HashFileParser):
    """Parser for experiment config files.

    Attributes:
        Parsed (bool): Whether the object has parsed a file or not
        Lines (list): Ordered list of each line in the file
        Dict (dict): Key / Value pair of all lines that contain a `=` in them (key=value)
        Path (str): path to the config file
    """

    def __init__(self) -> "ExperimentConfigParser":
        """Inits an empty parser."""
        HashFileParser.__init__(self, "ExperimentConfigParser")
        self.Lines = []
        self.Parsed = False
        self.Dict = {}
        self.Path = ""

    def ParseFile(self, filepath: str) -> "ExperimentConfigParser":
        """Parses the file provided.

        Raises:
            (UsageError): the file cannot be read or a line is not a `KEY = VALUE` pair
        """
        self.Logger.debug("Parsing file: %s" % filepath)
        try:
            self.ReadLines(filepath)
        except OSError as exc:
            raise UsageError(f"Cannot read config file {filepath}: {exc}") from exc
        self.Path = self.TargetFilePath

        for number, line in enumerate(self.Lines, start=1):
            sline = self.StripComment(line)

            if sline is None or len(sline) < 1:
                continue

            if sline.count("=") != 1:
                raise UsageError(f"{self.Path}:{number}: expected KEY = VALUE, got {sline!r}")
            key, value = (token.strip() for token in sline.split("=", 1))
            if key == "":
                raise UsageError(f"{self.Path}:{number}: missing key")
            value = self.ReplaceVariables(value.strip("\"'"))
            self.Dict[key] = value
            self.LocalVars[key] = value
            self.Logger.debug("Key,values found:  %s = %s" % (key, value))

        self.Parsed = True
        return self
