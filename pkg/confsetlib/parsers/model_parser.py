# @file model_parser.py
# Code to help parse model files and observation strings
#
# Copyright (c) confsetlib contributors
#
# SPDX-License-Identifier: BSD-2-Clause-Patent
##
"""Code to help parse JSON model files and observation strings."""

import json

from confsetlib.errors import ModelValidationError
from confsetlib.models import ModelSpec, validate_model
from confsetlib.parsers.base_parser import BaseParser


class ModelFileParser(BaseParser):
    """Parser for JSON model files.

    Attributes:
        Parsed (bool): Whether the object has parsed a file or not
        Raw (dict): the decoded JSON object
        Model (ModelSpec): the validated model
    """

    def __init__(self) -> "ModelFileParser":
        """Inits an empty parser."""
        BaseParser.__init__(self, "ModelFileParser")
        self.Raw = None
        self.Model = None

    def ParseFile(self, filepath: str) -> ModelSpec:
        """Reads and validates a model file.

        Raises:
            (ModelValidationError): the file is missing, is not JSON, or fails validation
        """
        self.Logger.debug("Parsing file: %s" % filepath)
        try:
            self.ReadLines(filepath)
        except OSError as exc:
            raise ModelValidationError(f"Cannot read model file {filepath}: {exc}") from exc
        try:
            self.Raw = json.loads("\n".join(self.Lines))
        except json.JSONDecodeError as exc:
            raise ModelValidationError(f"{filepath}: invalid JSON at line {exc.lineno}: {exc.msg}") from exc
        self.Model = validate_model(self.Raw)
        self.Parsed = True
        return self.Model


def load_model_file(filepath: str) -> ModelSpec:
    """Returns the validated model stored in a JSON file."""
    return ModelFileParser().ParseFile(filepath)


def parse_observation(model: ModelSpec, text: str) -> tuple[int, ...]:
    """Parses an observation string like `0*1*` into output indices.

    Raises:
        (ModelValidationError): empty string or glyph outside the output alphabet
    """
    return model.output_alphabet.parse(text)
