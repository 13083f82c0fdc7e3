# @file test_config_parser.py
# Contains unit test routines for the experiment config parser.
#
#
# Copyright (c) confsetlib contributors
#
# SPDX-License-Identifier: BSD-2-Clause-Patent
##

import textwrap

import pytest
from confsetlib.errors import UsageError
from confsetlib.parsers.config_parser import ExperimentConfigParser


def _write(tmp_path, text):
    path = tmp_path / "growth.txt"
    path.write_text(textwrap.dedent(text))
    return str(path)


def test_parse_key_values(tmp_path):
    path = _write(
        tmp_path,
        """\
        # acceptance profile
        model = models/erasure_iid.json
        gamma = 0.5, 0.95   # one csv per gamma
        t     = 50,100,200

        out   = "$(model).csv"
        """,
    )
    parser = ExperimentConfigParser().ParseFile(path)
    assert parser.Parsed
    assert parser.Path == path
    assert parser.Dict == {
        "model": "models/erasure_iid.json",
        "gamma": "0.5, 0.95",
        "t": "50,100,200",
        "out": "models/erasure_iid.json.csv",
    }


def test_parse_rejects_line_without_equals(tmp_path):
    path = _write(tmp_path, "model = a.json\njust some words\n")
    with pytest.raises(UsageError, match=":2:"):
        ExperimentConfigParser().ParseFile(path)


def test_parse_rejects_missing_key(tmp_path):
    path = _write(tmp_path, "= 3\n")
    with pytest.raises(UsageError, match="missing key"):
        ExperimentConfigParser().ParseFile(path)


def test_parse_missing_file(tmp_path):
    with pytest.raises(UsageError, match="Cannot read config file"):
        ExperimentConfigParser().ParseFile(str(tmp_path / "missing.txt"))
