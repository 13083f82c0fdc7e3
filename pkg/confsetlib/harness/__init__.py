##
# File to mark this a python package
#
# Copyright (c) confsetlib contributors
#
# SPDX-License-Identifier: BSD-2-Clause-Patent
##
"""Experiment drivers behind the `confset` command line tool."""
