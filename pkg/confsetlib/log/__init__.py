##
# File to mark this a python package
#
# Copyright (c) confsetlib contributors
#
# SPDX-License-Identifier: BSD-2-Clause-Patent
##
"""This package contains log handlers and report formatters."""
