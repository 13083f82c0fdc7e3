##
# File to mark this a python package
#
# Copyright (c) confsetlib contributors
#
# SPDX-License-Identifier: BSD-2-Clause-Patent
##
"""Confidence sets for signals observed through noisy channels.

Read more: https://docs.python.org/3/reference/import.html#regular-packages
"""
