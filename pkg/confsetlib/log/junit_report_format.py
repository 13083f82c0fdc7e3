##
# junit_report_format
# This module contains support for Outputting Junit test results xml.
#
# Acceptance checks of an experiment report become test cases, so CI systems
# can show which tolerance failed.
#
# Copyright (c) confsetlib contributors
#
# SPDX-License-Identifier: BSD-2-Clause-Patent
##
"""Module for outputting experiment acceptance checks as Junit xml.

This does test report generation without being a test runner.
"""

import time
import xml.etree.ElementTree as ET
from enum import Enum
from typing import Iterable, Optional


class JunitStatus(Enum):
    """State of a test case."""

    NEW = "new"
    SKIPPED = "skipped"
    FAILED = "failed"
    ERROR = "error"
    SUCCESS = "success"


class JunitReportTestCase(object):
    """Object representing a single test case.

    Attributes:
        Name (str): test name
        ClassName (str): dotted class name shown by CI tools
        Time (float): seconds between creation and the final status
        Status (JunitStatus): current state
    """

    def __init__(self, Name: str, ClassName: str) -> "JunitReportTestCase":
        """Init a Test case with it's name and class name."""
        self.Name = Name.strip()
        self.ClassName = ClassName.strip()
        self.Time = 0.0
        self.Status = JunitStatus.NEW
        self.Message = None
        self.Type = None
        self.StdOut = []
        self.StdErr = []
        self._StartTime = time.time()

    def _finish(self, status: JunitStatus, msg: Optional[str] = None, type: Optional[str] = None) -> None:
        if self.Status is not JunitStatus.NEW:
            raise RuntimeError(f"Can't set {self.Name} to {status.value}. State must be new")
        self.Time = time.time() - self._StartTime
        self.Status = status
        self.Message = None if msg is None else msg.strip()
        self.Type = None if type is None else type.strip()

    def SetFailed(self, Msg: str, Type: str) -> None:
        """Marks the test failed."""
        self._finish(JunitStatus.FAILED, Msg, Type)

    def SetError(self, Msg: str, Type: str) -> None:
        """Marks the test errored."""
        self._finish(JunitStatus.ERROR, Msg, Type)

    def SetSuccess(self) -> None:
        """Marks the test passed."""
        self._finish(JunitStatus.SUCCESS)

    def SetSkipped(self) -> None:
        """Marks the test skipped."""
        self._finish(JunitStatus.SKIPPED)

    def LogStdOut(self, msg: str) -> None:
        """Log to the standard out."""
        self.StdOut.append(msg.strip())

    def LogStdError(self, msg: str) -> None:
        """Log to the standard err."""
        self.StdErr.append(msg.strip())

    def ToElement(self) -> ET.Element:
        """Returns the `<testcase>` element.

        Raises:
            (RuntimeError): the test case never received a status
        """
        if self.Status is JunitStatus.NEW:
            raise RuntimeError(f"Can't output testcase {self.ClassName}.{self.Name} without a status")
        element = ET.Element("testcase", classname=self.ClassName, name=self.Name, time=f"{self.Time:.3f}")
        if self.Status is JunitStatus.SKIPPED:
            ET.SubElement(element, "skipped", type="skipped")
        elif self.Status in (JunitStatus.FAILED, JunitStatus.ERROR):
            tag = "failure" if self.Status is JunitStatus.FAILED else "error"
            ET.SubElement(element, tag, message=self.Message, type=self.Type)
        ET.SubElement(element, "system-out").text = "\n".join(self.StdOut)
        ET.SubElement(element, "system-err").text = "\n".join(self.StdErr)
        return element


class JunitReportTestSuite(object):
    """Object representing one test suite; create it through JunitTestReport."""

    def __init__(self, Name: str, Package: str, Id: int) -> "JunitReportTestSuite":
        """Initialize a new test suite."""
        self.Name = Name.strip()
        self.Package = Package.strip()
        self.TestId = Id
        self.TestCases = []

    def create_new_testcase(self, name: str, classname: str) -> JunitReportTestCase:
        """Create a new test case.

        Returns:
            (JunitReportTestCase): newly created test case
        """
        tc = JunitReportTestCase(name, classname)
        self.TestCases.append(tc)
        return tc

    def ToElement(self) -> ET.Element:
        """Returns the `<testsuite>` element with its counters."""
        statuses = [tc.Status for tc in self.TestCases]
        element = ET.Element(
            "testsuite",
            id=str(self.TestId),
            name=self.Name,
            package=self.Package,
            errors=str(statuses.count(JunitStatus.ERROR)),
            tests=str(len(statuses)),
            failures=str(statuses.count(JunitStatus.FAILED)),
            skipped=str(statuses.count(JunitStatus.SKIPPED)),
        )
        for tc in self.TestCases:
            element.append(tc.ToElement())
        return element


class JunitTestReport(object):
    """Top level object of test reporting."""

    def __init__(self) -> "JunitTestReport":
        """Init an empty test report."""
        self.TestSuites = []

    def create_new_testsuite(self, name: str, package: str) -> JunitReportTestSuite:
        """Create a new test suite.

        Returns:
            (JunitReportTestSuite): newly created testsuite
        """
        ts = JunitReportTestSuite(name, package, len(self.TestSuites))
        self.TestSuites.append(ts)
        return ts

    def add_checks(self, suite_name: str, checks: Iterable) -> JunitReportTestSuite:
        """Adds one suite holding a test case per acceptance check.

        Args:
            suite_name: experiment name, used as suite name and class prefix
            checks: objects with `name`, `passed` and `message` attributes
        """
        ts = self.create_new_testsuite(suite_name, "confsetlib.harness")
        for check in checks:
            tc = ts.create_new_testcase(check.name, f"confsetlib.harness.{suite_name}")
            tc.LogStdOut(check.message)
            if check.passed:
                tc.SetSuccess()
            else:
                tc.SetFailed(check.message, "AcceptanceFailure")
        return ts

    def Output(self, filepath: str) -> None:
        """Write report to file."""
        root = ET.Element("testsuites")
        for ts in self.TestSuites:
            root.append(ts.ToElement())
        ET.ElementTree(root).write(filepath, encoding="utf-8", xml_declaration=True)
