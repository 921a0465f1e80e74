"""
Helpers shared by the tests.

Doctest examples that take long can be marked with the flag
``# doctest:+SLOW_TEST``. With the finder and parser of this module, such
examples are skipped, which the test runner does for its option *fast*.
"""

import contextlib
import doctest
import io
import types
from collections.abc import Sequence
from typing import Any, Union

import splitric


SLOW_TEST = doctest.register_optionflag("SLOW_TEST")


def _without_slow_examples(test: doctest.DocTest) -> doctest.DocTest:
    test.examples = [
        example for example in test.examples if SLOW_TEST not in example.options
    ]
    return test


class DocTestFinderSkippingSlowTests(doctest.DocTestFinder):
    """DocTestFinder that drops examples flagged SLOW_TEST"""

    def find(
        self,
        obj: object,
        name: Union[str, None] = None,
        module: Union[bool, types.ModuleType, None] = None,
        globs: Union[dict[str, Any], None] = None,
        extraglobs: Union[dict[str, Any], None] = None,
    ) -> list[doctest.DocTest]:
        tests = super().find(obj, name, module, globs, extraglobs)
        return [_without_slow_examples(test) for test in tests]


class DocTestParserSkippingSlowTests(doctest.DocTestParser):
    """DocTestParser that drops examples flagged SLOW_TEST"""

    def get_doctest(
        self,
        string: str,
        globs: dict[str, Any],
        name: str,
        filename: Union[str, None],
        lineno: Union[int, None],
    ) -> doctest.DocTest:
        return _without_slow_examples(
            super().get_doctest(string, globs, name, filename, lineno)
        )


def run_cli(argv: Sequence[str]) -> tuple[int, str, str]:
    """Run the command line interface in-process and return exit status,
    standard output and standard error.

    >>> status, out, err = run_cli(["preset", "--paper-defaults"])
    >>> status, out.splitlines()[3], err
    (0, '[nodes.ground]', '')
    """
    out, err = io.StringIO(), io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        status = splitric.run_command(list(argv))
    return status, out.getvalue(), err.getvalue()
