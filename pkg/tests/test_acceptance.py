"""Acceptance suite: one test per criterion, one printed line per verdict.

Run with ``pytest tests/test_acceptance.py -s`` to see the lines as they
appear; the CLI equivalent is ``coarse-lab selftest``.
"""

import pytest

from coarse_lab.acceptance import CRITERIA

_ctx: dict = {}


def _run(number):
    result = CRITERIA[number](_ctx)
    print(result.line())
    for note in result.details:
        print("    " + note)
    assert result.passed, "; ".join(result.failures)


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number):
    _run(number)
