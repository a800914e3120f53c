"""The structural suites used by ``hopflax verify``."""

import pytest

from hopflax.verify import SUITES, run_suites


@pytest.mark.parametrize("name", sorted(SUITES))
def test_suite_passes_at_degree_five(name):
    checks = run_suites([name], 5)
    assert checks
    assert [c.line() for c in checks if not c.ok] == []


def test_check_lines():
    c = run_suites(["hopf"], 2)[0]
    assert c.line().startswith("PASS  hopf.")
