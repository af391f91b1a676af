import sys

import pytest

from jacsym.polybasis import JacobiBasis

FAMILIES = [(0.0, 0.0), (-0.5, -0.5), (0.5, 0.5), (-0.5, 0.5), (0.5, -0.5)]


@pytest.fixture(params=FAMILIES, ids=lambda ab: f"a{ab[0]}_b{ab[1]}")
def basis(request):
    return JacobiBasis(*request.param)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])
