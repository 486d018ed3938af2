import sys

import pytest

from enre.corpus import CORPUS_DEFS
from enre.operators import build_registry
from enre.oracle import Oracle


@pytest.fixture(scope="session")
def reg():
    return build_registry(CORPUS_DEFS)


@pytest.fixture(scope="session")
def oracle(reg):
    return Oracle(reg)


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    if module is None or not module.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(module.RESULTS):
        terminalreporter.write_line(module.RESULTS[number].line())
