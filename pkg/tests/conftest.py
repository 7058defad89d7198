import sys
import random

import pytest

from subzero import examples, oracle


@pytest.fixture
def ex12():
    return examples.make_example12()


@pytest.fixture
def l3():
    return examples.make_l3()


@pytest.fixture
def frag():
    return examples.make_plug_fragment()


def random_corpus(n=200, base=0, **kw):
    return [oracle.random_automaton(random.Random(base + i), **kw) for i in range(n)]


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.RESULTS:
        terminalreporter.write_line(line)
