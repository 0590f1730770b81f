"""Shared algebras and posets; enumeration is cached per session because it dominates runtime."""

from __future__ import annotations

import pytest

from helpers import EXAMPLES, example_poset
from taumute import models


@pytest.fixture(scope="session")
def kqba():
    return models.kq_mod_ba()


@pytest.fixture(scope="session")
def a3():
    return models.linear_An(3)


@pytest.fixture(scope="session")
def kqba_poset():
    return example_poset("a3-mod-ba")


@pytest.fixture(scope="session")
def a3_poset():
    return example_poset("a3")


@pytest.fixture(scope="session")
def posets():
    return {name: example_poset(name) for name in EXAMPLES}


def pytest_terminal_summary(terminalreporter):
    from helpers import ACCEPTANCE
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[n][1])
