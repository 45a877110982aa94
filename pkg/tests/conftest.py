import sys
from functools import lru_cache
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from sigmaforge import build_lattice, catalog  # noqa: E402

# criterion -> (passed, detail), filled in by test_acceptance
ACCEPTANCE: dict = {}


@lru_cache(maxsize=None)
def cached_group(name):
    return catalog.build(name)


@lru_cache(maxsize=None)
def cached_lattice(name):
    return build_lattice(cached_group(name))


@pytest.fixture
def G():
    return cached_group


@pytest.fixture
def L():
    return cached_lattice


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[key]
        terminalreporter.write_line(f"criterion {key:>2}: {'PASS' if ok else 'FAIL'}  {detail}")
