import functools

import pytest

from weakcomm.catalog import default_catalog_dir, load_catalog
from weakcomm.chi import realize_chi


@functools.lru_cache(maxsize=None)
def catalog() -> dict:
    return {e.name: e for e in load_catalog(default_catalog_dir())}


@functools.lru_cache(maxsize=None)
def chi_of(name: str):
    return realize_chi(catalog()[name])


@pytest.fixture(scope="session")
def cat():
    return catalog()


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
