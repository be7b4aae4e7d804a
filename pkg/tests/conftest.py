import os
from functools import lru_cache

import pytest
from hypothesis import settings

from hopfq.catalog import load_bundled

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@lru_cache(maxsize=None)
def bundle(name: str):
    """Bundled structure files are parsed once per session."""
    return load_bundled(name)


@pytest.fixture
def load():
    return bundle


def pytest_collection_modifyitems(config, items):
    if os.environ.get("HOPFQ_EXTENDED") == "1":
        return
    skip = pytest.mark.skip(reason="extended tier: set HOPFQ_EXTENDED=1")
    for item in items:
        if "extended" in item.keywords:
            item.add_marker(skip)


def pytest_terminal_summary(terminalreporter):
    import acceptance_log

    if acceptance_log.LINES:
        terminalreporter.section("acceptance criteria")
        for line in acceptance_log.LINES:
            terminalreporter.write_line(line)
