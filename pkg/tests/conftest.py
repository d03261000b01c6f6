import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    import sys

    for name, mod in list(sys.modules.items()):
        if name.endswith("test_acceptance") and getattr(mod, "LINES", None):
            terminalreporter.section("acceptance criteria")
            for line in mod.LINES:
                terminalreporter.write_line(line)
            break
