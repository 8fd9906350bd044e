import json
import sys
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, str(Path(__file__).parent))

from floerkit.acceptance import fixture, fixture_text  # noqa: E402

settings.register_profile(
    "repo", deadline=None, derandomize=True, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("repo")


@pytest.fixture
def trefoil():
    return fixture("trefoil")


@pytest.fixture
def unknot():
    return fixture("unknot")


@pytest.fixture
def fig8():
    return fixture("figure-eight")


def doc(name: str) -> dict:
    return json.loads(fixture_text(name))


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod and mod.LINES:
        terminalreporter.section("acceptance criteria")
        for n in sorted(mod.LINES):
            terminalreporter.write_line(mod.LINES[n])
