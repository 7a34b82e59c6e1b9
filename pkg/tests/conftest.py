import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from wingman_metrics import ScenarioKind, ScenarioSpec, generate  # noqa: E402

_acceptance: dict[str, str] = {}


def random_encounter(seed: int, duration_s: float = 60.0, dt_s: float = 1.0):
    return generate(ScenarioSpec.of(ScenarioKind.RANDOM, seed=seed, duration_s=duration_s, dt_s=dt_s))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance.py" in report.nodeid:
        _acceptance[report.nodeid.split("::")[-1]] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_acceptance):
        terminalreporter.write_line(f"{_acceptance[name].upper():7s} {name}")
