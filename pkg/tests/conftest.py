import sys

import numpy as np
import pytest

from bsvbs.config import RunConfig
from bsvbs.space import ConfigurationSpace


@pytest.fixture
def space16():
    return ConfigurationSpace.default()


@pytest.fixture
def small_cfg(tmp_path):
    return RunConfig(horizon=400, seeds=(0, 1), out_dir=tmp_path / "out", hyperslot=50)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    if mod is None or not mod.REPORT:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(mod.REPORT, key=lambda s: int(s.split(":")[0].split()[1])):
        terminalreporter.write_line(line)
