from __future__ import annotations

import numpy as np
import pytest

from cmr.potentials import KINDS, ModelCase

_ACCEPTANCE: list[str] = []


@pytest.fixture
def acceptance_log() -> list[str]:
    return _ACCEPTANCE


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240601)


@pytest.fixture(params=KINDS)
def case(request) -> ModelCase:
    return ModelCase(request.param, 1.0)


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
