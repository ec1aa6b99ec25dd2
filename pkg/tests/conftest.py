"""
Спільні фікстури тестів
"""
import json
from pathlib import Path

import pytest

from simulation import make_rng
from solver import SolverConfig
from state_space import QueueParams

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture
def worked_params():
    """M/E_2/2/1 з lambda = mu = 1 (9 станів)"""
    return QueueParams(1.0, 1.0, 2, 2, 1)


@pytest.fixture
def solver_config():
    return SolverConfig()


@pytest.fixture
def rng_factory():
    return make_rng


@pytest.fixture(scope="session")
def reference_tables():
    with open(FIXTURES / "reference_tables.json", "r", encoding="utf-8") as f:
        return json.load(f)
