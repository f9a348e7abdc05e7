"""
Fixtures для всех тестов

Семейства строятся с параметрами по умолчанию: Морс A = 2√2, α = 1
(λ = 0, 7, 12), Гинокио β = 0.8, υ = 4.
"""
import math

import pytest

from config.constants import DEFAULT_PARAMS
from services.potentials import GinocchioParams, MorseParams, ginocchio_family, morse_family
from services.verify import build_grid


@pytest.fixture(scope="session")
def morse_params():
    return MorseParams(A=2.0 * math.sqrt(2.0), alpha=1.0)


@pytest.fixture(scope="session")
def ginocchio_params():
    return GinocchioParams(**DEFAULT_PARAMS["ginocchio"])


@pytest.fixture(scope="session")
def morse(morse_params):
    """Морс с тремя уровнями"""
    return morse_family(morse_params, 3)


@pytest.fixture(scope="session")
def ginocchio(ginocchio_params):
    """Гинокио с четырьмя уровнями"""
    return ginocchio_family(ginocchio_params, 4)


@pytest.fixture(scope="session")
def morse_grid(morse):
    """Укороченная сетка: быстрее стандартной, узлов у знаменателей нет"""
    return build_grid(morse, -3.0, 3.0, 25, node_scan=False)


@pytest.fixture(scope="session")
def ginocchio_grid(ginocchio):
    """Сетка с вырезанной полосой |y| < 0.05"""
    return build_grid(ginocchio, -2.5, 2.5, 21, node_scan=False)
