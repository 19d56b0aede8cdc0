from pathlib import Path

import numpy as np
import pytest

from src.center.analysis import double_simples, s_matrix
from src.data_processing.ingestion import load_category
from src.morphisms.calculus import DiagramCalculus
from src.tube.algebra import build_tube_algebra
from src.utils.config import Settings

DATA_DIR = Path(__file__).resolve().parent.parent / "data"
PHI = (1 + np.sqrt(5)) / 2


@pytest.fixture(scope="session")
def data_dir() -> Path:
    return DATA_DIR


@pytest.fixture
def settings() -> Settings:
    return Settings(tolerance=1e-9, seed=7, max_split_attempts=8, data_dir=DATA_DIR, log_level="WARNING")


@pytest.fixture
def np_random() -> np.random.Generator:
    return np.random.default_rng(1234)


def _category(name: str):
    return load_category(DATA_DIR / "categories" / f"{name}.json")


@pytest.fixture(scope="session")
def vec_z2():
    return _category("vec_z2")


@pytest.fixture(scope="session")
def vec_z2_symmetric():
    return _category("vec_z2_symmetric")


@pytest.fixture(scope="session")
def vec_z3():
    return _category("vec_z3")


@pytest.fixture(scope="session")
def vec_s3():
    return _category("vec_s3")


@pytest.fixture(scope="session")
def fibonacci():
    return _category("fibonacci")


@pytest.fixture(scope="session")
def semion():
    return _category("semion")


@pytest.fixture(scope="session")
def yang_lee():
    return _category("yang_lee")


@pytest.fixture(scope="session")
def fib_calc(fibonacci):
    return DiagramCalculus(fibonacci)


@pytest.fixture(scope="session")
def semion_calc(semion):
    return DiagramCalculus(semion)


@pytest.fixture(scope="session")
def tube_z2(vec_z2):
    return build_tube_algebra(vec_z2)


@pytest.fixture(scope="session")
def tube_z2_symmetric(vec_z2_symmetric):
    return build_tube_algebra(vec_z2_symmetric)


@pytest.fixture(scope="session")
def tube_z3(vec_z3):
    return build_tube_algebra(vec_z3)


@pytest.fixture(scope="session")
def tube_fib(fibonacci):
    return build_tube_algebra(fibonacci)


@pytest.fixture(scope="session")
def tube_semion(semion):
    return build_tube_algebra(semion)


@pytest.fixture(scope="session")
def tube_s3(vec_s3):
    return build_tube_algebra(vec_s3)


@pytest.fixture(scope="session")
def double_z2(tube_z2):
    simples = double_simples(tube_z2, seed=3)
    return simples, s_matrix(tube_z2, simples)


@pytest.fixture(scope="session")
def double_fib(tube_fib):
    simples = double_simples(tube_fib, seed=3)
    return simples, s_matrix(tube_fib, simples)


@pytest.fixture(scope="session")
def double_semion(tube_semion):
    simples = double_simples(tube_semion, seed=3)
    return simples, s_matrix(tube_semion, simples)


def same_up_to_permutation(a: np.ndarray, b: np.ndarray, tolerance: float = 1e-7) -> bool:
    """True if b = P a Pᵀ for some permutation P (backtracking over rows)."""
    n = a.shape[0]
    if b.shape != a.shape:
        return False
    assignment = []

    def extend(i: int) -> bool:
        if i == n:
            return True
        for t in range(n):
            if t in assignment:
                continue
            if abs(a[i, i] - b[t, t]) > tolerance:
                continue
            if any(abs(a[i, k] - b[t, s]) > tolerance or abs(a[k, i] - b[s, t]) > tolerance
                   for k, s in enumerate(assignment)):
                continue
            assignment.append(t)
            if extend(i + 1):
                return True
            assignment.pop()
        return False

    return extend(0)


def sorted_complex(values) -> np.ndarray:
    return np.array(sorted((complex(v) for v in values), key=lambda z: (round(z.real, 6), round(z.imag, 6))))
