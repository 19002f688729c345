from fractions import Fraction

import pytest

from app.calculation.fqm import Fqm
from app.calculation.lattice_core import GramMatrix, standard_lattice

CORPUS = {
    "U": "U",
    "A2": "A2",
    "A2+A2": "A2+A2",
    "A2+U": "A2+U",
    "A2+U+U": "A2+U+U",
    "A2+A2+U+U": "A2+A2+U+U",
    "D4": "D4",
    "E8": "E8",
    "E8+U+U": "E8+U+U",
    "U(3)": "U(3)",
    "diag(2,-2)": "diag(2,-2)",
    "A1": "diag(2)",
    "-A2+U": "-A2+U",
    "A4": "A4",
    "E6": "E6",
    "D6": "D6",
    "A6": "A6",
    "A2(2)": "A2(2)",
    "A2(3)": "A2(3)",
    "-A2(2)+U": "-A2(2)+U",
    "D4+U(2)": "D4+U(2)",
    "-D4+U": "-D4+U",
    "U(2)": "U(2)",
    "U(5)": "U(5)",
    "diag(2,6)": "diag(2,6)",
    "diag(2,-6)": "diag(2,-6)",
    "diag(4,-10)+U": "diag(4,-10)+U",
    "A2+A2+A2": "A2+A2+A2",
    "-A2+U(3)": "-A2+U(3)",
}

# even rank, small discriminant groups keep the exact Weil checks fast
EVEN_RANK_CORPUS = [
    "U", "A2", "A2+A2", "A2+U", "A2+A2+U+U", "D4", "E8", "U(3)", "diag(2,-2)", "-A2+U",
    "A4", "E6", "D6", "A6", "A2(2)", "A2(3)", "-A2(2)+U", "D4+U(2)", "-D4+U", "U(2)",
    "U(5)", "diag(2,6)", "diag(2,-6)", "diag(4,-10)+U", "A2+A2+A2", "-A2+U(3)",
]


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long running enumeration")


@pytest.fixture(scope="session")
def corpus() -> dict[str, GramMatrix]:
    return {name: standard_lattice(expr) for name, expr in CORPUS.items()}


@pytest.fixture
def a2() -> GramMatrix:
    return standard_lattice("A2")


@pytest.fixture
def a3_1() -> Fqm:
    """(Z/3, x^2/3)."""
    return Fqm.from_diagonal((3,), (Fraction(1, 3),))


@pytest.fixture
def a3_2() -> Fqm:
    """(Z/3, 2x^2/3)."""
    return Fqm.from_diagonal((3,), (Fraction(2, 3),))


@pytest.fixture
def a3_squared() -> Fqm:
    """(Z/3)^2 with Q = (x^2 + y^2)/3."""
    return Fqm.from_diagonal((3, 3), (Fraction(1, 3), Fraction(1, 3)))


@pytest.fixture
def trivial() -> Fqm:
    return Fqm.trivial()
