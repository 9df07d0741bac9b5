import pytest

from cisupport.cimodule import CIRing, present, residue_field
from cisupport.exactalg import PolyRing


def make_ring(nvars: int, p: int = 32003) -> CIRing:
    names = ["x", "y", "z"][:nvars]
    Q = PolyRing(nvars, p, names)
    return CIRing(Q, [g ** 2 for g in Q.gens()])


@pytest.fixture(scope="session")
def F1():
    return make_ring(1)


@pytest.fixture(scope="session")
def F2():
    return make_ring(2)


@pytest.fixture(scope="session")
def F3():
    return make_ring(3)


@pytest.fixture(scope="session")
def fixtures(F1, F2, F3):
    return {"F1": F1, "F2": F2, "F3": F3}


def cyclic(ring, *polys, label=None):
    """``A / (polys)`` with its generator in degree 0."""
    return present(ring, [list(polys)], label=label)


__all__ = ["make_ring", "cyclic", "residue_field", "ACCEPTANCE_LINES"]


# one line per acceptance criterion, printed after the run
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
