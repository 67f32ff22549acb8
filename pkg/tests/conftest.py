from __future__ import annotations

import pathlib

import pytest

from relmult.gring import MultigradedRing, polynomial_ring
from relmult.multiplicity import ProblemSpec

ROOT = pathlib.Path(__file__).resolve().parent.parent
CORPUS = ROOT / "corpus"


def example_ring(prime: int = 32003) -> MultigradedRing:
    """k[x1,x2,x3,y1,y2,y3]/(x3*(y1,y2,y3), y3*(x1,x2,x3)), bigraded."""
    names = ("x1", "x2", "x3", "y1", "y2", "y3")
    degs = ((1, 0),) * 3 + ((0, 1),) * 3
    P = polynomial_ring(names, degs)
    x1, x2, x3, y1, y2, y3 = P.gens()
    rels = (x3 * y1, x3 * y2, x3 * y3, y3 * x1, y3 * x2)
    return MultigradedRing(names, degs, rels, prime)


@pytest.fixture(scope="session")
def ex_ring():
    return example_ring()


@pytest.fixture(scope="session")
def ex_spec(ex_ring):
    x1, x2, x3, y1, y2, y3 = ex_ring.gens()
    return ProblemSpec.from_generators(ex_ring, [[x1, x2], [y1, y2]])


@pytest.fixture(scope="session")
def line_spec():
    """k[x] inside k[x,y]."""
    R = polynomial_ring(["x", "y"])
    x, y = R.gens()
    return ProblemSpec.from_generators(R, [[x]])


@pytest.fixture(scope="session")
def double_line_spec():
    """k[x] inside k[x,y]/(y^2)."""
    P = polynomial_ring(["x", "y"])
    x, y = P.gens()
    R = MultigradedRing(("x", "y"), ((1,), (1,)), (y * y,))
    return ProblemSpec.from_generators(R, [[x]])


_ACCEPTANCE: list[tuple[str, str, float]] = []


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance.py::test_criterion_" in report.nodeid:
        name = report.nodeid.split("::")[-1]
        _ACCEPTANCE.append((name, "PASS" if report.passed else "FAIL", report.duration))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome, duration in sorted(_ACCEPTANCE, key=lambda r: int(r[0].split("_")[2])):
        number = name.split("_")[2]
        label = " ".join(name.split("_")[3:])
        terminalreporter.write_line(f"criterion {number}: {outcome}  {label}  ({duration:.1f} s)")
