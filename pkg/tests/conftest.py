import sympy
import pytest

from prismlab.envelope import lci
from prismlab.poly import Polynomial


def to_sympy(p: Polynomial):
    syms = sympy.symbols(p.table.names)
    expr = sympy.Integer(0)
    for m, c in p.terms.items():
        term = sympy.Rational(c.numerator, c.denominator)
        for s, e in zip(syms, m):
            term *= s ** e
        expr += term
    return sympy.expand(expr), syms


def sympy_symbols(table):
    return sympy.symbols(table.names)


@pytest.fixture
def line():
    return lci([("x", 1)], name="line")


@pytest.fixture
def plane():
    return lci([("x", 1), ("y", 1)], name="plane")


@pytest.fixture
def node():
    return lci([("X", 1), ("Y", 1)], ["X*Y"], name="node")


@pytest.fixture
def cusp():
    return lci([("X", 2), ("Y", 3)], ["Y^2-X^3"], name="cusp")


@pytest.fixture
def line_in_plane():
    return lci([("T", 1), ("S", 1)], ["S"], name="line-in-plane")


def pytest_terminal_summary(terminalreporter):
    from criteria_log import RESULTS
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, status, elapsed, limit in sorted(RESULTS):
        terminalreporter.write_line(f"criterion {number:2d} {title}: {status} [{elapsed:.2f}s / {limit:.0f}s]")
