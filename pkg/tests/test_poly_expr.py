from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from conftest import to_sympy
from prismlab.expr import ExprError, parse_poly
from prismlab.poly import Polynomial, VariableTable

T = VariableTable.from_spec([("x", 1), ("y", 2), ("z", 1)])
names = ["x", "y", "z"]


@st.composite
def polys(draw, max_terms=4):
    p = Polynomial.zero(T)
    for _ in range(draw(st.integers(0, max_terms))):
        c = draw(st.fractions(min_value=-5, max_value=5, max_denominator=4))
        m = tuple(draw(st.integers(0, 2)) for _ in names) + (draw(st.integers(0, 1)),)
        p = p + Polynomial.monomial(T, m, c)
    return p


@settings(max_examples=60, deadline=None)
@given(polys(), polys(), polys())
def test_ring_axioms(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert (a * b) * c == a * (b * c)
    assert a * b == b * a
    assert a - a == Polynomial.zero(T)


@settings(max_examples=40, deadline=None)
@given(polys(), polys())
def test_product_matches_sympy(a, b):
    ea, _ = to_sympy(a)
    eb, _ = to_sympy(b)
    ep, _ = to_sympy(a * b)
    assert sympy.expand(ea * eb - ep) == 0


@settings(max_examples=40, deadline=None)
@given(polys())
def test_derivative_matches_sympy(a):
    ea, syms = to_sympy(a)
    for n, s in zip(T.names, syms):
        ed, _ = to_sympy(a.derivative(n))
        assert sympy.expand(sympy.diff(ea, s) - ed) == 0


@settings(max_examples=40, deadline=None)
@given(polys())
def test_render_parse_round_trip(a):
    assert parse_poly(T, str(a)) == a


def test_substitute_is_ring_map():
    x, y = Polynomial.var(T, "x"), Polynomial.var(T, "y")
    p = parse_poly(T, "x^2*y - 3*y + 1/2")
    img = {"x": x + y, "y": x * x}
    assert p.substitute(img) == (x + y) ** 2 * x * x - 3 * x * x + Fraction(1, 2)


def test_weights_and_homogeneity():
    p = parse_poly(T, "x^2 + y")
    assert p.is_homogeneous() and p.weight() == 2
    assert not parse_poly(T, "x + y").is_homogeneous()


def test_t_is_implicit_weight_zero():
    assert T.names[-1] == "t"
    assert parse_poly(T, "t*x").weight() == 1


@pytest.mark.parametrize("text,col", [("x*y-", 5), ("x**", 3), ("x + w", 5), ("2^x", 3)])
def test_parse_errors_have_positions(text, col):
    with pytest.raises(ExprError) as ex:
        parse_poly(T, text)
    assert ex.value.pos + 1 == col


def test_unicode_minus_accepted():
    assert parse_poly(T, "x−y") == parse_poly(T, "x-y")
