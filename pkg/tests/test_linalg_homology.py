from fractions import Fraction

import sympy
from hypothesis import given, settings, strategies as st

from prismlab import linalg as la
from prismlab.expr import parse_poly
from prismlab.homology import (FreeComplex, Lattice, ModuleStructure, SliceComplex, bockstein, eta_t,
                               koszul_complex, smith_normal_form)
from prismlab.poly import VariableTable

small = st.integers(-3, 3).map(Fraction)


@st.composite
def matrices(draw, max_rows=5, max_cols=5):
    r, c = draw(st.integers(1, max_rows)), draw(st.integers(1, max_cols))
    return [[draw(small) for _ in range(c)] for _ in range(r)]


def cols_of(rows):
    return la.from_dense(rows)


@settings(max_examples=50, deadline=None)
@given(matrices())
def test_rank_and_kernel_match_sympy(rows):
    cols = cols_of(rows)
    M = sympy.Matrix(rows)
    assert la.rank(cols) == M.rank()
    K = la.kernel(cols)
    assert len(K) == M.cols - M.rank()
    for v in K:
        assert not la.apply(cols, v)


@settings(max_examples=40, deadline=None)
@given(matrices())
def test_solve_finds_preimages(rows):
    cols = cols_of(rows)
    b = la.apply(cols, {0: Fraction(1), len(cols) - 1: Fraction(2)})
    x = la.solve(cols, b)
    assert x is not None and la.apply(cols, x) == b


@st.composite
def truncated_matrices(draw, e=3):
    r, c = draw(st.integers(1, 3)), draw(st.integers(1, 3))
    ent = st.lists(small, min_size=0, max_size=e)
    return [[draw(ent) for _ in range(c)] for _ in range(r)], r, c, e


def _expand(M, r, c, e):
    """Q-matrix of the map Λ^c → Λ^r, Λ = Q[t]/t^e, coordinates (row, t-power)."""
    out = sympy.zeros(r * e, c * e)
    for i in range(r):
        for j in range(c):
            for a in range(e):          # source t-power
                for p, x in enumerate(M[i][j]):
                    if a + p < e:
                        out[i * e + a + p, j * e + a] += sympy.Rational(x.numerator, x.denominator)
    return out


@settings(max_examples=40, deadline=None)
@given(truncated_matrices())
def test_snf_matches_jordan_type_of_cokernel(data):
    M, r, c, e = data
    S = smith_normal_form(M, e, r, c)
    free = r - S.rank
    tors = [a for a in S.exponents if 0 < a < e]
    free += sum(1 for a in S.exponents if a >= e)
    A = _expand(M, r, c, e)
    im = A.rank()
    for k in range(e + 1):
        tk = sympy.zeros(r * e, r * e)
        for i in range(r):
            for a in range(e - k):
                tk[i * e + a + k, i * e + a] = 1
        got = sympy.Matrix.hstack(A, tk).rank() - im
        want = sum(max(0, a - k) for a in tors) + free * max(0, e - k)
        assert got == want


@settings(max_examples=30, deadline=None)
@given(truncated_matrices(e=2), truncated_matrices(e=2))
def test_free_complex_snf_agrees_with_jordan(d0, d1):
    M0, r0, c0, e = d0
    # build C^0 -> C^1 -> 0 and compare the two cohomology algorithms
    C = FreeComplex({0: c0, 1: r0}, {0: M0}, e)
    S = C.to_slice()
    for k in (0, 1):
        assert C.cohomology(k) == S.cohomology(k)


def test_koszul_regular_vs_non_regular():
    T = VariableTable.from_spec([("x", 1), ("y", 1)])
    reg = koszul_complex(T, [parse_poly(T, "x"), parse_poly(T, "y")])
    for w in range(4):
        h = reg.homology_dims(w)
        assert h.get(1, 0) == 0 and h.get(2, 0) == 0
    bad = koszul_complex(T, [parse_poly(T, "x*y"), parse_poly(T, "x^2")])
    assert any(bad.homology_dims(w).get(1, 0) for w in range(5))


def test_bockstein_on_a_two_term_complex():
    # Λ --t--> Λ over Λ = Q[t]/t^2: H^0 = tΛ, H^1 = Λ/t, β: H^0/t -> H^1/t is nonzero
    C = FreeComplex({0: 1, 1: 1}, {0: [[[Fraction(0), Fraction(1)]]]}, 2)
    assert C.cohomology(0) == ModuleStructure(0, (1,))
    assert C.cohomology(1) == ModuleStructure(0, (1,))
    B = bockstein(C.to_slice())
    assert B.compose_zero()
    assert any(B.matrices[0])


def test_eta_t_of_multiplication_by_t():
    C = FreeComplex({0: 1, 1: 1}, {0: [[[Fraction(0), Fraction(1)]]]}, None)
    res = eta_t(C)
    assert res.lattices[0].exps == [0] and res.lattices[1].exps == [1]


def test_lattice_equality():
    I = [[Fraction(1), Fraction(0)], [Fraction(0), Fraction(1)]]
    S = [[Fraction(1), Fraction(1)], [Fraction(0), Fraction(1)]]
    assert Lattice(I, [0, 0]).equals(Lattice(S, [0, 0]))
    assert Lattice(I, [0, 1]).equals(Lattice(S, [0, 1]))     # t(e1+e2) and t e1 give t e2
    R = [[Fraction(1), Fraction(0)], [Fraction(1), Fraction(1)]]
    assert not Lattice(I, [0, 1]).equals(Lattice(R, [0, 1]))
