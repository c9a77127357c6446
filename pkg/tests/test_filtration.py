import random

from hypothesis import given, settings, strategies as st

from oracles import monomial_ideal_power_dim, random_monomial_ideal
from prismlab.filtration import (IdealAdicFiltration, PsiModule, adapted_basis, convolution_filtration,
                                 convolve_gr, psi_gr_check, trivial_filtration)
from prismlab.poly import Polynomial, VariableTable


def build(weights, gens):
    T = VariableTable.from_spec([(f"v{i}", w) for i, w in enumerate(weights)])
    polys = [Polynomial.monomial(T, tuple(e) + (0,)) for e in gens]
    return IdealAdicFiltration(T, polys)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10_000))
def test_psi_mod_t_is_associated_graded(seed):
    weights, gens = random_monomial_ideal(random.Random(seed))
    F = build(weights, gens)
    res = psi_gr_check(F, 4)
    assert res.passed, res.as_dict()
    for w in range(5):
        want = {}
        for n in range(w + 2):
            v = monomial_ideal_power_dim(weights, gens, n, w) - monomial_ideal_power_dim(weights, gens, n + 1, w)
            if v:
                want[n] = v
        assert F.gr_dims(w) == want


def test_psi_dimension_is_e_times_rank():
    F = build([1, 1], [[1, 1]])
    for e in (1, 2, 3):
        P = PsiModule(F, e)
        for w in range(4):
            assert sum(P.lattice_dims(w).values()) == P.dim(w) == e * F.dim(w)
            assert {k: v for k, v in P.presentation_dims(w).items() if v} == \
                   {k: v for k, v in P.lattice_dims(w).items() if v}


def test_trivial_filtration_gr_is_everything():
    T = VariableTable.from_spec([("x", 1)])
    F = trivial_filtration(T)
    assert F.gr_dims(3) == {0: 1}


def test_adapted_basis_levels():
    from prismlab import linalg as la
    # Fil^1 = span(e0), Fil^2 = 0 inside Q^2
    A = adapted_basis(2, lambda n: [la.unit(0)] if n == 1 else [], 0, 2)
    assert sorted(A.levels) == [0, 1]


def test_convolution_of_graded_pieces():
    a = build([1], [[1]])
    T2 = VariableTable.from_spec([("u", 1)])
    b = IdealAdicFiltration(T2, [Polynomial.var(T2, "u")])
    c = convolution_filtration(a, b)
    W = 4
    ga = {w: a.gr_dims(w) for w in range(W + 1)}
    gb = {w: b.gr_dims(w) for w in range(W + 1)}
    conv = convolve_gr(ga, gb, W)
    for w in range(W + 1):
        assert c.gr_dims(w) == conv[w]
