import pytest
import random

from oracles import rees_bidegree_dims
from prismlab.envelope import (EnvelopeError, check_cosimplicial_identities, envelope_injectivity_check,
                               generator_independence_check, lci, prismatic_envelope,
                               self_product_envelope)
from prismlab.expr import parse_poly
from prismlab.filtration import IdealAdicFiltration, PsiModule
from prismlab.poly import Polynomial


def _nz(d):
    return {k: v for k, v in d.items() if v}


@pytest.mark.parametrize("name", ["line_in_plane", "node", "cusp"])
@pytest.mark.parametrize("e", [1, 2])
def test_envelope_matches_rees_oracle(request, name, e):
    inp = request.getfixturevalue(name)
    D = prismatic_envelope(inp, e)
    psi = PsiModule(IdealAdicFiltration(inp.table, inp.gens), e)
    for w in range(5):
        got = _nz(D.slice_dims_by_bidegree(w))
        assert got == rees_bidegree_dims(inp, e, w)
        assert got == _nz(psi.lattice_dims(w))


def test_smooth_input_envelope_is_polynomial_ring(line):
    D = prismatic_envelope(line, 2)
    assert [D.slice_dim(w) for w in range(4)] == [2, 2, 2, 2]


def test_envelope_is_t_torsion_free(node, cusp):
    for inp in (node, cusp):
        assert prismatic_envelope(inp, 2).torsion_free_witness()


def test_generator_independence_with_random_redundancy(node):
    rng = random.Random(7)
    X, Y = Polynomial.var(node.table, "X"), Polynomial.var(node.table, "Y")
    for extra in (X * node.gens[0], (X + 2 * Y) * node.gens[0], Polynomial.zero(node.table)):
        res = generator_independence_check(node, extra, 2, 4)
        assert res.passed, res.as_dict()


def test_extra_generator_outside_ideal_rejected(node):
    with pytest.raises(EnvelopeError):
        generator_independence_check(node, parse_poly(node.table, "X"), 2, 3)


def test_inhomogeneous_generators_rejected():
    with pytest.raises(EnvelopeError):
        lci([("x", 1), ("y", 1)], ["x^2 - y"])


def test_generators_with_t_rejected():
    with pytest.raises(EnvelopeError):
        lci([("x", 1)], ["t*x"])


def test_cosimplicial_identities(node, line):
    assert check_cosimplicial_identities(line, 2, 2)
    assert check_cosimplicial_identities(node, 1, 2)


def test_self_product_has_diagonal_variables(node):
    D1 = self_product_envelope(node, 1, 1)
    assert len(D1.quotient.table) > len(prismatic_envelope(node, 1).table)


def test_injectivity_adic_source_holds(node, line_in_plane):
    for inp in (node, line_in_plane):
        for n in (2, 3):
            assert envelope_injectivity_check(inp, n, 4, source="adic").passed


def test_injectivity_literal_source_has_witness(node):
    res = envelope_injectivity_check(node, 2, 3, source="literal")
    assert not res.passed
    assert any("t*X*Y" in str(p) or "X*Y*t" in str(p) for p in res.kernel[2])
