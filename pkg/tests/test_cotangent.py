import pytest

from oracles import kaehler_dim, monomial_count, quotient_dim
from prismlab.cotangent import (cotangent_complex, cotangent_kunneth, product_input, ring_quotient,
                                wedge_dims, wedge_power)


@pytest.mark.parametrize("name", ["line", "plane"])
def test_smooth_cotangent_is_free_omega(request, name):
    inp = request.getfixturevalue(name)
    L = cotangent_complex(inp)
    n = len(inp.geometric)
    ws = inp.weights_of(inp.geometric)
    for w in range(5):
        h = L.cohomology_dims(w)
        assert h.get(-1, 0) == 0
        assert h[0] == sum(monomial_count(ws, w - wi) for wi in ws)


@pytest.mark.parametrize("name", ["node", "cusp"])
def test_h0_is_kaehler_differentials(request, name):
    inp = request.getfixturevalue(name)
    L = cotangent_complex(inp)
    for w in range(6):
        assert L.cohomology_dims(w).get(0, 0) == kaehler_dim(inp, w)
        assert ring_quotient(inp).slice_dim(w) == quotient_dim(inp, w)


def test_wedge_zero_is_ring(node):
    for (k, w), v in wedge_dims(node, 0, 4).items():
        assert k == 0 and v == quotient_dim(node, w)


def test_wedge_powers_of_hypersurface_euler_characteristic(node):
    # Σ_j (-1)^j dim(Sym^j ε ⊗ ∧^{i-j} dT) equals the Euler characteristic of the slice
    for i in range(3):
        C = wedge_power(cotangent_complex(node), i)
        for w in range(5):
            S = C.slice(w)
            chi = sum((-1) ** k * S.cohomology_dim(k) for k in S.degrees)
            assert chi == S.euler_characteristic()


def test_product_input_renames_clashes(line):
    prod = product_input(line, line)
    assert prod.geometric == ["x", "x_2"]


@pytest.mark.parametrize("pair", [("line", "line"), ("node", "line"), ("node", "node")])
def test_cotangent_kunneth(request, pair):
    a, b = (request.getfixturevalue(n) for n in pair)
    res = cotangent_kunneth(a, b, 3)
    assert res.verdict == "pass", res.evidence
