import pytest

from prismlab.connections import (ConnectionError_, InfinitesimalConnection, LogConnectionData,
                                  check_integrability, check_integrality, check_leibniz,
                                  crystal_transition_series, divided_de_rham, kaehler,
                                  lifted_filtration_slice, pullback_connection, structure_sheaf,
                                  wedge_in)
from prismlab.envelope import lci, prismatic_envelope
from prismlab.expr import parse_poly
from prismlab.poly import Polynomial


def conn(inp, weights, mats):
    T = inp.table
    B = {v: [[parse_poly(T, x) for x in row] for row in M] for v, M in mats.items()}
    return InfinitesimalConnection(T, tuple(weights), B)


def test_forms_and_wedge_signs(plane):
    O1 = kaehler(plane.table, 1)
    assert O1.rank == 2 and O1.label((0,)) == "dx"
    assert wedge_in(1, (0,)) == (-1, (0, 1))
    assert wedge_in(0, (1,)) == (1, (0, 1))
    assert wedge_in(0, (0,)) is None


def test_integrability_detects_curvature(plane):
    good = conn(plane, (0, 2), {"x": [["0", "y"], ["0", "0"]], "y": [["0", "x"], ["0", "0"]]})
    bad = conn(plane, (0, 2), {"x": [["0", "y"], ["0", "0"]]})
    assert good.check_homogeneous() and bad.check_homogeneous()
    assert good.is_integrable()
    assert not bad.is_integrable()
    D = prismatic_envelope(plane, 2)
    with pytest.raises(ConnectionError_):
        pullback_connection(bad, D)
    c = pullback_connection(good, D)
    assert check_integrability(c) and check_integrality(c)


def test_weight_incompatible_matrix_flagged(plane):
    assert not conn(plane, (0, 2), {"x": [["0", "x^2"], ["0", "0"]]}).check_homogeneous()


def test_leibniz_rule(node):
    D = prismatic_envelope(node, 2)
    O = structure_sheaf(D)
    X, Y = Polynomial.var(D.table, "X"), Polynomial.var(D.table, "Y")
    x1 = Polynomial.var(D.table, D.env_names[0])
    assert check_leibniz(O, X * x1 + Y, [X * Y + x1])
    c = pullback_connection(conn(node, (0, 1), {"X": [["0", "1"], ["0", "0"]]}), D)
    assert check_leibniz(c, X + x1, [Y, X * x1])


def test_unscaled_connection_is_not_integral(line):
    D = prismatic_envelope(line, 2)
    c = LogConnectionData(D, (0,), {}, scaled=False)
    assert not check_integrality(c)
    with pytest.raises(ConnectionError_):
        crystal_transition_series(c)


@pytest.mark.parametrize("e", [1, 2])
def test_transition_series_cocycle(node, e):
    D = prismatic_envelope(node, e)
    for c in (structure_sheaf(D), pullback_connection(conn(node, (0, 1), {"X": [["0", "1"], ["0", "0"]]}), D)):
        T = crystal_transition_series(c)
        assert T.cocycle_ok and T.first_order_ok


@pytest.mark.parametrize("name", ["line", "node", "cusp"])
def test_divided_de_rham_is_a_complex(request, name):
    inp = request.getfixturevalue(name)
    C = divided_de_rham(structure_sheaf(prismatic_envelope(inp, 2)))
    for w in range(5):
        C.slice(w).check()


def test_lifted_filtration_slice_is_filtered(node):
    for w in range(4):
        F = lifted_filtration_slice(node, w)
        for k, (lo, hi) in F.bounds.items():
            assert lo == k
        for n in range(4):
            F.gr_slice(n).check()
