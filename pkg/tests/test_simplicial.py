import json

import pytest
from hypothesis import given, settings, strategies as st

from prismlab.cotangent import ring_quotient
from prismlab.envelope import lci
from prismlab.poly import Polynomial
from prismlab.simplicial import (SimplicialError, TruncatedSimplicialAlgebra, attach_cell,
                                 attach_cell_report, degeneracy_op, face_op, homotopy_groups,
                                 left_kan_ht_pieces, resolve_pair, surjections)


def const(vars_, rels=(), N=3):
    return TruncatedSimplicialAlgebra.constant(vars_, rels, N)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 6), st.integers(0, 6))
def test_surjection_count_is_binomial(n, d):
    from math import comb
    got = surjections(n, d)
    assert len(got) == (comb(n, d) if d <= n else 0)
    assert all(u[0] == 0 and u[-1] == d for u in got)


def test_operator_tuples():
    assert face_op(0, 2) == (1, 2)
    assert face_op(2, 2) == (0, 1)
    assert degeneracy_op(0, 1) == (0, 0, 1)


def test_constant_algebra_homotopy():
    A = const([("u", 1)])
    assert A.check_identities()
    assert homotopy_groups(A, 0, 3) == {0: 1, 1: 1, 2: 1, 3: 1}
    assert homotopy_groups(A, 1, 3) == {0: 0, 1: 0, 2: 0, 3: 0}
    with pytest.raises(SimplicialError):
        homotopy_groups(A, 3, 2)


def test_killing_a_variable():
    A = const([("u", 1)])
    B, rep = attach_cell_report(A, 1, "u", 3)
    assert rep.passed
    assert rep.pi_after == {0: 1, 1: 0, 2: 0, 3: 0}
    assert homotopy_groups(B, 1, 3) == {0: 0, 1: 0, 2: 0, 3: 0}


def test_free_cell_then_degree_two_kill():
    A = const([("u", 1)])
    B, rep = attach_cell_report(A, 1, "0", 3, name="x", weight=1)
    assert rep.passed and rep.pi_after == rep.pi_before
    assert homotopy_groups(B, 1, 3)[1] == 1
    x = Polynomial.var(B.table(1), "x<01>")
    C, rep2 = attach_cell_report(B, 2, x, 3)
    assert rep2.passed and homotopy_groups(C, 1, 3) == {0: 0, 1: 0, 2: 0, 3: 0}


def test_two_successive_attachments():
    A = const([("u", 1), ("v", 1)])
    B, r1 = attach_cell_report(A, 1, "u", 3)
    C, r2 = attach_cell_report(B, 1, "v", 3)
    assert r1.passed and r2.passed
    assert r2.pi_after == {0: 1, 1: 0, 2: 0, 3: 0}


def test_non_cycle_rejected():
    A = const([("u", 1)])
    B = attach_cell(A, 1, "u", name="x")
    with pytest.raises(SimplicialError):
        attach_cell(B, 2, Polynomial.var(B.table(1), "x<01>"))


def test_cell_degree_bounds():
    with pytest.raises(SimplicialError):
        attach_cell(const([("u", 1)], N=2), 3, "0")


def test_constant_ring_with_relations():
    A = const([("X", 1), ("Y", 1)], ["X*Y"])
    node = lci([("X", 1), ("Y", 1)], ["X*Y"])
    R = ring_quotient(node)
    assert homotopy_groups(A, 0, 4) == {w: R.slice_dim(w) for w in range(5)}


def test_resolve_line_pair():
    L = lci([("T", 1)], [])
    r = resolve_pair(L, [Polynomial.var(L.table, "T")], 3, 4)
    assert r.passed
    names = [c.name for c in r.pair.algebra.cells]
    assert names == ["X1", "Y1", "e1"]
    assert str(r.pair.algebra.cells[-1].boundary) in ("X1 - Y1", "-X1 + Y1", "Y1 - X1")
    assert homotopy_groups(r.pair, 0, 3) == {0: 0, 1: 1, 2: 1, 3: 1}
    assert homotopy_groups(r.pair, 1, 3) == {0: 0, 1: 0, 2: 0, 3: 0}


def test_resolve_point_is_constant():
    r = resolve_pair(lci([("T", 1)], ["T"]), [], 3, 3)
    assert r.passed
    assert homotopy_groups(r.pair.algebra, 0, 3) == {0: 1, 1: 0, 2: 0, 3: 0}


def test_resolve_node():
    node = lci([("X", 1), ("Y", 1)], ["X*Y"])
    r = resolve_pair(node, [], 3, 4)
    assert r.passed
    assert sum(1 for c in r.pair.algebra.cells if c.degree == 1) == 1


def test_resolve_name_clash_is_avoided():
    inp = lci([("X1", 1)], [])
    r = resolve_pair(inp, [], 2, 2)
    assert [c.name for c in r.pair.algebra.cells] == ["_X1"]


def test_resolution_json_is_deterministic():
    node = lci([("X", 1), ("Y", 1)], ["X*Y"])
    a = resolve_pair(node, [], 3, 3).pair.algebra.to_json()
    b = resolve_pair(node, [], 3, 3).pair.algebra.to_json()
    assert a == b
    data = json.loads(a)
    assert data["truncation"] == 3 and len(data["levels"]) == 4
    assert data["levels"][1]["faces"]["0"]["e1<01>"] == "X1*X2"


def test_left_kan_gr0_independent_of_presentation():
    n1 = lci([("X", 1), ("Y", 1)], ["X*Y"])
    n2 = lci([("X", 1), ("Y", 1), ("Z", 1)], ["X*Y", "Z-X"])
    k1 = left_kan_ht_pieces(n1, 3, 1, 3)
    k2 = left_kan_ht_pieces(n2, 3, 1, 3)
    assert k1.passed and k2.passed
    assert k1.gr == k2.gr


def test_left_kan_scope():
    line = lci([("x", 1)], [])
    with pytest.raises(SimplicialError):
        left_kan_ht_pieces(line, 3, 2, 2)
    with pytest.raises(SimplicialError):
        left_kan_ht_pieces(line, 2, 1, 2)
    assert left_kan_ht_pieces(line, 3, 1, 3).passed
