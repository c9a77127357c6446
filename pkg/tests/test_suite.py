import pytest

from oracles import kaehler_dim, monomial_count
from prismlab.connections import InfinitesimalConnection
from prismlab.envelope import lci
from prismlab.expr import parse_poly
from prismlab.homology import ModuleStructure
from prismlab.suite import (SuiteError, cech_check, decalage_check, hodge_tate_table,
                            infinitesimal_cohomology, integral_prismatic_cohomology, is_smooth,
                            kunneth_check, localization_check, prismatic_cohomology,
                            psi_of_infinitesimal_check, reduction_check, split_check,
                            torsion_tabulation, verdict_for)


def rank2(inp, var):
    T = inp.table
    z, one = parse_poly(T, "0"), parse_poly(T, "1")
    return InfinitesimalConnection(T, (0, 1), {var: [[z, one], [z, z]]})


def test_line_cohomology_over_length_two_base(line):
    # t·d on Q[t][x]: the integral H^1 is Λ/t per positive weight, which also shows up in H^0 mod t^2
    rep = prismatic_cohomology(line, None, 2, 3)
    assert rep.get(0, 0) == ModuleStructure(1)
    for w in range(1, 4):
        assert rep.get(0, w) == ModuleStructure(0, (1,))
        assert rep.get(1, w) == ModuleStructure(0, (1,))


@pytest.mark.parametrize("name", ["line", "node", "cusp"])
def test_routes_agree(request, name):
    inp = request.getfixturevalue(name)
    for e in (1, 2):
        a = prismatic_cohomology(inp, None, e, 3, "A").sorted()
        b = prismatic_cohomology(inp, None, e, 3, "B").sorted()
        assert a.entries == b.entries


def test_unknown_route_rejected(line):
    with pytest.raises(SuiteError):
        prismatic_cohomology(line, None, 1, 1, route="C")


@pytest.mark.parametrize("name", ["line", "plane"])
def test_hodge_tate_smooth(request, name):
    inp = request.getfixturevalue(name)
    H = hodge_tate_table(inp, 2, 4)
    assert H.result.passed
    ws = inp.weights_of(inp.geometric)
    for w in range(5):
        assert H.dims[(0, w)] == monomial_count(ws, w)
        assert H.dims[(1, w)] == kaehler_dim(inp, w)


def test_hodge_tate_needs_bockstein_room(line):
    with pytest.raises(SuiteError):
        hodge_tate_table(line, 1, 2)


def test_hodge_tate_node_matches_wedge_cotangent(node):
    assert hodge_tate_table(node, 2, 4).result.passed


@pytest.mark.parametrize("name", ["line", "node"])
@pytest.mark.parametrize("e", [1, 2])
def test_cech_alexander_agrees(request, name, e):
    inp = request.getfixturevalue(name)
    r = cech_check(inp, 2, e, 3)
    assert r.passed, r.evidence


def test_decalage_smooth_and_node(line, plane, node):
    assert decalage_check(line, 3, 4).passed
    assert decalage_check(plane, 2, 3).passed
    with pytest.raises(SuiteError):
        decalage_check(node, 2, 3)
    r = decalage_check(node, 3, 4, demonstrate=True)
    assert r.theorem == "decalage-mismatch" and r.passed and r.evidence["mismatch"]


@pytest.mark.parametrize("name", ["line", "node"])
def test_reduction_with_rank_two_crystal(request, name):
    inp = request.getfixturevalue(name)
    var = inp.geometric[0]
    assert reduction_check(inp, None, 3).passed
    assert reduction_check(inp, rank2(inp, var), 3).passed


def test_integral_cohomology_reduces_to_truncations(node):
    integral = integral_prismatic_cohomology(node, None, 3)
    assert integral.e == 0 and integral.entries


@pytest.mark.parametrize("pair", [("line", "line"), ("node", "line")])
def test_kunneth(request, pair):
    a, b = (request.getfixturevalue(n) for n in pair)
    assert kunneth_check(a, b, 3).passed


@pytest.mark.parametrize("name", ["node", "cusp"])
def test_split(request, name):
    assert split_check(request.getfixturevalue(name), 4).passed


@pytest.mark.parametrize("name,f", [("line", "x"), ("node", "X"), ("cusp", "X")])
def test_localization_diagnostic(request, name, f):
    assert localization_check(request.getfixturevalue(name), f, 3).passed


@pytest.mark.parametrize("name", ["line", "node", "cusp"])
def test_psi_of_infinitesimal(request, name):
    assert psi_of_infinitesimal_check(request.getfixturevalue(name), None, 2, 3).passed


def test_infinitesimal_cohomology_of_line_is_constants(line):
    res = infinitesimal_cohomology(line, 1, 3)
    assert res.report.get(0, 0).free_rank == 1
    assert all(res.report.get(k, w).is_zero() for k in (0, 1) for w in range(1, 4))


def test_smoothness_criterion(line, node, cusp):
    assert is_smooth(line) and not is_smooth(node) and not is_smooth(cusp)


def test_unverified_hypothesis_flag():
    weird = lci([("X", 1), ("Y", 1)], ["X^2", "X*Y"], name="non-regular")
    assert not weird.certified
    assert verdict_for(True, weird) == "unverified-hypothesis"
    assert split_check(weird, 2).verdict == "unverified-hypothesis"


def test_torsion_tabulation_runs(node):
    rows = torsion_tabulation(node, 3)
    assert isinstance(rows, list)
