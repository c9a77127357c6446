"""Acceptance gate: one test per criterion, each timed against its limit.

Run with ``pytest tests/test_acceptance.py -v``; the summary section lists one
pass/fail line per criterion.
"""

import random
import subprocess
import sys
from pathlib import Path

import pytest

from criteria_log import criterion
from oracles import (kaehler_dim, monomial_count, monomial_ideal_power_dim, random_monomial_ideal,
                     rees_bidegree_dims)
from prismlab.connections import InfinitesimalConnection
from prismlab.cotangent import ring_quotient, wedge_dims
from prismlab.envelope import (envelope_injectivity_check, generator_independence_check, lci,
                               prismatic_envelope)
from prismlab.expr import parse_poly
from prismlab.filtration import IdealAdicFiltration, psi_gr_check, simpson_psi
from prismlab.poly import Polynomial, VariableTable
from prismlab.simplicial import (TruncatedSimplicialAlgebra, attach_cell, attach_cell_report,
                                 homotopy_groups, left_kan_ht_pieces, resolve_pair)
from prismlab.suite import (cech_check, decalage_check, hodge_tate_table, kunneth_check,
                            prismatic_cohomology, reduction_check, split_check)

DEMO = Path(__file__).resolve().parent.parent / "demos" / "node.prism"


def _nz(d):
    return {k: v for k, v in d.items() if v}


def _inputs():
    return [lci([("T", 1), ("S", 1)], ["S"], name="line-in-plane"),
            lci([("X", 1), ("Y", 1)], ["X*Y"], name="node"),
            lci([("X", 2), ("Y", 3)], ["Y^2-X^3"], name="cusp")]


def test_c01_envelope_equals_rees():
    with criterion(1, "envelope = Psi = Rees oracle", 30):
        for inp in _inputs():
            for e in (1, 2, 3):
                D = prismatic_envelope(inp, e)
                psi = simpson_psi(IdealAdicFiltration(inp.table, inp.gens), e)
                for w in range(7):
                    got = _nz(D.slice_dims_by_bidegree(w))
                    assert got == rees_bidegree_dims(inp, e, w), (inp.name, e, w)
                    assert got == _nz(psi.lattice_dims(w)), (inp.name, e, w)


def test_c02_generator_independence():
    rng = random.Random(2)
    with criterion(2, "generator independence", 10):
        for inp in _inputs():
            g = inp.gens[0]
            geo = [Polynomial.var(inp.table, v) for v in inp.geometric]
            extras = [Polynomial.zero(inp.table), 3 * g]
            # a positive-degree multiple of g with a random coefficient
            extras.append(rng.randint(1, 5) * geo[rng.randrange(len(geo))] * g)
            for extra in extras:
                for e in (1, 2, 3):
                    res = generator_independence_check(inp, extra, e, 4)
                    assert res.passed, (inp.name, str(extra), e)


def test_c03_hodge_tate_smooth():
    with criterion(3, "Hodge-Tate smooth", 30):
        for inp in (lci([("x", 1)], name="line"), lci([("x", 1), ("y", 1)], name="plane")):
            H = hodge_tate_table(inp, 2, 6)
            assert H.result.passed
            rows = H.result.evidence["slices"]
            assert rows and all(r["bockstein_equals_d"] for r in rows)
            ws = inp.weights_of(inp.geometric)
            for w in range(7):
                assert H.dims[(0, w)] == monomial_count(ws, w)
                assert H.dims[(1, w)] == kaehler_dim(inp, w)


def test_c04_decalage():
    with criterion(4, "infinitesimal comparison (decalage)", 30):
        for inp in (lci([("x", 1)], name="line"), lci([("x", 1), ("y", 1)], name="plane")):
            r = decalage_check(inp, 3, 4)
            assert r.passed
            assert all(row["termwise_equal"] for row in r.evidence["slices"])
        node = lci([("X", 1), ("Y", 1)], ["X*Y"], name="node")
        r = decalage_check(node, 3, 4, demonstrate=True)
        assert r.theorem == "decalage-mismatch"
        assert any(not row["termwise_equal"] for row in r.evidence["slices"])


def test_c05_cech_alexander():
    with criterion(5, "Cech-Alexander oracle", 300):
        for inp in (lci([("x", 1)], name="line"), lci([("X", 1), ("Y", 1)], ["X*Y"], name="node")):
            for e in (1, 2):
                assert cech_check(inp, 2, e, 4).passed, (inp.name, e)


def test_c06_psi_graded_formula():
    rng = random.Random(6)
    with criterion(6, "Psi mod t = graded pieces, 20 random ideals", 60):
        for _ in range(20):
            weights, gens = random_monomial_ideal(rng, 3, 4)
            T = VariableTable.from_spec([(f"v{i}", w) for i, w in enumerate(weights)])
            F = IdealAdicFiltration(T, [Polynomial.monomial(T, tuple(g) + (0,)) for g in gens])
            assert psi_gr_check(F, 4).passed, (weights, gens)
            for w in range(5):
                want = {n: monomial_ideal_power_dim(weights, gens, n, w)
                        - monomial_ideal_power_dim(weights, gens, n + 1, w) for n in range(w + 2)}
                assert F.gr_dims(w) == _nz(want)


def _rank2(inp):
    T = inp.table
    z, one = parse_poly(T, "0"), parse_poly(T, "1")
    return InfinitesimalConnection(T, (0, 1), {inp.geometric[0]: [[z, one], [z, z]]})


def test_c07_crystal_reduction():
    with criterion(7, "crystal reduction, rank <= 2", 60):
        for inp in (lci([("x", 1)], name="line"), lci([("X", 1), ("Y", 1)], ["X*Y"], name="node")):
            assert reduction_check(inp, None, 3).passed
            assert reduction_check(inp, _rank2(inp), 3).passed


def test_c08_kunneth():
    line = lci([("x", 1)], name="line")
    node = lci([("X", 1), ("Y", 1)], ["X*Y"], name="node")
    with criterion(8, "Kunneth", 120):
        for a, b in ((line, line), (node, line), (node, node)):
            r = kunneth_check(a, b, 4, 2)
            assert r.passed, (a.name, b.name)
            assert r.evidence["cotangent"]["verdict"] == "pass"


def test_c09_splitting():
    with criterion(9, "splitting into graded pieces", 60):
        for inp in _inputs()[1:]:
            r = split_check(inp, 4)
            assert r.passed
            assert all("twist" in row for row in r.evidence["slices"])


def test_c10_simplicial_suite():
    with criterion(10, "simplicial suite", 120):
        const = TruncatedSimplicialAlgebra.constant
        A1 = const([("u", 1)], [], 3)
        A2 = const([("u", 1), ("v", 1)], [], 3)
        B2 = attach_cell(A2, 1, "u")
        free = attach_cell(A1, 1, "0", name="x", weight=1)
        instances = [(A1, 1, "u"), (A1, 1, "0"), (B2, 1, "v"),
                     (const([("X", 1), ("Y", 1)], [], 3), 1, "X*Y"),
                     (free, 2, Polynomial.var(free.table(1), "x<01>"))]
        for A, d, omega in instances:
            _, rep = attach_cell_report(A, d, omega, 3)
            assert rep.passed and rep.levels_unchanged and rep.ses_ok

        line = lci([("T", 1)], [])
        r = resolve_pair(line, [Polynomial.var(line.table, "T")], 3, 4)
        assert r.passed
        assert homotopy_groups(r.pair.algebra, 0, 4) == {w: 1 for w in range(5)}
        assert homotopy_groups(r.pair, 0, 4) == {0: 0, 1: 1, 2: 1, 3: 1, 4: 1}
        assert set(homotopy_groups(r.pair.algebra, 1, 4).values()) == {0}
        assert set(homotopy_groups(r.pair, 1, 4).values()) == {0}

        node = lci([("X", 1), ("Y", 1)], ["X*Y"], name="node")
        R = ring_quotient(node)
        r = resolve_pair(node, [], 3, 4)
        assert r.passed
        assert homotopy_groups(r.pair.algebra, 0, 4) == {w: R.slice_dim(w) for w in range(5)}
        assert set(homotopy_groups(r.pair.algebra, 1, 4).values()) == {0}

        k = left_kan_ht_pieces(node, 3, 1, 3)
        assert k.passed
        wd = wedge_dims(node, 1, 3)
        for w in range(4):
            assert k.gr[(0, 0, w)] == R.slice_dim(w)
            for n in (0, 1):
                assert k.gr.get((1, n, w), 0) == wd.get((-n, w), 0)


@pytest.mark.xfail(strict=True, reason="P/(I^n, t^n) -> D/t^n has the kernel element t*f for f in I; see ledger")
def test_c11_envelope_injectivity_literal():
    with criterion(11, "envelope injectivity from P/(I^n, t^n)", 30, expect_fail=True):
        for inp in _inputs()[:2]:
            for n in (2, 3):
                assert envelope_injectivity_check(inp, n, 4, source="literal").passed, (inp.name, n)


def test_c11_envelope_injectivity_adic_form():
    # the injective form of the same map, from P/(t, I)^n; it computes the same inverse limit
    for inp in _inputs()[:2]:
        for n in (2, 3):
            assert envelope_injectivity_check(inp, n, 4, source="adic").passed


def _demo_report(tmp_path, tag, threads):
    out = tmp_path / f"{tag}.json"
    proc = subprocess.run([sys.executable, "-m", "prismlab.cli", "run", str(DEMO), "--out", str(out),
                           "--stable-only", "--verify", "--threads", str(threads)],
                          capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    return out.read_bytes()


def test_c12_cli_determinism(tmp_path):
    with criterion(12, "CLI determinism", 30):
        runs = [_demo_report(tmp_path, f"r{i}", 1) for i in range(3)]
        runs.append(_demo_report(tmp_path, "t4", 4))
        assert all(r == runs[0] for r in runs)
