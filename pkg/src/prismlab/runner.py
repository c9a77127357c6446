"""Execute a parsed session and assemble a deterministic JSON report.

The report has a ``stable`` section (byte-identical for identical input and
options) and a ``runtime`` section holding timings and the thread count.
"""

from __future__ import annotations

import json
import random
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from fractions import Fraction

from . import __version__
from .connections import InfinitesimalConnection
from .envelope import LciInput, generator_independence_check, lci, prismatic_envelope
from .expr import parse_poly
from .filtration import IdealAdicFiltration, PsiModule
from .groebner import BudgetExceeded, pair_budget
from .poly import Polynomial
from .spec_parser import Ident, SessionSpec

SCHEMA_VERSION = "1.0"
FAILING = ("fail",)


def jsonable(x):
    """Canonical JSON-ready form: sorted string keys, Fractions and polynomials as strings."""
    if isinstance(x, dict):
        return {str(k) if not isinstance(k, tuple) else ",".join(map(str, k)): jsonable(v)
                for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if isinstance(x, bool) or x is None or isinstance(x, (int, str)):
        return x
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else x.numerator
    if isinstance(x, float):
        return x
    if hasattr(x, "as_dict"):
        return jsonable(x.as_dict())
    if hasattr(x, "to_json_obj"):
        return jsonable(x.to_json_obj())
    return str(x)


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False)


# ------------------------------------------------------------ objects

def build_input(spec: SessionSpec, ref: str) -> LciInput:
    """A fresh input object per task, so tasks share no mutable state."""
    ring = spec.ring_of(ref)
    gens = spec.ideals[ref].gens if ref in spec.ideals else ()
    return lci(ring.vars, gens, ref)


def build_crystal(spec: SessionSpec, inp: LciInput, name: str) -> InfinitesimalConnection:
    c = spec.crystals[name]
    weights = c.weights if c.weights is not None else (0,) * c.rank
    B = {var: [[parse_poly(inp.table, x) for x in row] for row in M] for var, M in c.nabla}
    conn = InfinitesimalConnection(inp.table, tuple(weights), B)
    if not conn.check_homogeneous():
        raise ValueError(f"crystal {name}: connection matrices are not weight-compatible")
    if not conn.is_integrable():
        raise ValueError(f"crystal {name}: connection is not integrable")
    return conn


# -------------------------------------------------------------- tasks

@dataclass
class TaskOutcome:
    index: int
    kind: str
    params: dict
    status: str = "ok"             # ok | error | budget-exceeded
    verdict: str | None = None     # pass | fail | unverified-hypothesis | computed
    result: dict = field(default_factory=dict)
    verification: list = field(default_factory=list)
    error: str | None = None
    seconds: float = 0.0

    def stable(self) -> dict:
        out = {"index": self.index, "kind": self.kind, "params": self.params, "status": self.status,
               "verdict": self.verdict, "result": self.result}
        if self.verification:
            out["verification"] = self.verification
        if self.error is not None:
            out["error"] = self.error
        return out

    @property
    def failed(self) -> bool:
        if self.status == "error":
            return True
        if self.verdict in FAILING:
            return True
        return any(v.get("verdict") in FAILING for v in self.verification)


def _resolved_params(spec: SessionSpec, task) -> dict:
    p = {k: (v.name if isinstance(v, Ident) else list(v) if isinstance(v, tuple) else v)
         for k, v in task.params}
    defaults = {"e": spec.e, "W": spec.W, "L": spec.L, "N": spec.N}
    kind = task.kind
    if kind in ("envelope", "prism_coh", "cech", "psi_check"):
        p.setdefault("e", spec.e)
    if kind == "hodge_tate":
        p.setdefault("e", max(2, spec.e))
    if kind == "cech":
        p.setdefault("L", spec.L)
    if kind in ("resolve", "left_kan"):
        p.setdefault("N", spec.N)
    if kind == "prism_coh":
        p.setdefault("route", "A")
    if kind == "decalage":
        p.setdefault("e_max", max(spec.e, 1))
        p["demonstrate"] = p.get("demonstrate", "false") == "true"
    if kind == "reduction":
        p.setdefault("es", [1, spec.e] if spec.e > 1 else [1])
    if kind == "kunneth":
        p.setdefault("i_max", 2)
    if kind == "localize":
        p.setdefault("K", 3)
        p.setdefault("j_max", 2)
    if kind == "left_kan":
        p.setdefault("i_max", 1)
    p.setdefault("W", defaults["W"])
    return dict(sorted(p.items()))


def _check(res) -> tuple[str, dict]:
    return res.verdict, jsonable(res.as_dict())


def _run_task(spec: SessionSpec, index: int, verify: bool, seed: int) -> TaskOutcome:
    from . import suite
    from .simplicial import left_kan_ht_pieces, resolve_pair

    task = spec.tasks[index]
    p = _resolved_params(spec, task)
    out = TaskOutcome(index, task.kind, p)
    t0 = time.perf_counter()
    rng = random.Random(seed * 1_000_003 + index)
    try:
        kind = task.kind
        W = p["W"]
        if kind == "kunneth":
            a, b = build_input(spec, p["first"]), build_input(spec, p["second"])
            out.verdict, out.result = _check(suite.kunneth_check(a, b, W, p["i_max"]))
            return out
        inp = build_input(spec, p["input"])
        coeff = build_crystal(spec, inp, p["crystal"]) if p.get("crystal") else None
        flag = {"hypothesis": inp.flag}
        if kind == "envelope":
            D = prismatic_envelope(inp, p["e"])
            rows = [{"weight": w, "dim": D.slice_dim(w), "by_bidegree": D.slice_dims_by_bidegree(w)}
                    for w in range(W + 1)]
            out.verdict, out.result = "computed", jsonable({**flag, "slices": rows})
            if verify:
                out.verification.append(_envelope_oracle(inp, D, p["e"], W))
                if inp.gens:
                    out.verification.append(_independence(inp, p["e"], W, rng))
        elif kind == "prism_coh":
            rep = suite.prismatic_cohomology(inp, coeff, p["e"], W, route=p["route"])
            out.verdict, out.result = "computed", jsonable({**flag, "cohomology": rep.to_json_obj()})
            if verify:
                other = "B" if p["route"] == "A" else "A"
                rep2 = suite.prismatic_cohomology(inp, coeff, p["e"], W, route=other)
                same = rep.sorted().entries == rep2.sorted().entries
                out.verification.append({"theorem": "route-agreement", "verdict": suite.verdict_for(same, inp),
                                         "evidence": {"other_route": other}})
                out.verification.append(jsonable(suite.cech_check(inp, spec.L, p["e"], W, coeff).as_dict()))
        elif kind == "inf_coh":
            res = suite.infinitesimal_cohomology(inp, 1, W, coeff)
            out.verdict, out.result = "computed", jsonable({**flag, "cohomology": res.report.to_json_obj()})
            if verify:
                out.verification.append(jsonable(suite.psi_of_infinitesimal_check(inp, coeff, 2, W).as_dict()))
        elif kind == "hodge_tate":
            H = suite.hodge_tate_table(inp, p["e"], W)
            table = [{"degree": k, "weight": w, "dim": v} for (k, w), v in sorted(H.dims.items())]
            pieces = [{"twist": -j, "degree": k, "weight": w, "dim": v}
                      for (j, k, w), v in sorted(H.pieces.items()) if v]
            out.verdict = H.result.verdict
            out.result = jsonable({**flag, "table": table, "pieces": pieces, "check": H.result.as_dict()})
            if verify:
                out.verification.append(jsonable(suite.split_check(inp, W).as_dict()))
        elif kind == "cech":
            out.verdict, out.result = _check(suite.cech_check(inp, p["L"], p["e"], W, coeff))
        elif kind == "decalage":
            out.verdict, out.result = _check(suite.decalage_check(inp, p["e_max"], W, p["demonstrate"]))
        elif kind == "reduction":
            out.verdict, out.result = _check(suite.reduction_check(inp, coeff, W, tuple(p["es"])))
        elif kind == "localize":
            out.verdict, out.result = _check(suite.localization_check(inp, p["f"], W, p["K"], p["j_max"]))
        elif kind == "split":
            out.verdict, out.result = _check(suite.split_check(inp, W))
        elif kind == "psi_check":
            out.verdict, out.result = _check(suite.psi_of_infinitesimal_check(inp, coeff, p["e"], W))
        elif kind == "resolve":
            ideal = ()
            if p.get("pair"):
                ideal = tuple(parse_poly(inp.table, g) for g in spec.ideals[p["pair"]].gens)
            R = resolve_pair(inp, ideal, p["N"], W)
            out.verdict = suite.verdict_for(R.passed, inp)
            out.result = jsonable({**flag, **R.to_json_obj()})
        elif kind == "left_kan":
            K = left_kan_ht_pieces(inp, p["N"], p["i_max"], W)
            rows = [{"piece": i, "degree": -n, "weight": w, "realization": v, "wedge": K.wedge[(i, n, w)]}
                    for (i, n, w), v in sorted(K.gr.items())]
            out.verdict = suite.verdict_for(K.passed, inp)
            out.result = jsonable({**flag, "slices": rows, "cells": [c.name for c in K.resolution.pair.algebra.cells]})
        else:  # pragma: no cover - the parser rejects unknown kinds
            raise ValueError(f"unknown task kind {kind}")
    except BudgetExceeded as ex:
        out.status, out.verdict, out.error = "budget-exceeded", None, str(ex)
    except Exception as ex:  # failures are isolated per task
        out.status, out.verdict, out.error = "error", None, f"{type(ex).__name__}: {ex}"
    finally:
        out.seconds = time.perf_counter() - t0
    return out


def _envelope_oracle(inp: LciInput, D, e: int, W: int) -> dict:
    """Envelope slices against the Rees lattice ``Σ t^{-n} I^n`` built from subspace ranks."""
    psi = PsiModule(IdealAdicFiltration(inp.table, inp.gens, name=inp.name), e)
    rows, ok = [], True
    for w in range(W + 1):
        a, b = D.slice_dims_by_bidegree(w), psi.lattice_dims(w)
        same = {k: v for k, v in a.items() if v} == {k: v for k, v in b.items() if v}
        ok &= same
        rows.append({"weight": w, "envelope": a, "rees": b, "equal": same})
    from .suite import verdict_for
    return jsonable({"theorem": "envelope-rees", "verdict": verdict_for(ok, inp), "evidence": {"slices": rows}})


def _independence(inp: LciInput, e: int, W: int, rng: random.Random) -> dict:
    """Add a seeded random combination of the generators and compare envelopes."""
    geo = inp.geometric
    w = max(inp.gen_weights) + rng.randint(0, 1)
    extra = Polynomial.zero(inp.table)
    for g in inp.gens:
        for m in inp.table.monomials_of_weight(w - g.weight(), geo):
            c = rng.randint(-2, 2)
            if c:
                extra = extra + Polynomial.monomial(inp.table, m, c) * g
    res = generator_independence_check(inp, extra, e, W)
    from .suite import verdict_for
    return jsonable({"theorem": "generator-independence", "verdict": verdict_for(res.passed, inp),
                     "evidence": {"extra": str(extra), **res.as_dict()}})


# ------------------------------------------------------------- report

@dataclass
class Report:
    spec: SessionSpec
    options: dict
    outcomes: list[TaskOutcome]
    threads: int
    seconds: float

    @property
    def exit_code(self) -> int:
        return 3 if any(o.failed for o in self.outcomes) else 0

    def stable(self) -> dict:
        return {"tool": "prismlab", "version": __version__, "schema_version": SCHEMA_VERSION,
                "options": self.options, "spec": self.spec.to_json_obj(),
                "tasks": [o.stable() for o in self.outcomes],
                "summary": {"tasks": len(self.outcomes),
                            "failed": sum(1 for o in self.outcomes if o.failed),
                            "exit_code": self.exit_code}}

    def to_json_obj(self) -> dict:
        return {"stable": self.stable(),
                "runtime": {"threads": self.threads, "total_seconds": round(self.seconds, 6),
                            "task_seconds": [round(o.seconds, 6) for o in self.outcomes]}}

    def stable_json(self) -> str:
        return dumps(self.stable())

    def to_json(self) -> str:
        return dumps(self.to_json_obj())


def apply_overrides(spec: SessionSpec, trunc: int | None = None, weight_max: int | None = None) -> SessionSpec:
    base = dict(spec.base)
    if trunc is not None:
        base["trunc"] = trunc
    if weight_max is not None:
        base["weight_max"] = weight_max
    return replace(spec, base=base)


def run(spec: SessionSpec, verify: bool = False, seed: int = 0, threads: int = 1) -> Report:
    t0 = time.perf_counter()
    idx = range(len(spec.tasks))
    if threads > 1 and len(spec.tasks) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            outcomes = list(pool.map(lambda i: _run_task(spec, i, verify, seed), idx))
    else:
        outcomes = [_run_task(spec, i, verify, seed) for i in idx]
    options = {"verify": verify, "seed": seed, "pair_budget": pair_budget()}
    return Report(spec, options, outcomes, threads, time.perf_counter() - t0)
