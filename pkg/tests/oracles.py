"""Independent reference computations used only by the tests (sympy ranks, monomial counts)."""

import itertools
from functools import lru_cache

import sympy

from prismlab.poly import Polynomial


def _rank(vectors, n):
    if not vectors:
        return 0
    return sympy.Matrix(vectors).rank()


def ideal_power_dim(inp, n: int, w: int) -> int:
    """``dim (I^n)_w`` spanned by monomial multiples of n-fold generator products."""
    geo = inp.geometric
    mons = inp.table.monomials_of_weight(w, geo)
    if n <= 0:
        return len(mons)
    if not inp.gens:
        return 0
    index = {m: i for i, m in enumerate(mons)}
    vecs = []
    for combo in itertools.combinations_with_replacement(range(len(inp.gens)), n):
        prod = Polynomial.constant(inp.table, 1)
        for j in combo:
            prod = prod * inp.gens[j]
        if prod.is_zero() or prod.weight() > w:
            continue
        for m in inp.table.monomials_of_weight(w - prod.weight(), geo):
            q = Polynomial.monomial(inp.table, m) * prod
            row = [0] * len(mons)
            for mm, c in q.terms.items():
                row[index[mm]] = sympy.Rational(c.numerator, c.denominator)
            vecs.append(row)
    return _rank(vecs, len(mons))


def rees_bidegree_dims(inp, e: int, w: int) -> dict[int, int]:
    """``(Σ_n t^{-n} I^n)/t^e`` in weight ``w`` by t-degree ``k``: ``I^{-k}/I^{e-k}``."""
    out = {}
    top = w // max(1, min(inp.gen_weights, default=1)) + 1
    for k in range(-top - 1, e):
        a = ideal_power_dim(inp, max(0, -k), w)
        b = ideal_power_dim(inp, max(0, e - k), w)
        if a - b:
            out[k] = a - b
    return out


def monomial_count(weights, w: int) -> int:
    @lru_cache(None)
    def rec(i, r):
        if i == len(weights):
            return 1 if r == 0 else 0
        return sum(rec(i + 1, r - k * weights[i]) for k in range(r // weights[i] + 1))
    return rec(0, w)


def quotient_dim(inp, w: int) -> int:
    """``dim (P/I)_w`` by sympy rank of the degree-w part of I."""
    return monomial_count(inp.weights_of(inp.geometric), w) - ideal_power_dim(inp, 1, w)


def monomial_ideal_power_dim(weights, gens_exps, n: int, w: int) -> int:
    """``dim (I^n)_w`` for a monomial ideal given by exponent vectors: count divisible monomials."""
    gv = len(weights)
    mons = []

    def rec(i, r, cur):
        if i == gv:
            if r == 0:
                mons.append(tuple(cur))
            return
        for k in range(r // weights[i] + 1):
            rec(i + 1, r - k * weights[i], cur + [k])

    rec(0, w, [])
    if n == 0:
        return len(mons)
    prods = set()
    for combo in itertools.combinations_with_replacement(range(len(gens_exps)), n):
        prods.add(tuple(sum(gens_exps[j][v] for j in combo) for v in range(gv)))
    return sum(1 for m in mons if any(all(a >= b for a, b in zip(m, p)) for p in prods))


def random_monomial_ideal(rng, max_vars=3, max_weight=4):
    nv = rng.randint(1, max_vars)
    weights = [rng.randint(1, 2) for _ in range(nv)]
    gens = []
    for _ in range(rng.randint(1, 3)):
        while True:
            e = [rng.randint(0, 2) for _ in range(nv)]
            wt = sum(a * b for a, b in zip(e, weights))
            if 0 < wt <= max_weight:
                break
        gens.append(e)
    return weights, gens


def kaehler_dim(inp, w: int) -> int:
    """``dim (Ω^1_R)_w = dim (⊕ P dT_i)_w / (I·dT + P·df)_w`` by sympy rank."""
    geo = inp.geometric
    ws = inp.weights_of(geo)
    basis = []
    for i, wi in enumerate(ws):
        for m in inp.table.monomials_of_weight(w - wi, geo):
            basis.append((i, m))
    index = {b: k for k, b in enumerate(basis)}
    rows = []

    def add(vec):
        row = [0] * len(basis)
        for (i, m), c in vec.items():
            row[index[(i, m)]] += sympy.Rational(c.numerator, c.denominator)
        rows.append(row)

    for f in inp.gens:
        for i, wi in enumerate(ws):
            for m in inp.table.monomials_of_weight(w - wi - f.weight(), geo):
                q = Polynomial.monomial(inp.table, m) * f
                add({(i, mm): c for mm, c in q.terms.items()})
        for m in inp.table.monomials_of_weight(w - f.weight(), geo):
            vec = {}
            for i, x in enumerate(geo):
                q = Polynomial.monomial(inp.table, m) * f.derivative(x)
                for mm, c in q.terms.items():
                    vec[(i, mm)] = vec.get((i, mm), 0) + c
            add(vec)
    return len(basis) - _rank(rows, len(basis))
