"""Gröbner bases (Buchberger with Gebauer-Möller pair pruning) and ideal operations."""

from __future__ import annotations

import heapq
import os
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from typing import Iterable, Sequence

from .poly import Polynomial, Variable, VariableTable, TableMismatch

DEFAULT_PAIR_BUDGET = 200_000
BUDGET_ENV = "PRISMLAB_PAIR_BUDGET"


class BudgetExceeded(RuntimeError):
    """Raised when a Gröbner computation processes more S-pairs than allowed."""


def pair_budget() -> int:
    raw = os.environ.get(BUDGET_ENV)
    if raw is None:
        return DEFAULT_PAIR_BUDGET
    try:
        val = int(raw)
    except ValueError:
        raise ValueError(f"{BUDGET_ENV} must be an integer, got {raw!r}") from None
    if val <= 0:
        raise ValueError(f"{BUDGET_ENV} must be positive")
    return val


class MonomialOrder:
    """Monomial orders given by flat integer sort keys (bigger key = bigger monomial).

    kinds:
      ``grevlex``  weighted degree (nonnegative weights), then total degree,
                   then reverse lexicographic with ``t`` (last variable) smallest.
      ``elim``     total degree in the variables of ``block`` first, then grevlex.
      ``weights``  explicit positive weight vector, then reverse lexicographic.
    """

    __slots__ = ("table", "kind", "block", "weights", "_key", "_hash")

    def __init__(self, table: VariableTable, kind: str = "grevlex",
                 block: Iterable[str] = (), weights: Sequence[int] | None = None):
        self.table = table
        self.kind = kind
        self.block = tuple(sorted(block, key=table.index))
        n = len(table)
        tw = table.weights
        base_w = tw if all(w >= 0 for w in tw) else (0,) * n
        if kind == "grevlex":
            ws = base_w

            def key(m, ws=ws, n=n):
                return (sum(a * b for a, b in zip(m, ws)), sum(m)) + tuple(-m[i] for i in range(n - 1, -1, -1))
        elif kind == "elim":
            bidx = tuple(table.index(b) for b in self.block)
            ws = base_w

            def key(m, ws=ws, n=n, bidx=bidx):
                return ((sum(m[i] for i in bidx), sum(a * b for a, b in zip(m, ws)), sum(m))
                        + tuple(-m[i] for i in range(n - 1, -1, -1)))
        elif kind == "weights":
            if weights is None or len(weights) != n or any(w <= 0 for w in weights):
                raise ValueError("weights order needs one positive weight per variable")
            ws = tuple(weights)

            def key(m, ws=ws, n=n):
                return (sum(a * b for a, b in zip(m, ws)),) + tuple(-m[i] for i in range(n - 1, -1, -1))
        else:
            raise ValueError(f"unknown monomial order kind {kind!r}")
        self.weights = tuple(weights) if weights is not None else None
        self._key = key
        self._hash = hash((table, kind, self.block, self.weights))

    def key(self, m):
        return self._key(m)

    def __eq__(self, other):
        return (isinstance(other, MonomialOrder) and self.table == other.table
                and self.kind == other.kind and self.block == other.block
                and self.weights == other.weights)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        extra = f", block={self.block}" if self.block else ""
        return f"MonomialOrder({self.kind}{extra})"

    def leading_monomial(self, p: Polynomial):
        if not p.terms:
            raise ValueError("zero polynomial has no leading monomial")
        return max(p.terms, key=self._key)

    def leading_term(self, p: Polynomial):
        m = self.leading_monomial(p)
        return m, p.terms[m]


def grevlex(table: VariableTable) -> MonomialOrder:
    return MonomialOrder(table, "grevlex")


def elimination_order(table: VariableTable, block: Iterable[str]) -> MonomialOrder:
    return MonomialOrder(table, "elim", block)


# ---------------------------------------------------------------- internals

def _divides(a, b):
    return all(x <= y for x, y in zip(a, b))


def _lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


def _disjoint(a, b):
    return all(x == 0 or y == 0 for x, y in zip(a, b))


def _neg(k):
    return tuple(-x for x in k)


def _reduce(p: dict, basis: list, key, full: bool = True) -> dict:
    """Remainder of ``p`` modulo ``basis`` (list of ``(lm, monic dict)``)."""
    p = dict(p)
    rem = {}
    heap = [(_neg(key(m)), m) for m in p]
    heapq.heapify(heap)
    while heap:
        _, m = heapq.heappop(heap)
        c = p.get(m)
        if c is None:
            continue
        for lm, g in basis:
            if _divides(lm, m):
                break
        else:
            rem[m] = p.pop(m)
            if not full:
                rem.update(p)
                return rem
            continue
        q = tuple(x - y for x, y in zip(m, lm))
        del p[m]
        for gm, gc in g.items():
            if gm == lm:
                continue
            mm = tuple(x + y for x, y in zip(gm, q))
            v = p.get(mm)
            if v is None:
                p[mm] = -c * gc
                heapq.heappush(heap, (_neg(key(mm)), mm))
            else:
                nv = v - c * gc
                if nv:
                    p[mm] = nv
                else:
                    del p[mm]
    return rem


def _monic(p: dict, key):
    lm = max(p, key=key)
    c = p[lm]
    if c != 1:
        inv = 1 / c
        p = {m: v * inv for m, v in p.items()}
    return lm, p


def _spoly(f, g):
    (lf, pf), (lg, pg) = f, g
    l = _lcm(lf, lg)
    qf = tuple(x - y for x, y in zip(l, lf))
    qg = tuple(x - y for x, y in zip(l, lg))
    out = {}
    for m, c in pf.items():
        mm = tuple(x + y for x, y in zip(m, qf))
        out[mm] = c
    for m, c in pg.items():
        mm = tuple(x + y for x, y in zip(m, qg))
        v = out.get(mm, 0) - c
        if v:
            out[mm] = v
        else:
            out.pop(mm, None)
    return out


def _buchberger(polys: list[dict], key, budget: int) -> list[tuple]:
    polys = [p for p in polys if p]
    elems: list[tuple] = []  # (lm, dict)
    G: list[int] = []
    pairs: list = []  # heap of (negkey? no: key(lcm), i, j)
    processed = 0

    def update(h_idx):
        nonlocal G, pairs
        lh = elems[h_idx][0]
        C = [g for g in G]
        D = []
        while C:
            g = C.pop(0)
            lg = elems[g][0]
            lgh = _lcm(lg, lh)
            if _disjoint(lg, lh):
                D.append(g)
                continue
            dominated = False
            for g1 in C + D:
                if _divides(_lcm(elems[g1][0], lh), lgh):
                    dominated = True
                    break
            if not dominated:
                D.append(g)
        E = [(g, h_idx) for g in D if not _disjoint(elems[g][0], lh)]
        newpairs = []
        for item in pairs:
            _, i, j = item
            lij = _lcm(elems[i][0], elems[j][0])
            if (_divides(lh, lij) and _lcm(elems[i][0], lh) != lij
                    and _lcm(elems[j][0], lh) != lij):
                continue
            newpairs.append(item)
        for g, h in E:
            newpairs.append((key(_lcm(elems[g][0], elems[h][0])), g, h))
        heapq.heapify(newpairs)
        pairs = newpairs
        G = [g for g in G if not _divides(lh, elems[g][0])] + [h_idx]

    # seed: reduce inputs against each other one by one
    for p in sorted(polys, key=lambda d: key(max(d, key=key))):
        basis = [elems[g] for g in G]
        r = _reduce(p, basis, key)
        if not r:
            continue
        elems.append(_monic(r, key))
        update(len(elems) - 1)
    while pairs:
        _, i, j = heapq.heappop(pairs)
        processed += 1
        if processed > budget:
            raise BudgetExceeded(f"Gröbner pair budget {budget} exceeded")
        s = _spoly(elems[i], elems[j])
        if not s:
            continue
        r = _reduce(s, [elems[g] for g in G], key)
        if not r:
            continue
        elems.append(_monic(r, key))
        update(len(elems) - 1)
    basis = [elems[g] for g in G]
    # minimal then reduced
    basis.sort(key=lambda e: key(e[0]))
    minimal = []
    for lm, p in basis:
        if not any(_divides(o[0], lm) for o in minimal):
            minimal.append((lm, p))
    reduced = []
    for idx, (lm, p) in enumerate(minimal):
        others = minimal[:idx] + minimal[idx + 1:]
        tail = dict(p)
        c = tail.pop(lm)
        r = _reduce(tail, others, key)
        r[lm] = c
        reduced.append(_monic(r, key))
    reduced.sort(key=lambda e: key(e[0]))
    return reduced


# ------------------------------------------------------------------- Ideal

class Ideal:
    """Ideal of a polynomial ring, with cached reduced Gröbner bases per order."""

    def __init__(self, table: VariableTable, generators: Iterable[Polynomial]):
        self.table = table
        gens = []
        seen = set()
        for g in generators:
            if g.table != table:
                raise TableMismatch("generator over a different table")
            if g.is_zero() or g in seen:
                continue
            seen.add(g)
            gens.append(g)
        self.generators = tuple(gens)
        self._cache: dict = {}

    def __repr__(self):
        return "Ideal(" + ", ".join(str(g) for g in self.generators) + ")"

    def default_order(self) -> MonomialOrder:
        return grevlex(self.table)

    def basis_data(self, order: MonomialOrder | None = None):
        order = order or self.default_order()
        if order.table != self.table:
            raise TableMismatch("order over a different table")
        data = self._cache.get(order)
        if data is None:
            data = _buchberger([dict(g.terms) for g in self.generators], order.key, pair_budget())
            self._cache[order] = data
        return data

    def groebner(self, order: MonomialOrder | None = None) -> list[Polynomial]:
        return [Polynomial(self.table, p, _clean=True) for _, p in self.basis_data(order)]

    def leading_monomials(self, order: MonomialOrder | None = None):
        return [lm for lm, _ in self.basis_data(order)]

    def normal_form(self, p: Polynomial, order: MonomialOrder | None = None) -> Polynomial:
        if p.table != self.table:
            raise TableMismatch("polynomial over a different table")
        order = order or self.default_order()
        r = _reduce(p.terms, self.basis_data(order), order.key)
        return Polynomial(self.table, r, _clean=True)

    def contains(self, p: Polynomial) -> bool:
        return self.normal_form(p).is_zero()

    def __contains__(self, p):
        return self.contains(p)

    def is_unit(self) -> bool:
        return self.contains(Polynomial.constant(self.table, 1))

    def contains_ideal(self, other: "Ideal") -> bool:
        return all(self.contains(g) for g in other.generators)

    def same_as(self, other: "Ideal") -> bool:
        return self.contains_ideal(other) and other.contains_ideal(self)

    def __add__(self, other: "Ideal") -> "Ideal":
        return Ideal(self.table, self.generators + other.generators)

    def extended(self, polys: Iterable[Polynomial]) -> "Ideal":
        return Ideal(self.table, self.generators + tuple(polys))

    def __mul__(self, other: "Ideal") -> "Ideal":
        return Ideal(self.table, [a * b for a in self.generators for b in other.generators])

    def power(self, n: int) -> "Ideal":
        if n <= 0:
            return Ideal(self.table, [Polynomial.constant(self.table, 1)])
        out = self
        for _ in range(n - 1):
            out = out * self
            out = Ideal(self.table, minimal_generators(out))
        return out

    def embed(self, target: VariableTable) -> "Ideal":
        return Ideal(target, [g.embed(target) for g in self.generators])


def minimal_generators(I: Ideal) -> list[Polynomial]:
    """Drop generators lying in the ideal of the others (greedy, deterministic)."""
    gens = list(I.generators)
    keep: list[Polynomial] = []
    for g in gens:
        if keep and Ideal(I.table, keep).contains(g):
            continue
        keep.append(g)
    return keep


# ----------------------------------------------------------------- operations

def groebner(I: Ideal, order: MonomialOrder | None = None) -> list[Polynomial]:
    return I.groebner(order)


def normal_form(p: Polynomial, I: Ideal, order: MonomialOrder | None = None) -> Polynomial:
    return I.normal_form(p, order)


def ideal_membership(p: Polynomial, I: Ideal) -> bool:
    return I.contains(p)


def eliminate(I: Ideal, drop: Iterable[str]) -> Ideal:
    """``I`` intersected with the subring omitting ``drop``; returned over the smaller table."""
    drop = list(drop)
    if not drop:
        return Ideal(I.table, I.groebner())
    order = elimination_order(I.table, drop)
    idx = [I.table.index(d) for d in drop]
    small = I.table.without(drop)
    keep = []
    for g in I.groebner(order):
        if all(m[i] == 0 for m in g.terms for i in idx):
            keep.append(_restrict(g, small))
    return Ideal(small, keep)


def _restrict(p: Polynomial, small: VariableTable) -> Polynomial:
    names = p.table.names
    pos = {n: i for i, n in enumerate(names)}
    sel = [pos[n] for n in small.names]
    return Polynomial(small, {tuple(m[i] for i in sel): c for m, c in p.terms.items()}, _clean=True)


def _aux_table(table: VariableTable, name: str) -> VariableTable:
    while name in table:
        name = "_" + name
    return table.extend([Variable(name, "auxiliary", 0)])


def intersect(I: Ideal, J: Ideal) -> Ideal:
    if I.table != J.table:
        raise TableMismatch("ideals over different tables")
    big = _aux_table(I.table, "_s")
    s = Polynomial.var(big, big.names[-2])
    gens = [s * g.embed(big) for g in I.generators] + [(1 - s) * g.embed(big) for g in J.generators]
    out = eliminate(Ideal(big, gens), [big.names[-2]])
    return Ideal(I.table, [g.embed(I.table) for g in out.generators])


def divide_exact(p: Polynomial, f: Polynomial, order: MonomialOrder | None = None) -> Polynomial:
    """Quotient ``p / f``; raises ``ValueError`` when ``f`` does not divide ``p``."""
    order = order or grevlex(p.table)
    lf, cf = order.leading_term(f)
    q: dict = {}
    r = p
    while r.terms:
        lr, cr = order.leading_term(r)
        if not _divides(lf, lr):
            raise ValueError(f"{f} does not divide {p}")
        mono = tuple(a - b for a, b in zip(lr, lf))
        coef = cr / cf
        q[mono] = q.get(mono, 0) + coef
        r = r - Polynomial(p.table, {mono: coef}, _clean=True) * f
    return Polynomial(p.table, q)


def colon_ideal(I: Ideal, f: Polynomial) -> Ideal:
    """``(I : f) = {g : g f in I}``."""
    if f.is_zero():
        raise ValueError("colon by the zero polynomial")
    if not f.variables_used():
        return Ideal(I.table, I.generators)
    inter = intersect(I, Ideal(I.table, [f]))
    return Ideal(I.table, [divide_exact(h, f) for h in inter.generators])


def saturate_t(J: Ideal) -> Ideal:
    """``(J : t^oo)`` by adjoining ``z`` with ``t z - 1`` and eliminating ``z``."""
    big = _aux_table(J.table, "_z")
    z = Polynomial.var(big, big.names[-2])
    t = Polynomial.var(big, "t")
    ext = Ideal(big, [g.embed(big) for g in J.generators] + [t * z - 1])
    out = eliminate(ext, [big.names[-2]])
    return Ideal(J.table, [g.embed(J.table) for g in out.generators])


def saturate_t_graded(J: Ideal, grading: Sequence[int]) -> Ideal:
    """Saturation for ideals homogeneous in a positive grading.

    With reverse-lex tie-breaking and ``t`` the smallest variable, dividing each
    element of the Gröbner basis by its largest power of ``t`` yields a basis of
    ``(J : t^oo)``.  Used as a fast path and as a cross-check of :func:`saturate_t`.
    """
    order = MonomialOrder(J.table, "weights", weights=grading)
    for g in J.generators:
        if len({sum(a * b for a, b in zip(m, grading)) for m in g.terms}) > 1:
            raise ValueError(f"generator {g} is not homogeneous for the given grading")
    out = []
    for g in J.groebner(order):
        v = g.t_valuation()
        out.append(g.divide_by_t(v) if v else g)
    return Ideal(J.table, out)


def is_saturated_t(J: Ideal) -> bool:
    t = Polynomial.var(J.table, "t")
    return J.contains_ideal(colon_ideal(J, t))


@dataclass(frozen=True)
class RegularityResult:
    certified: bool
    failed_at: int | None = None  # 1-based index of the first failing element
    order: tuple[int, ...] | None = None

    @property
    def label(self) -> str:
        if self.certified:
            return "certified"
        return f"failed-at-index-{self.failed_at}"


def is_regular_sequence(table: VariableTable, seq: Sequence[Polynomial]) -> RegularityResult:
    """Certify ``seq`` as a regular sequence on the polynomial ring, in the given order."""
    seq = list(seq)
    for i, f in enumerate(seq):
        prev = Ideal(table, seq[:i])
        if f.is_zero() or prev.contains(f):
            return RegularityResult(False, i + 1)
        col = colon_ideal(prev, f)
        if not prev.contains_ideal(col):
            return RegularityResult(False, i + 1)
    if Ideal(table, seq).is_unit():
        return RegularityResult(False, len(seq))
    return RegularityResult(True, None, tuple(range(len(seq))))


def certify_regular(table: VariableTable, seq: Sequence[Polynomial], max_orders: int = 24) -> RegularityResult:
    """Try the given order, then a bounded set of permutations."""
    first = is_regular_sequence(table, seq)
    if first.certified or len(seq) <= 1:
        return first
    tried = 1
    for perm in permutations(range(len(seq))):
        if perm == tuple(range(len(seq))):
            continue
        if tried >= max_orders:
            break
        tried += 1
        r = is_regular_sequence(table, [seq[i] for i in perm])
        if r.certified:
            return RegularityResult(True, None, perm)
    return first
