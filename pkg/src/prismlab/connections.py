"""Differential forms, log connections over envelopes and divided de Rham complexes.

A log connection on a free module ``M = ⊕ D·e_k`` is stored through the
rescaled operators ``∇̃_i = t·∇_i``:

    ∇̃_i(Σ g_k e_k) = Σ_k ∇̃_i(g_k) e_k + g_k Σ_l A_i[l][k] e_l

where ``∇̃_i`` on ``D`` is the rescaled derivation (``T_i ↦ t``,
``x_j ↦ ∂f_j/∂T_i``).  The divided de Rham complex then has terms
``M ⊗ Ω^k`` and differential ``Σ_i ∇̃_i(·) dT_i ∧ ·``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import factorial
from typing import Sequence

from . import linalg as la
from .envelope import EnvelopePresentation, LciInput, SelfProduct, diag_name, prismatic_envelope
from .filtration import FilteredSlice, IdealAdicFiltration
from .homology import SliceComplex, ComplexError
from .poly import Polynomial, VariableTable


class ConnectionError_(ValueError):
    pass


# ------------------------------------------------------------- forms

@dataclass(frozen=True)
class DifferentialModule:
    """``Ω^i`` on the geometric variables: basis of increasing index tuples."""

    names: tuple[str, ...]
    weights: tuple[int, ...]
    degree: int

    @property
    def basis(self) -> list[tuple[int, ...]]:
        if self.degree < 0 or self.degree > len(self.names):
            return []
        return list(combinations(range(len(self.names)), self.degree))

    @property
    def rank(self) -> int:
        return len(self.basis)

    def weight(self, J: tuple[int, ...]) -> int:
        return sum(self.weights[j] for j in J)

    def label(self, J: tuple[int, ...]) -> str:
        return "∧".join("d" + self.names[j] for j in J) or "1"


def kaehler(table: VariableTable, i: int, names: Sequence[str] | None = None) -> DifferentialModule:
    names = tuple(names if names is not None else table.names_with_role("geometric"))
    weights = tuple(table.variables[table.index(n)].weight for n in names)
    return DifferentialModule(names, weights, i)


def wedge_in(i: int, J: tuple[int, ...]):
    """``dT_i ∧ dT_J = sign · dT_{J'}``; returns ``(sign, J')`` or ``None``."""
    if i in J:
        return None
    sign = -1 if sum(1 for j in J if j < i) % 2 else 1
    return sign, tuple(sorted(J + (i,)))


# ----------------------------------------------------- connections on P

@dataclass
class InfinitesimalConnection:
    """``∇ = d + B`` on ``⊕ Q[T]·e_k`` (t-free); ``B_i[l][k]`` over the ring table."""

    table: VariableTable
    weights: tuple[int, ...]
    B: dict[str, list[list[Polynomial]]]

    @property
    def rank(self) -> int:
        return len(self.weights)

    def matrix(self, var: str) -> list[list[Polynomial]]:
        M = self.B.get(var)
        if M is None:
            z = Polynomial.zero(self.table)
            return [[z] * self.rank for _ in range(self.rank)]
        return M

    def check_homogeneous(self) -> bool:
        for var in self.table.names_with_role("geometric"):
            wv = self.table.variables[self.table.index(var)].weight
            M = self.matrix(var)
            for l in range(self.rank):
                for k in range(self.rank):
                    p = M[l][k]
                    if p.is_zero():
                        continue
                    if not p.is_homogeneous() or p.weight() != self.weights[k] - wv - self.weights[l]:
                        return False
        return True

    def is_integrable(self) -> bool:
        geo = self.table.names_with_role("geometric")
        for a in range(len(geo)):
            for b in range(a + 1, len(geo)):
                Bi, Bj = self.matrix(geo[a]), self.matrix(geo[b])
                for l in range(self.rank):
                    for k in range(self.rank):
                        v = Bj[l][k].derivative(geo[a]) - Bi[l][k].derivative(geo[b])
                        for m in range(self.rank):
                            v = v + Bi[l][m] * Bj[m][k] - Bj[l][m] * Bi[m][k]
                        if not v.is_zero():
                            return False
        return True


def structure_sheaf_inf(table: VariableTable) -> InfinitesimalConnection:
    return InfinitesimalConnection(table, (0,), {})


# ------------------------------------------------- log connections on D

@dataclass
class LogConnectionData:
    """Free module ``⊕ D·e_k`` over an envelope with matrices ``A_i`` (over ``D.table``)."""

    D: EnvelopePresentation
    weights: tuple[int, ...]
    A: dict[str, list[list[Polynomial]]]
    scaled: bool = True  # base derivation is t·∂ (False models ∇ = d/t)
    name: str = ""

    @property
    def rank(self) -> int:
        return len(self.weights)

    @property
    def geometric(self) -> list[str]:
        return self.D.geometric

    def matrix(self, var: str) -> list[list[Polynomial]]:
        M = self.A.get(var)
        if M is None:
            z = Polynomial.zero(self.D.table)
            return [[z] * self.rank for _ in range(self.rank)]
        return M

    def base_derivation(self, var: str, p: Polynomial) -> Polynomial:
        if self.scaled:
            return self.D.derivation(var, p)
        out = p.derivative(var)
        for j, x in enumerate(self.D.env_names):
            dp = p.derivative(x)
            if dp:
                t = Polynomial.var(self.D.table, "t")
                raise ConnectionError_("unscaled derivations are only modelled without envelope variables")
        return out

    def nabla(self, var: str, vec: Sequence[Polynomial]) -> list[Polynomial]:
        M = self.matrix(var)
        out = [self.base_derivation(var, g) for g in vec]
        for k, g in enumerate(vec):
            if g.is_zero():
                continue
            for l in range(self.rank):
                a = M[l][k]
                if not a.is_zero():
                    out[l] = out[l] + g * a
        return out

    def reduce_vec(self, vec, Q=None):
        Q = Q or self.D.quotient
        return [Q.reduce(g) for g in vec]


def structure_sheaf(D: EnvelopePresentation) -> LogConnectionData:
    return LogConnectionData(D, (0,), {}, True, "O")


def check_leibniz(c: LogConnectionData, f: Polynomial, vec: Sequence[Polynomial]) -> bool:
    """``∇̃_i(f·m) = f·∇̃_i(m) + ∇̃_i(f)·m`` modulo the envelope ideal."""
    for var in c.geometric:
        lhs = c.nabla(var, [f * g for g in vec])
        mid = c.nabla(var, vec)
        df = c.base_derivation(var, f)
        rhs = [f * a + df * g for a, g in zip(mid, vec)]
        if any(not c.D.quotient.is_zero(a - b) for a, b in zip(lhs, rhs)):
            return False
    return True


def curvature(c: LogConnectionData, var_i: str, var_j: str) -> list[list[Polynomial]]:
    """``∇̃_i A_j - ∇̃_j A_i + A_i A_j - A_j A_i`` (entrywise)."""
    Ai, Aj = c.matrix(var_i), c.matrix(var_j)
    r = c.rank
    out = []
    for l in range(r):
        row = []
        for k in range(r):
            v = c.base_derivation(var_i, Aj[l][k]) - c.base_derivation(var_j, Ai[l][k])
            for m in range(r):
                v = v + Ai[l][m] * Aj[m][k] - Aj[l][m] * Ai[m][k]
            row.append(v)
        out.append(row)
    return out


def check_integrability(c: LogConnectionData, integral_model: bool = True) -> bool:
    """Curvature vanishes, checked in the saturated ring (``integral_model``) or modulo ``t^e``."""
    geo = c.geometric
    for a in range(len(geo)):
        for b in range(a + 1, len(geo)):
            for row in curvature(c, geo[a], geo[b]):
                for v in row:
                    if integral_model:
                        if not c.D.saturated.contains(v):
                            return False
                    elif not c.D.quotient.is_zero(v):
                        return False
    return True


def check_integrality(c: LogConnectionData) -> bool:
    """Every ``A_i`` entry lies in ``t·D`` and the base derivation is the rescaled one."""
    if not c.scaled:
        return False
    t = Polynomial.var(c.D.table, "t")
    ideal_t = c.D.saturated.extended([t])
    for var in c.geometric:
        for row in c.matrix(var):
            for a in row:
                if not ideal_t.contains(a):
                    return False
    return True


def pullback_connection(conn: InfinitesimalConnection, D: EnvelopePresentation) -> LogConnectionData:
    """Extend ``∇`` from ``D_inf`` to ``M ⊗ D``: ``A_i = t·B_i``."""
    if not conn.is_integrable():
        raise ConnectionError_("connection is not integrable")
    t = Polynomial.var(D.table, "t")
    A = {}
    for var, M in conn.B.items():
        A[var] = [[t * p.embed(D.table) for p in row] for row in M]
    c = LogConnectionData(D, conn.weights, A, True, "pullback")
    if not check_integrality(c) or not check_integrability(c):
        raise ConnectionError_("pullback failed integrality/integrability")
    return c


# ---------------------------------------------------- divided de Rham

class DividedDeRham:
    """``M ⊗ Ω^•`` over ``D/t^e`` with differential ``Σ ∇̃_i(·) dT_i ∧ ·``, slice by slice."""

    def __init__(self, c: LogConnectionData):
        self.c = c
        self.D = c.D
        self.e = c.D.e
        self.geo = c.geometric
        self.n = len(self.geo)
        self.forms = {k: kaehler(self.D.table, k, self.geo) for k in range(self.n + 1)}
        self._cache: dict[int, SliceComplex] = {}

    def term_basis(self, k: int, w: int) -> list[tuple]:
        out = []
        om = self.forms[k]
        for J in om.basis:
            for l, wl in enumerate(self.c.weights):
                for m in self.D.slice_basis(w - wl - om.weight(J)):
                    out.append((m, l, J))
        return out

    def slice(self, w: int) -> SliceComplex:
        S = self._cache.get(w)
        if S is not None:
            return S
        Q = self.D.quotient
        table = self.D.table
        bases = {k: self.term_basis(k, w) for k in range(self.n + 1)}
        index = {k: {b: i for i, b in enumerate(bases[k])} for k in bases}
        t = Polynomial.var(table, "t")

        def coords(k, comps):
            """comps: dict (l, J) -> polynomial; returns vector in term k."""
            vec = {}
            om = self.forms[k]
            for (l, J), p in comps.items():
                wp = w - self.c.weights[l] - om.weight(J)
                r = Q.reduce(p)
                for mm, cc in r.terms.items():
                    i = index[k][(mm, l, J)]
                    vec[i] = vec.get(i, 0) + cc
            return {i: v for i, v in vec.items() if v}

        d, tm = {}, {}
        for k in range(self.n + 1):
            cols_t = []
            for (m, l, J) in bases[k]:
                cols_t.append(coords(k, {(l, J): t * Q.monomial(m)}))
            tm[k] = cols_t
            if k == self.n:
                continue
            cols = []
            for (m, l, J) in bases[k]:
                vec = [Polynomial.zero(table)] * self.c.rank
                vec[l] = Q.monomial(m)
                comps: dict = {}
                for i, var in enumerate(self.geo):
                    wj = wedge_in(i, J)
                    if wj is None:
                        continue
                    sign, J2 = wj
                    img = self.c.nabla(var, vec)
                    for l2, p in enumerate(img):
                        if p.is_zero():
                            continue
                        key = (l2, J2)
                        comps[key] = comps.get(key, Polynomial.zero(table)) + p * sign
                cols.append(coords(k + 1, comps))
            d[k] = cols
        labels = {k: list(b) for k, b in bases.items()}
        S = SliceComplex({k: len(b) for k, b in bases.items()}, d, tm, self.e, labels, w)
        self._cache[w] = S
        return S


def divided_de_rham(c: LogConnectionData, verify: bool = True, W: int | None = None) -> DividedDeRham:
    C = DividedDeRham(c)
    if verify and W is not None:
        for w in range(W + 1):
            try:
                C.slice(w).check()
            except ComplexError as exc:
                raise ConnectionError_(f"d∘d ≠ 0 in weight {w}: the connection is not integrable") from exc
    return C


# ----------------------------------------- infinitesimal (route B) side

def lifted_filtration_slice(inp: LciInput, w: int, conn: InfinitesimalConnection | None = None) -> FilteredSlice:
    """Weight-``w`` slice of ``(M ⊗ Ω^•, ∇)`` over ``Q[T]`` with ``Fil^n = I^{n-k} M Ω^k``."""
    table = inp.table
    conn = conn or structure_sheaf_inf(table)
    geo = inp.geometric
    n = len(geo)
    forms = {k: kaehler(table, k, geo) for k in range(n + 1)}
    F = IdealAdicFiltration(table, inp.gens, conn.weights)
    bases, index = {}, {}
    for k in range(n + 1):
        om = forms[k]
        b = []
        for J in om.basis:
            for l, wl in enumerate(conn.weights):
                for m in table.monomials_of_weight(w - wl - om.weight(J), geo):
                    b.append((m, l, J))
        bases[k] = b
        index[k] = {x: i for i, x in enumerate(b)}
    d = {}
    for k in range(n):
        cols = []
        for (m, l, J) in bases[k]:
            mono = Polynomial.monomial(table, m)
            vec: dict = {}
            for i, var in enumerate(geo):
                wj = wedge_in(i, J)
                if wj is None:
                    continue
                sign, J2 = wj
                Bi = conn.matrix(var)
                parts = [(l, mono.derivative(var))]
                for l2 in range(conn.rank):
                    if not Bi[l2][l].is_zero():
                        parts.append((l2, mono * Bi[l2][l]))
                for l2, p in parts:
                    for mm, cc in p.terms.items():
                        key = index[k + 1][(mm, l2, J2)]
                        vec[key] = vec.get(key, 0) + sign * cc
            cols.append({i: v for i, v in vec.items() if v})
        d[k] = cols

    def make_fil(k):
        om = forms[k]

        def fil(nn):
            if nn <= k:
                return [la.unit(i) for i in range(len(bases[k]))]
            out = []
            for J in om.basis:
                for p in F.products(nn - k) if F.gens else []:
                    pw = p.weight()
                    for l, wl in enumerate(conn.weights):
                        for m in table.monomials_of_weight(w - wl - om.weight(J) - pw, geo):
                            q = Polynomial.monomial(table, m) * p
                            out.append({index[k][(mm, l, J)]: c for mm, c in q.terms.items()})
            return out
        return fil

    mw = inp.min_gen_weight()
    top = w - min(conn.weights)
    N = (top // mw + 1) if mw else 1
    fil = {k: make_fil(k) for k in range(n + 1)}
    bounds = {k: (k, k + max(N, 1) + 1) for k in range(n + 1)}
    labels = {k: list(b) for k, b in bases.items()}
    return FilteredSlice({k: len(v) for k, v in bases.items()}, d, fil, bounds, w, labels)


# --------------------------------------------------- transition series

@dataclass
class TransitionData:
    E: list[list[Polynomial]]     # over D(1): e_k at vertex 1 = Σ_l E[l][k] e_l at vertex 0
    terms: int
    cocycle_ok: bool
    first_order_ok: bool


def _multi_indices(n: int, total: int):
    if n == 0:
        if total == 0:
            yield ()
        return
    for a in range(total + 1):
        for rest in _multi_indices(n - 1, total - a):
            yield (a,) + rest


def crystal_transition_series(c: LogConnectionData, max_terms: int = 10_000) -> TransitionData:
    """``E = Σ_n ∏ ∇̃_i^{n_i}(e_k) d^n/n!`` over ``D(1)/t^e`` with the cocycle check over ``D(2)``."""
    if not check_integrality(c):
        raise ConnectionError_("transition series requires an integral connection "
                               "(termination is only guaranteed by t-divisibility)")
    D = c.D
    r = c.rank
    geo = c.geometric
    n = len(geo)
    D1 = SelfProduct(D, 1)
    D2 = SelfProduct(D, 2)
    Qd = D.quotient
    zero = Polynomial.zero(D1.table)
    E = [[zero] * r for _ in range(r)]
    count = 0
    # iterated operators, indexed by multi-index; prune branches that vanish mod (J, t^e)
    for k in range(r):
        start = [Polynomial.zero(D.table)] * r
        start[k] = Polynomial.constant(D.table, 1)
        level = {(0,) * n: start}
        total = 0
        while level:
            nxt = {}
            for mi, vec in level.items():
                coeff = Fraction(1)
                mono = Polynomial.constant(D1.table, 1)
                for a, ni in enumerate(mi):
                    coeff /= factorial(ni)
                    if ni:
                        mono = mono * D1.d(a + 1, 1) ** ni
                for l in range(r):
                    if not vec[l].is_zero():
                        E[l][k] = E[l][k] + vec[l].embed(D1.table) * mono * coeff
                count += 1
                if count > max_terms:
                    raise ConnectionError_("transition series did not terminate within the cap")
                for a in range(n):
                    child = list(mi)
                    child[a] += 1
                    child = tuple(child)
                    if child in nxt:
                        continue
                    # apply the operator of the first nonzero slot order-independently (integrable)
                    img = c.nabla(geo[a], vec)
                    img = [Qd.reduce(g) for g in img]
                    if any(not g.is_zero() for g in img):
                        nxt[child] = img
            level = nxt
            total += 1
    E = [[D1.quotient.reduce(p) for p in row] for row in E]
    # first order: E ≡ I + Σ d_i A_i (mod d^2)
    first_ok = True
    dvars = [diag_name(a + 1, 1) for a in range(n)]
    idx = [D1.table.index(v) for v in dvars]
    for l in range(r):
        for k in range(r):
            lin = {}
            for m, cc in E[l][k].terms.items():
                if sum(m[i] for i in idx) <= 1:
                    lin[m] = cc
            lin = Polynomial(D1.table, lin)
            expect = Polynomial.constant(D1.table, 1 if l == k else 0)
            for a, var in enumerate(geo):
                expect = expect + D1.d(a + 1, 1) * c.matrix(var)[l][k].embed(D1.table)
            if not D1.quotient.is_zero(lin - expect):
                first_ok = False
    # cocycle: ∂^1 E = ∂^2 E · ∂^0 E over D(2)
    maps = [D1.coface(j, D2) for j in range(3)]
    img = [[[D1.apply(maps[j], E[l][k], D2) for k in range(r)] for l in range(r)] for j in range(3)]
    ok = True
    for l in range(r):
        for k in range(r):
            prod = Polynomial.zero(D2.table)
            for m in range(r):
                prod = prod + img[2][l][m] * img[0][m][k]
            if not D2.quotient.is_zero(img[1][l][k] - prod):
                ok = False
    return TransitionData(E, count, ok, first_ok)
