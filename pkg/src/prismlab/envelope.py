"""Prismatic, infinitesimal and self-product envelopes.

The prismatic envelope of ``P = Q[t][T]`` along ``I = (f_1, …, f_c)`` is
``P[x_1, …, x_c]/(t x_j - f_j)`` saturated by ``t``; its weight slices modulo
``t^e`` are finite.  Envelope variables are named ``x<j>``; the self-product
envelope ``D(l)`` adds variables ``d<k,i>`` standing for ``(T_k^{(i)} - T_k^{(0)})/t``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from . import linalg as la
from .groebner import (Ideal, RegularityResult, certify_regular, elimination_order,
                       saturate_t, saturate_t_graded, eliminate)
from .poly import Polynomial, Variable, VariableTable
from .quotient import QuotientPresentation


class EnvelopeError(ValueError):
    pass


def env_name(j: int) -> str:
    return f"x<{j}>"


def diag_name(k: int, i: int) -> str:
    return f"d<{k},{i}>"


def delta_name(k: int, i: int) -> str:
    return f"δ<{k},{i}>"


@dataclass
class LciInput:
    """Ambient ``P = Q[t][T]`` (geometric variables) with ideal generators.

    Generators must be t-free and weighted-homogeneous so that all
    constructions decompose into finite weight slices.
    """

    table: VariableTable
    gens: tuple[Polynomial, ...]
    name: str = ""
    certificate: RegularityResult | None = None

    def __post_init__(self):
        self.gens = tuple(g for g in self.gens if not g.is_zero())
        for g in self.gens:
            if g.table != self.table:
                raise EnvelopeError("generator over a different table")
            if "t" in g.variables_used():
                raise EnvelopeError(f"generator {g} involves t; only t-free generators are supported")
            if not g.is_homogeneous():
                raise EnvelopeError(f"generator {g} is not weighted-homogeneous")
        if self.certificate is None:
            t = Polynomial.var(self.table, "t")
            self.certificate = certify_regular(self.table, (t,) + self.gens)

    @property
    def geometric(self) -> list[str]:
        return self.table.names_with_role("geometric")

    @property
    def certified(self) -> bool:
        return bool(self.certificate and self.certificate.certified)

    @property
    def flag(self) -> str:
        return "certified" if self.certified else "Koszul-regularity unverified"

    @property
    def gen_weights(self) -> list[int]:
        return [g.weight() for g in self.gens]

    def ideal(self) -> Ideal:
        return Ideal(self.table, self.gens)

    def min_gen_weight(self) -> int | None:
        return min(self.gen_weights, default=None)

    def weights_of(self, names) -> list[int]:
        return [self.table.variables[self.table.index(n)].weight for n in names]

    def with_generators(self, gens: Sequence[Polynomial]) -> "LciInput":
        return LciInput(self.table, tuple(gens), self.name)


def lci(variables: Sequence[tuple[str, int]], gens: Sequence[str] = (), name: str = "") -> LciInput:
    """Build an input from ``[(name, weight), …]`` and generator strings."""
    from .expr import parse_poly
    table = VariableTable.from_spec(variables)
    return LciInput(table, tuple(parse_poly(table, g) for g in gens), name)


class EnvelopePresentation:
    """``D/t^e`` for the prismatic envelope of an input."""

    def __init__(self, inp: LciInput, e: int, saturation: str = "eliminate",
                 extra_weights: Sequence[int] | None = None):
        self.inp = inp
        self.e = e
        c = len(inp.gens)
        self.env_names = [env_name(j + 1) for j in range(c)]
        weights = list(extra_weights) if extra_weights is not None else inp.gen_weights
        self.table = inp.table.extend([Variable(n, "envelope", w) for n, w in zip(self.env_names, weights)])
        t = Polynomial.var(self.table, "t")
        self.f = [g.embed(self.table) for g in inp.gens]
        rel = [t * Polynomial.var(self.table, x) - f for x, f in zip(self.env_names, self.f)]
        J = Ideal(self.table, rel)
        if c == 0:
            sat = J
        elif saturation == "eliminate":
            sat = saturate_t(J)
        elif saturation == "graded":
            sat = saturate_t_graded(J, _sat_grading(self.table))
        else:
            raise ValueError(f"unknown saturation method {saturation!r}")
        if sat.is_unit():
            raise EnvelopeError("the ideal is the unit ideal; the envelope is the zero ring")
        self.relations = rel
        self.saturated = sat
        self.quotient = QuotientPresentation(self.table, sat, e)
        self._jac = {}

    def __repr__(self):
        return f"EnvelopePresentation({self.inp.name or self.inp.gens}, e={self.e})"

    @property
    def geometric(self) -> list[str]:
        return self.inp.geometric

    def jacobian(self, var: str, j: int) -> Polynomial:
        key = (var, j)
        if key not in self._jac:
            self._jac[key] = self.f[j].derivative(var)
        return self._jac[key]

    def derivation(self, var: str, p: Polynomial) -> Polynomial:
        """Rescaled derivation: ``T ↦ t δ``, ``x_j ↦ ∂f_j/∂T``, ``t ↦ 0``."""
        t = Polynomial.var(self.table, "t")
        out = t * p.derivative(var)
        for j, x in enumerate(self.env_names):
            dp = p.derivative(x)
            if dp:
                out = out + dp * self.jacobian(var, j)
        return out

    def slice_basis(self, w: int):
        return self.quotient.slice_basis(w)

    def slice_dim(self, w: int) -> int:
        return self.quotient.slice_dim(w)

    def x_degree(self, m) -> int:
        return self.quotient.x_degree(m, self.env_names)

    def bidegree(self, m) -> int:
        """``t``-exponent minus envelope degree; every relation is homogeneous for it."""
        return m[self.table.t_index] - self.x_degree(m)

    def slice_dims_by_bidegree(self, w: int) -> dict[int, int]:
        out: dict[int, int] = {}
        for m in self.slice_basis(w):
            k = self.bidegree(m)
            out[k] = out.get(k, 0) + 1
        return out

    def mod_t_dims_by_xdegree(self, w: int) -> dict[int, int]:
        out: dict[int, int] = {}
        ti = self.table.t_index
        for m in self.slice_basis(w):
            if m[ti] == 0:
                n = self.x_degree(m)
                out[n] = out.get(n, 0) + 1
        return out

    def torsion_free_witness(self) -> bool:
        """``(ideal : t) = ideal`` before truncation."""
        from .groebner import is_saturated_t
        return is_saturated_t(self.saturated)


def _sat_grading(table: VariableTable) -> list[int]:
    """Positive grading making ``t x_j - f_j`` homogeneous: T ↦ 2 wt, x ↦ 2 wt - 1, t ↦ 1."""
    out = []
    for v in table.variables:
        if v.role == "deformation":
            out.append(1)
        elif v.role == "envelope":
            out.append(2 * v.weight - 1)
        else:
            out.append(2 * v.weight)
    return out


def prismatic_envelope(inp: LciInput, e: int, saturation: str = "eliminate") -> EnvelopePresentation:
    return EnvelopePresentation(inp, e, saturation)


# ------------------------------------------------------- generator change

@dataclass
class IndependenceResult:
    passed: bool
    cofactors: list[Polynomial]
    dims: dict[int, tuple[int, int]]
    maps_ok: bool
    inverse_ok: bool

    def as_dict(self):
        return {"passed": self.passed, "maps_ok": self.maps_ok, "inverse_ok": self.inverse_ok,
                "cofactors": [str(c) for c in self.cofactors],
                "dims": {str(w): list(v) for w, v in sorted(self.dims.items())}}


def cofactors_in_ideal(inp: LciInput, p: Polynomial) -> list[Polynomial] | None:
    """``a_j`` with ``p = Σ a_j f_j`` found by a linear solve in one weight slice."""
    if p.is_zero():
        return [Polynomial.zero(inp.table) for _ in inp.gens]
    w = p.weight()
    cols = []
    tags = []
    geo = inp.geometric
    basis = inp.table.monomials_of_weight(w, geo)
    index = {m: i for i, m in enumerate(basis)}
    for j, f in enumerate(inp.gens):
        for m in inp.table.monomials_of_weight(w - f.weight(), geo):
            q = Polynomial.monomial(inp.table, m) * f
            cols.append({index[mm]: c for mm, c in q.terms.items()})
            tags.append((j, m))
    target = {}
    for mm, c in p.terms.items():
        if mm not in index:
            return None
        target[index[mm]] = c
    x = la.solve(cols, target)
    if x is None:
        return None
    out = [Polynomial.zero(inp.table) for _ in inp.gens]
    for k, c in x.items():
        j, m = tags[k]
        out[j] = out[j] + Polynomial.monomial(inp.table, m, c)
    return out


def generator_independence_check(inp: LciInput, extra: Polynomial, e: int, W: int) -> IndependenceResult:
    """Compare envelopes for ``(f_j)`` and ``(f_j, extra)`` with explicit inverse maps."""
    if extra.table != inp.table:
        extra = extra.embed(inp.table)
    if not extra.is_zero() and not inp.ideal().contains(extra):
        raise EnvelopeError(f"{extra} is not in the ideal")
    a = cofactors_in_ideal(inp, extra)
    if a is None:
        raise EnvelopeError("could not find cofactors for the extra generator")
    D = prismatic_envelope(inp, e)
    c = len(inp.gens)
    wy = extra.weight() if not extra.is_zero() else 1
    big = LciInput(inp.table, inp.gens, inp.name, inp.certificate)
    big_gens = list(inp.gens) + [extra]
    D2 = EnvelopePresentation.__new__(EnvelopePresentation)
    # build the enlarged envelope by hand so that a zero extra generator keeps its variable
    D2.inp = big
    D2.e = e
    D2.env_names = [env_name(j + 1) for j in range(c + 1)]
    D2.table = inp.table.extend([Variable(n, "envelope", w) for n, w in
                                 zip(D2.env_names, inp.gen_weights + [wy])])
    t2 = Polynomial.var(D2.table, "t")
    D2.f = [g.embed(D2.table) for g in big_gens]
    D2.relations = [t2 * Polynomial.var(D2.table, x) - f for x, f in zip(D2.env_names, D2.f)]
    D2.saturated = saturate_t(Ideal(D2.table, D2.relations))
    D2.quotient = QuotientPresentation(D2.table, D2.saturated, e)
    D2._jac = {}
    y = Polynomial.var(D2.table, D2.env_names[-1])
    # phi: D -> D2 (x_j -> x_j); psi: D2 -> D (x_j -> x_j, y -> Σ a_j x_j)
    phi = {n: Polynomial.var(D2.table, n) for n in D.table.names}
    psi = {n: Polynomial.var(D.table, n) for n in D.env_names}
    psi[D2.env_names[-1]] = sum((aj.embed(D.table) * Polynomial.var(D.table, x)
                                 for aj, x in zip(a, D.env_names)), Polynomial.zero(D.table))
    maps_ok = all(D2.saturated.contains(g.substitute(phi, D2.table)) for g in D.saturated.generators)
    maps_ok = maps_ok and all(D.saturated.contains(g.substitute(psi, D.table))
                              for g in D2.saturated.generators)
    lin = sum((aj.embed(D2.table) * Polynomial.var(D2.table, x) for aj, x in zip(a, D.env_names)),
              Polynomial.zero(D2.table))
    inverse_ok = D2.saturated.contains(y - lin)
    dims = {w: (D.slice_dim(w), D2.slice_dim(w)) for w in range(W + 1)}
    passed = maps_ok and inverse_ok and all(u == v for u, v in dims.values())
    return IndependenceResult(passed, a, dims, maps_ok, inverse_ok)


# ---------------------------------------------------------- infinitesimal

@dataclass
class InfinitesimalEnvelope:
    inp: LciInput
    m: int
    e: int
    quotient: QuotientPresentation

    def slice_dim(self, w: int) -> int:
        return self.quotient.slice_dim(w)

    def stabilization_index(self, w: int) -> int:
        """Smallest m with ``m·(minimal generator weight) > w``; slice w is stable from there."""
        mw = self.inp.min_gen_weight()
        if mw is None:
            return 1
        return w // mw + 1


def infinitesimal_envelope(inp: LciInput, m: int, e: int) -> InfinitesimalEnvelope:
    if m < 1:
        raise ValueError("m must be >= 1")
    I = inp.ideal().power(m) if inp.gens else Ideal(inp.table, [])
    return InfinitesimalEnvelope(inp, m, e, QuotientPresentation(inp.table, I, e))


# ---------------------------------------------------------- self products

class SelfProduct:
    """``D(l)/t^e = D[d<k,i>]/t^e`` with the cosimplicial structure maps."""

    def __init__(self, D: EnvelopePresentation, l: int):
        if l < 0:
            raise ValueError("l must be >= 0")
        self.D = D
        self.l = l
        self.e = D.e
        geo = D.geometric
        self.geo = geo
        new = []
        for i in range(1, l + 1):
            for k, g in enumerate(geo, start=1):
                w = D.table.variables[D.table.index(g)].weight
                new.append(Variable(diag_name(k, i), "diagonal", w))
        self.diag_names = [v.name for v in new]
        self.table = D.table.extend(new)
        self.ideal = D.saturated.embed(self.table)
        self.quotient = QuotientPresentation(self.table, self.ideal, self.e)

    def var(self, name) -> Polynomial:
        return Polynomial.var(self.table, name)

    def d(self, k: int, i: int) -> Polynomial:
        if i == 0:
            return Polynomial.zero(self.table)
        return self.var(diag_name(k, i))

    def coface(self, k: int, target: "SelfProduct") -> dict[str, Polynomial]:
        """Ring map ``D(l) → D(l+1)`` for the coface skipping vertex ``k``."""
        if target.l != self.l + 1 or not (0 <= k <= self.l + 1):
            raise ValueError("bad coface")
        tt = target.table
        t = Polynomial.var(tt, "t")
        images: dict[str, Polynomial] = {}
        n = len(self.geo)
        if k == 0:
            for a, g in enumerate(self.geo, start=1):
                images[g] = Polynomial.var(tt, g) + t * target.d(a, 1)
                for i in range(1, self.l + 1):
                    images[diag_name(a, i)] = target.d(a, i + 1) - target.d(a, 1)
            shift = {g: images[g] for g in self.geo}
            for j, x in enumerate(self.D.env_names):
                f = self.D.f[j].embed(tt)
                df = f.substitute(shift, tt) - f
                images[x] = Polynomial.var(tt, x) + df.divide_by_t(1)
        else:
            for g in self.geo:
                images[g] = Polynomial.var(tt, g)
            for x in self.D.env_names:
                images[x] = Polynomial.var(tt, x)
            for a in range(1, n + 1):
                for i in range(1, self.l + 1):
                    images[diag_name(a, i)] = target.d(a, i if i < k else i + 1)
        return images

    def codegeneracy(self, k: int, target: "SelfProduct") -> dict[str, Polynomial]:
        """Ring map ``D(l) → D(l-1)`` collapsing vertices ``k`` and ``k+1``."""
        if target.l != self.l - 1 or not (0 <= k <= self.l - 1):
            raise ValueError("bad codegeneracy")
        tt = target.table
        images = {g: Polynomial.var(tt, g) for g in self.geo}
        for x in self.D.env_names:
            images[x] = Polynomial.var(tt, x)
        for a in range(1, len(self.geo) + 1):
            for i in range(1, self.l + 1):
                s = i if i <= k else i - 1
                images[diag_name(a, i)] = target.d(a, s)
        return images

    def apply(self, images: dict[str, Polynomial], p: Polynomial, target: "SelfProduct") -> Polynomial:
        return target.quotient.reduce(p.substitute(images, target.table))


def self_product_envelope(inp: LciInput, l: int, e: int, D: EnvelopePresentation | None = None) -> SelfProduct:
    D = D or prismatic_envelope(inp, e)
    return SelfProduct(D, l)


def generic_self_product(inp: LciInput, l: int, e: int) -> QuotientPresentation:
    """``D(l)`` computed from scratch: envelope of ``P[δ]`` along ``(I, δ)``, δ eliminated.

    Serves as an independent check of the ``D[d]`` model used by :class:`SelfProduct`.
    """
    geo = inp.geometric
    deltas, diags = [], []
    for i in range(1, l + 1):
        for k, g in enumerate(geo, start=1):
            w = inp.table.variables[inp.table.index(g)].weight
            deltas.append(Variable(delta_name(k, i), "auxiliary", w))
            diags.append(Variable(diag_name(k, i), "diagonal", w))
    envs = [Variable(env_name(j + 1), "envelope", w) for j, w in enumerate(inp.gen_weights)]
    big = VariableTable(list(deltas) + list(inp.table.variables[:-1]) + envs + diags)
    t = Polynomial.var(big, "t")
    rel = [t * Polynomial.var(big, x.name) - g.embed(big) for x, g in zip(envs, inp.gens)]
    rel += [t * Polynomial.var(big, dv.name) - Polynomial.var(big, de.name) for dv, de in zip(diags, deltas)]
    sat = saturate_t(Ideal(big, rel))
    red = eliminate(sat, [d.name for d in deltas])
    return QuotientPresentation(red.table, red, e)


def check_cosimplicial_identities(inp: LciInput, e: int, lmax: int = 2) -> bool:
    """Cosimplicial identities on generators for ``D(0) … D(lmax)``."""
    D = prismatic_envelope(inp, e)
    obs = [SelfProduct(D, l) for l in range(lmax + 2)]

    def comp(first, second, src, mid, dst):
        # ring map src -> dst: v ↦ second(first(v))
        out = {}
        for n in src.table.names[:-1]:
            out[n] = dst.quotient.reduce(first[n].substitute(second, dst.table))
        return out

    def same(a, b):
        return all(a[k] == b[k] for k in a)

    for l in range(lmax):
        A, B, C = obs[l], obs[l + 1], obs[l + 2]
        for j in range(l + 3):
            for i in range(j):
                lhs = comp(A.coface(i, B), B.coface(j, C), A, B, C)
                rhs = comp(A.coface(j - 1, B), B.coface(i, C), A, B, C)
                if not same(lhs, rhs):
                    return False
    for l in range(1, lmax + 1):
        # σ^j ∂^i
        Am, A, B = obs[l - 1], obs[l], obs[l + 1]
        for j in range(l + 1):
            for i in range(l + 2):
                lhs = comp(A.coface(i, B), B.codegeneracy(j, A), A, B, A)
                if i < j:
                    rhs = comp(A.codegeneracy(j - 1, Am), Am.coface(i, A), A, Am, A)
                elif i in (j, j + 1):
                    rhs = {n: A.quotient.reduce(Polynomial.var(A.table, n)) for n in A.table.names[:-1]}
                else:
                    rhs = comp(A.codegeneracy(j, Am), Am.coface(i - 1, A), A, Am, A)
                if not same(lhs, rhs):
                    return False
    for l in range(2, lmax + 2):
        A, B, C = obs[l], obs[l - 1], obs[l - 2]
        for j in range(l - 1):
            for i in range(j + 1):
                lhs = comp(A.codegeneracy(j + 1, B), B.codegeneracy(i, C), A, B, C)
                rhs = comp(A.codegeneracy(i, B), B.codegeneracy(j, C), A, B, C)
                if not same(lhs, rhs):
                    return False
    return True


# ------------------------------------------------------------ injectivity

@dataclass
class InjectivityResult:
    passed: bool
    ranks: dict[int, tuple[int, int]]   # w -> (source dim, rank of image)
    kernel: dict[int, list[Polynomial]]  # witnesses of non-injectivity
    source: str

    def as_dict(self):
        return {"passed": self.passed, "source": self.source,
                "ranks": {str(w): list(v) for w, v in sorted(self.ranks.items())},
                "kernel": {str(w): [str(p) for p in v] for w, v in sorted(self.kernel.items()) if v}}


def _mixed_power(inp: LciInput, n: int) -> Ideal:
    """``(t, I)^n = Σ_{a+b=n} t^a I^b``."""
    t = Polynomial.var(inp.table, "t")
    gens = []
    for a in range(n + 1):
        b = n - a
        if b == 0:
            gens.append(t ** a)
        elif inp.gens:
            gens.extend((t ** a) * g for g in inp.ideal().power(b).generators)
    return Ideal(inp.table, gens)


def envelope_injectivity_check(inp: LciInput, n: int, W: int, source: str = "literal") -> InjectivityResult:
    """Kernel of ``P/K → D/t^n`` in every weight up to ``W``.

    ``source="literal"`` takes ``K = (I^n, t^n)``; ``source="adic"`` takes
    ``K = (t, I)^n``, which is exactly ``P ∩ t^n D``.  Both systems of ideals
    are cofinal, so either one computes the inverse limit.
    """
    D = prismatic_envelope(inp, n)
    if source == "literal":
        I = inp.ideal().power(n) if inp.gens else Ideal(inp.table, [])
    elif source == "adic":
        I = _mixed_power(inp, n)
    else:
        raise ValueError(f"unknown source {source!r}")
    src = QuotientPresentation(inp.table, I, n)
    ranks, kernel = {}, {}
    ok = True
    for w in range(W + 1):
        basis = src.slice_basis(w)
        cols = [D.quotient.coords(src.monomial(m).embed(D.table), w) for m in basis]
        ker = la.kernel(cols)
        ranks[w] = (len(cols), len(cols) - len(ker))
        kernel[w] = [Polynomial(inp.table, {basis[i]: c for i, c in v.items()}) for v in ker]
        ok = ok and not ker
    return InjectivityResult(ok, ranks, kernel, source)
