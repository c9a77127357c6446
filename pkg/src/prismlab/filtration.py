"""Descending filtrations, the Simpson functor Ψ, graded pieces and convolution.

Two concrete kinds are supported.

* ideal-adic: ``Fil^n = I^n · M`` on a free module ``M = ⊕ Q[T]·e_k``;
* explicit filtrations on the terms of a complex of finite-dimensional slices
  (e.g. the lifted filtration ``I^{n-k} Ω^k`` on a de Rham complex).

Ψ of a filtered slice with adapted basis ``b`` of levels ``lv(b)`` is the free
Q[t]-lattice with basis ``t^{-lv(b)} b``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Callable, Sequence

from . import linalg as la
from .homology import FreeComplex, Mat, ComplexError
from .linalg import Vec
from .poly import Polynomial, Variable, VariableTable


class FiltrationError(ValueError):
    pass


# --------------------------------------------------------- adapted bases

@dataclass
class AdaptedBasis:
    """Basis of a slice compatible with a filtration: ``Fil^n`` is spanned by the vectors of level ≥ n."""

    vectors: list[Vec]
    levels: list[int]
    dim: int

    def __post_init__(self):
        self._solver = la.Solver(self.vectors)

    def coords(self, v: Vec) -> Vec:
        x = self._solver.solve(v)
        if x is None:
            raise FiltrationError("vector outside the slice")
        return x

    def level_counts(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for n in self.levels:
            out[n] = out.get(n, 0) + 1
        return out


def adapted_basis(dim: int, fil: Callable[[int], list[Vec]], lo: int, hi: int) -> AdaptedBasis:
    """``fil(n)`` spans ``Fil^n``: equal to the whole space for ``n ≤ lo`` and zero for ``n ≥ hi``."""
    s = la.Span()
    vecs, levels = [], []
    for n in range(hi - 1, lo - 1, -1):
        src = fil(n) if n > lo else [la.unit(i) for i in range(dim)]
        for v in src:
            if s.add(v)[0]:
                vecs.append(v)
                levels.append(n)
    if len(vecs) != dim:
        raise FiltrationError("filtration is not exhaustive on this slice")
    return AdaptedBasis(vecs, levels, dim)


def psi_dims_by_bidegree(levels: Sequence[int], e: int) -> dict[int, int]:
    """``Ψ/t^e`` slice split by ``(t-power) - level``."""
    out: dict[int, int] = {}
    for n in levels:
        for a in range(e):
            out[a - n] = out.get(a - n, 0) + 1
    return out


# --------------------------------------------------------- ideal-adic

class IdealAdicFiltration:
    """``Fil^n = I^n M`` on ``M = ⊕_k Q[T]·e_k`` (``wt e_k`` given), over t-free Q[T]."""

    kind = "ideal-adic"

    def __init__(self, table: VariableTable, gens: Sequence[Polynomial],
                 module_weights: Sequence[int] = (0,), name: str = ""):
        self.table = table
        self.gens = tuple(g for g in gens if not g.is_zero())
        for g in self.gens:
            if "t" in g.variables_used() or not g.is_homogeneous():
                raise FiltrationError(f"generator {g} must be t-free and weighted-homogeneous")
        self.module_weights = tuple(module_weights)
        self.name = name
        self.geo = [n for n in table.names_with_role("geometric")]
        self._products: dict[int, list[Polynomial]] = {}
        self._basis: dict[int, list] = {}
        self._adapted: dict[int, AdaptedBasis] = {}
        self.exhaustive = True

    @property
    def gen_weights(self):
        return [g.weight() for g in self.gens]

    def basis(self, w: int) -> list[tuple]:
        b = self._basis.get(w)
        if b is None:
            b = []
            for k, wk in enumerate(self.module_weights):
                for m in self.table.monomials_of_weight(w - wk, self.geo):
                    b.append((m, k))
            self._basis[w] = b
        return b

    def dim(self, w: int) -> int:
        return len(self.basis(w))

    def products(self, n: int) -> list[Polynomial]:
        if n not in self._products:
            one = Polynomial.constant(self.table, 1)
            out = []
            for combo in combinations_with_replacement(range(len(self.gens)), n):
                p = one
                for j in combo:
                    p = p * self.gens[j]
                out.append(p)
            self._products[n] = out
        return self._products[n]

    def max_level(self, w: int) -> int:
        """Smallest ``N`` with ``Fil^N`` zero in weight ``w`` (relative to module weights)."""
        if not self.gens:
            return 1
        mw = min(self.gen_weights)
        top = w - min(self.module_weights, default=0)
        return max(top // mw + 1, 1)

    def fil(self, n: int, w: int) -> list[Vec]:
        """Spanning vectors of ``(I^n M)_w`` in the monomial basis."""
        basis = self.basis(w)
        if n <= 0:
            return [la.unit(i) for i in range(len(basis))]
        if not self.gens:
            return []
        index = {b: i for i, b in enumerate(basis)}
        out = []
        for p in self.products(n):
            pw = p.weight()
            for k, wk in enumerate(self.module_weights):
                for m in self.table.monomials_of_weight(w - wk - pw, self.geo):
                    q = Polynomial.monomial(self.table, m) * p
                    out.append({index[(mm, k)]: c for mm, c in q.terms.items()})
        return out

    def adapted(self, w: int) -> AdaptedBasis:
        a = self._adapted.get(w)
        if a is None:
            a = adapted_basis(self.dim(w), lambda n: self.fil(n, w), 0, self.max_level(w) + 1)
            self._adapted[w] = a
        return a

    def gr_dims(self, w: int) -> dict[int, int]:
        """``dim gr^n_w = dim Fil^n_w - dim Fil^{n+1}_w`` by subspace ranks."""
        out = {}
        N = self.max_level(w) + 1
        ranks = [la.rank(self.fil(n, w)) for n in range(N + 1)]
        for n in range(N):
            if ranks[n] - ranks[n + 1]:
                out[n] = ranks[n] - ranks[n + 1]
        return out


def trivial_filtration(table: VariableTable, module_weights: Sequence[int] = (0,)) -> IdealAdicFiltration:
    """``Fil^0 = M`` and ``Fil^n = 0`` for ``n ≥ 1`` (the zero ideal)."""
    return IdealAdicFiltration(table, [], module_weights, "trivial")


@dataclass
class PsiModule:
    """``Ψ(F)/t^e`` for an ideal-adic filtration: lattice data plus a Gröbner presentation."""

    F: IdealAdicFiltration
    e: int

    def lattice_dims(self, w: int) -> dict[int, int]:
        return psi_dims_by_bidegree(self.F.adapted(w).levels, self.e)

    def dim(self, w: int) -> int:
        return self.e * self.F.dim(w)

    def presentation(self):
        """Rees-type presentation ``ambient[x_j]/(t x_j - f_j)`` saturated by t, mod t^e."""
        from .envelope import LciInput, prismatic_envelope
        return prismatic_envelope(LciInput(self.F.table, self.F.gens, self.F.name), self.e)

    def presentation_dims(self, w: int) -> dict[int, int]:
        """Slice of ``⊕_k Ψ(P)·e_k`` by bidegree, from the Gröbner presentation."""
        D = self.presentation()
        out: dict[int, int] = {}
        for wk in self.F.module_weights:
            for k, v in D.slice_dims_by_bidegree(w - wk).items():
                out[k] = out.get(k, 0) + v
        return out


def simpson_psi(F, e: int):
    if isinstance(F, IdealAdicFiltration):
        return PsiModule(F, e)
    if isinstance(F, FilteredSlice):
        return psi_complex(F)
    raise FiltrationError(f"unsupported filtration kind {type(F).__name__}")


@dataclass
class PsiGrCheck:
    passed: bool
    table: dict[int, dict[int, tuple[int, int]]]  # w -> n -> (Ψ/t dim, gr^n dim); twist is -n

    def as_dict(self):
        return {"passed": self.passed,
                "slices": [{"weight": w, "twist": -n, "psi": a, "gr": b}
                           for w, row in sorted(self.table.items()) for n, (a, b) in sorted(row.items())]}


def psi_gr_check(F: IdealAdicFiltration, W: int) -> PsiGrCheck:
    """``Ψ(F)/t`` (Gröbner presentation, split by envelope degree n) against ``gr^n`` (subspace ranks)."""
    psi = PsiModule(F, 1)
    D = psi.presentation()
    table = {}
    ok = True
    for w in range(W + 1):
        lhs: dict[int, int] = {}
        for wk in F.module_weights:
            for n, v in D.mod_t_dims_by_xdegree(w - wk).items():
                lhs[n] = lhs.get(n, 0) + v
        rhs = F.gr_dims(w)
        row = {}
        for n in sorted(set(lhs) | set(rhs)):
            row[n] = (lhs.get(n, 0), rhs.get(n, 0))
            ok = ok and row[n][0] == row[n][1]
        table[w] = row
    return PsiGrCheck(ok, table)


def convolution_filtration(F: IdealAdicFiltration, G: IdealAdicFiltration) -> IdealAdicFiltration:
    """``Fil^n(F⊗G) = Σ_{i+j=n} Fil^i ⊗ Fil^j``; for disjoint variables this is ``(I+J)``-adic."""
    shared = set(F.geo) & set(G.geo)
    if shared:
        raise FiltrationError(f"factors share variables {sorted(shared)}")
    if len(F.module_weights) != 1 or len(G.module_weights) != 1:
        raise FiltrationError("convolution implemented for rank-one underlying modules")
    vs = [v for v in F.table.variables[:-1]] + [v for v in G.table.variables[:-1]]
    table = VariableTable(vs)
    gens = [g.embed(table) for g in F.gens] + [g.embed(table) for g in G.gens]
    return IdealAdicFiltration(table, gens, (F.module_weights[0] + G.module_weights[0],),
                               f"{F.name}*{G.name}")


def convolve_gr(a: dict[int, dict[int, int]], b: dict[int, dict[int, int]], W: int) -> dict[int, dict[int, int]]:
    """Graded tensor of graded pieces: inputs and output are ``w -> n -> dim``."""
    out: dict[int, dict[int, int]] = {}
    for w in range(W + 1):
        row: dict[int, int] = {}
        for u in range(w + 1):
            for i, x in a.get(u, {}).items():
                for j, y in b.get(w - u, {}).items():
                    row[i + j] = row.get(i + j, 0) + x * y
        out[w] = {n: v for n, v in row.items() if v}
    return out


# ------------------------------------------------ filtered complexes

@dataclass
class FilteredSlice:
    """One weight slice of a filtered complex of Q-spaces.

    ``fil[k](n)`` spans ``Fil^n`` of the degree-k term; ``bounds[k] = (lo, hi)``
    with ``Fil^n`` everything for ``n ≤ lo`` and zero for ``n ≥ hi``.
    """

    dims: dict[int, int]
    d: dict[int, list[Vec]]
    fil: dict[int, Callable[[int], list[Vec]]]
    bounds: dict[int, tuple[int, int]]
    weight: int | None = None
    labels: dict[int, list] = field(default_factory=dict)

    def adapted(self, k: int) -> AdaptedBasis:
        lo, hi = self.bounds[k]
        return adapted_basis(self.dims[k], self.fil[k], lo, hi)

    def gr_slice(self, n: int):
        """``gr^n`` of the complex as a :class:`SliceComplex` over Q."""
        from .homology import SliceComplex
        dims, d, maps = {}, {}, {}
        for k in sorted(self.dims):
            lo, hi = self.bounds[k]
            top = self.fil[k](n) if n > lo else [la.unit(i) for i in range(self.dims[k])]
            if n >= hi:
                top = []
            sub = self.fil[k](n + 1) if n + 1 > lo else [la.unit(i) for i in range(self.dims[k])]
            if n + 1 >= hi:
                sub = []
            subspan = la.span_of(sub)
            reps = []
            s2 = la.span_of(sub)
            for v in top:
                if s2.add(v)[0]:
                    reps.append(v)
            maps[k] = (subspan, reps)
            dims[k] = len(reps)
        for k in sorted(self.dims):
            if k + 1 not in self.dims or not dims[k] or not dims.get(k + 1):
                continue
            subspan, reps = maps[k + 1]
            solver = la.Span(track=True)
            for v in subspan.basis():
                solver.add(v, None)
            for j, r in enumerate(reps):
                solver.add(r, j)
            cols = []
            for v in maps[k][1]:
                img = la.apply(self.d[k], v)
                x = solver.express(img)
                if x is None:
                    raise FiltrationError("differential does not preserve the filtration")
                cols.append({j: c for j, c in x.items() if j is not None and c})
            d[k] = cols
        return SliceComplex(dims, d, {}, 1, weight=self.weight)


@dataclass
class PsiComplex:
    """Integral lattice model of Ψ on one slice, with the adapted bases used."""

    complex: FreeComplex
    bases: dict[int, AdaptedBasis]

    def truncated(self, e: int) -> FreeComplex:
        return self.complex.truncate(e)


def psi_complex(S: FilteredSlice) -> PsiComplex:
    """Lattice ``Σ_n t^{-n} Fil^n`` with the differential written in the bases ``t^{-lv(b)} b``."""
    bases = {k: S.adapted(k) for k in S.dims}
    mats = {}
    for k in sorted(S.dims):
        if k + 1 not in S.dims:
            continue
        src, dst = bases[k], bases[k + 1]
        M = Mat(S.dims[k + 1], S.dims[k])
        for j, v in enumerate(src.vectors):
            img = la.apply(S.d[k], v) if S.dims[k + 1] else {}
            coords = dst.coords(img) if img else {}
            for i, c in coords.items():
                shift = dst.levels[i] - src.levels[j]
                if shift < 0:
                    raise FiltrationError("differential is not filtered")
                M[i][j] = [Fraction(0)] * shift + [c]
        mats[k] = M
    return PsiComplex(FreeComplex(S.dims, mats, None, weight=S.weight), bases)
