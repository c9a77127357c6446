"""Truncated simplicial commutative Q-algebras built by attaching cells.

Level ``n`` is the polynomial ring on the variables ``x_{c,u}`` for every cell
``c`` of degree ``d ≤ n`` and every monotone surjection ``u: [n] ↠ [d]``
(written as the tuple of its values), modulo the base relations on the
degree-0 cells.  A simplicial operator ``θ: [m] → [n]`` acts by

* ``θ*(x_{c,u}) = x_{c,u∘θ}`` when ``u∘θ`` is surjective;
* ``θ*(x_{c,u}) = σ*(ω_c)`` when the image of ``u∘θ`` is ``{1, …, d}``,
  where ``u∘θ = δ^0∘σ`` and ``ω_c`` is the boundary of the cell;
* ``θ*(x_{c,u}) = 0`` otherwise.

So the nondegenerate simplex ``x_c`` of a cell has ``d_0 x_c = ω_c`` and
``d_i x_c = 0`` for ``i ≥ 1``.  This convention is validated only through its
consequences: simplicial identities on generators, levels below ``d``
unchanged, and the exact sequence on ``π_{d-1}``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Sequence

from . import linalg as la
from .envelope import LciInput
from .groebner import Ideal, eliminate
from .poly import Polynomial, Variable, VariableTable
from .quotient import QuotientPresentation


class SimplicialError(ValueError):
    pass


def surjections(n: int, d: int) -> list[tuple[int, ...]]:
    """Monotone surjections ``[n] ↠ [d]`` as value tuples, in lexicographic order."""
    if d > n or d < 0:
        return []
    out = []
    for jumps in combinations(range(1, n + 1), d):
        u, cur = [], 0
        js = set(jumps)
        for i in range(n + 1):
            if i in js:
                cur += 1
            u.append(cur)
        out.append(tuple(u))
    return sorted(out)


def face_op(i: int, n: int) -> tuple[int, ...]:
    """``δ_i: [n-1] → [n]`` skipping ``i``."""
    return tuple(k if k < i else k + 1 for k in range(n))


def degeneracy_op(j: int, n: int) -> tuple[int, ...]:
    """``σ_j: [n+1] → [n]`` hitting ``j`` twice."""
    return tuple(k if k <= j else k - 1 for k in range(n + 2))


@dataclass(frozen=True)
class Cell:
    name: str
    degree: int
    weight: int
    boundary: Polynomial | None = None   # over the level d-1 table at attachment time
    ideal: bool = False                  # degree-0 cells generating the pair's ideal


class TruncatedSimplicialAlgebra:
    def __init__(self, cells: Sequence[Cell], relations: Sequence[Polynomial] = (), N: int = 3):
        self.cells = tuple(cells)
        self.N = N
        self.relations = tuple(relations)
        names = [c.name for c in self.cells]
        if len(set(names)) != len(names):
            raise SimplicialError("duplicate cell names")
        self._tables: dict[int, VariableTable] = {}
        self._quot: dict[int, QuotientPresentation] = {}
        self._ops: dict = {}

    # ---------------------------------------------------------- levels
    @classmethod
    def constant(cls, variables: Sequence[tuple[str, int]], relations: Sequence[str] = (), N: int = 3,
                 ideal_vars: Sequence[str] = ()):
        from .expr import parse_poly
        cells = [Cell(n, 0, w, None, n in ideal_vars) for n, w in variables]
        A = cls(cells, (), N)
        rels = tuple(parse_poly(A.table(0), r) for r in relations)
        return cls(cells, rels, N)

    def var_name(self, cell: Cell, u: tuple[int, ...]) -> str:
        if cell.degree == 0:
            return cell.name
        return f"{cell.name}<{''.join(map(str, u))}>"

    def level_vars(self, n: int) -> list[tuple[Cell, tuple[int, ...]]]:
        return [(c, u) for c in self.cells for u in surjections(n, c.degree)]

    def table(self, n: int) -> VariableTable:
        T = self._tables.get(n)
        if T is None:
            T = VariableTable([Variable(self.var_name(c, u), "cell", c.weight) for c, u in self.level_vars(n)])
            self._tables[n] = T
        return T

    def quotient(self, n: int) -> QuotientPresentation:
        Q = self._quot.get(n)
        if Q is None:
            T = self.table(n)
            Q = QuotientPresentation(T, Ideal(T, [r.embed(T) for r in self.relations]), 1)
            self._quot[n] = Q
        return Q

    def slice_basis(self, n: int, w: int):
        return self.quotient(n).slice_basis(w)

    # ------------------------------------------------------- operators
    def operator(self, theta: tuple[int, ...], n: int) -> dict[str, Polynomial]:
        """Images of the level-``n`` variables under ``θ*`` for ``θ: [m] → [n]``."""
        m = len(theta) - 1
        key = (theta, n)
        hit = self._ops.get(key)
        if hit is not None:
            return hit
        T = self.table(m)
        out = {}
        for c, u in self.level_vars(n):
            name = self.var_name(c, u)
            v = tuple(u[k] for k in theta)
            img = set(v)
            if c.degree == 0 or img == set(range(c.degree + 1)):
                out[name] = Polynomial.var(T, self.var_name(c, v))
            elif img == set(range(1, c.degree + 1)) and c.boundary is not None:
                sigma = tuple(x - 1 for x in v)
                omega = c.boundary.embed(self.table(c.degree - 1))
                out[name] = omega.substitute(self.operator(sigma, c.degree - 1), T)
            else:
                out[name] = Polynomial.zero(T)
        self._ops[key] = out
        return out

    def act(self, theta: tuple[int, ...], n: int, p: Polynomial) -> Polynomial:
        m = len(theta) - 1
        return self.quotient(m).reduce(p.embed(self.table(n)).substitute(self.operator(theta, n), self.table(m)))

    def face(self, i: int, n: int, p: Polynomial) -> Polynomial:
        return self.act(face_op(i, n), n, p)

    def degeneracy(self, j: int, n: int, p: Polynomial) -> Polynomial:
        return self.act(degeneracy_op(j, n), n, p)

    def check_identities(self, top: int | None = None) -> bool:
        """Simplicial identities on all generators of levels ``≤ top``."""
        top = self.N if top is None else top
        Qs = {n: self.quotient(n) for n in range(top + 1)}
        for n in range(top + 1):
            for c, u in self.level_vars(n):
                x = Polynomial.var(self.table(n), self.var_name(c, u))
                if n >= 2:
                    for j in range(n + 1):
                        for i in range(j):
                            a = self.face(i, n - 1, self.face(j, n, x))
                            b = self.face(j - 1, n - 1, self.face(i, n, x))
                            if not Qs[n - 2].is_zero(a - b):
                                return False
                if n + 1 <= top:
                    for j in range(n + 1):
                        s = self.degeneracy(j, n, x)
                        for i in range(n + 2):
                            a = self.face(i, n + 1, s)
                            if i in (j, j + 1):
                                b = x
                            elif i < j:
                                b = self.degeneracy(j - 1, n - 1, self.face(i, n, x))
                            else:
                                b = self.degeneracy(j, n - 1, self.face(i - 1, n, x))
                            if not Qs[n].is_zero(a - b):
                                return False
                if n + 2 <= top:
                    for j in range(n + 1):
                        for i in range(j + 1):
                            a = self.degeneracy(i, n + 1, self.degeneracy(j, n, x))
                            b = self.degeneracy(j + 1, n + 1, self.degeneracy(i, n, x))
                            if not Qs[n + 2].is_zero(a - b):
                                return False
        return True

    # -------------------------------------------------------- matrices
    def face_matrix(self, i: int, n: int, w: int) -> list[dict]:
        Qn, Qm = self.quotient(n), self.quotient(n - 1)
        index = {m: k for k, m in enumerate(Qm.slice_basis(w))}
        cols = []
        for m in Qn.slice_basis(w):
            r = self.face(i, n, Qn.monomial(m))
            cols.append({index[mm]: c for mm, c in r.terms.items()})
        return cols

    def element_coords(self, n: int, w: int, p: Polynomial) -> dict:
        return self.quotient(n).coords(p, w)

    def to_json_obj(self) -> dict:
        levels = []
        for n in range(self.N + 1):
            faces = {}
            for i in range(n + 1 if n else 0):
                faces[str(i)] = {k: str(v) for k, v in sorted(self.operator(face_op(i, n), n).items())}
            degs = {}
            if n < self.N:
                for j in range(n + 1):
                    degs[str(j)] = {k: str(v) for k, v in sorted(self.operator(degeneracy_op(j, n), n).items())}
            levels.append({"level": n, "variables": list(self.table(n).names[:-1]),
                           "faces": faces, "degeneracies": degs})
        cells = [{"name": c.name, "degree": c.degree, "weight": c.weight,
                  "boundary": None if c.boundary is None else str(c.boundary), "ideal": c.ideal}
                 for c in self.cells]
        return {"truncation": self.N, "relations": [str(r) for r in self.relations],
                "cells": cells, "levels": levels}

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), sort_keys=True, indent=1, ensure_ascii=False)


# ----------------------------------------------------------- homotopy

@dataclass
class SimplicialSpace:
    """A simplicial Q-vector space slice: dims per level and face matrices (levels ≤ top)."""

    dims: dict[int, int]
    faces: dict[tuple[int, int], list[dict]]   # (i, n) -> matrix level n -> n-1
    sub: dict[int, list[dict]] | None = None   # optional simplicial subspace, spanning vectors

    def _ambient(self, n):
        if self.sub is not None:
            return la.span_of(self.sub[n]).basis()
        return [la.unit(k) for k in range(self.dims[n])]

    def moore(self, n: int) -> list[dict]:
        """``N_n = ∩_{i≥1} ker d_i`` inside the (sub)space at level ``n``."""
        vecs = self._ambient(n)
        if n == 0 or not vecs:
            return vecs
        stacked = []
        off = 0
        blocks = []
        for i in range(1, n + 1):
            blocks.append((off, self.faces[(i, n)]))
            off += self.dims[n - 1]
        for v in vecs:
            col = {}
            for o, M in blocks:
                for r, c in la.apply(M, v).items():
                    col[o + r] = c
            stacked.append(col)
        out = []
        for comb_ in la.kernel(stacked):
            vec = {}
            for j, c in comb_.items():
                vec = la.vadd(vec, vecs[j], c)
            out.append(vec)
        return out

    def cycles_boundaries(self, n: int):
        Nn = self.moore(n)
        if n == 0:
            Z = Nn
        else:
            d0 = [la.apply(self.faces[(0, n)], v) for v in Nn]
            Z = []
            for comb_ in la.kernel(d0):
                vec = {}
                for j, c in comb_.items():
                    vec = la.vadd(vec, Nn[j], c)
                Z.append(vec)
        if (0, n + 1) in self.faces:
            B = la.image_basis([la.apply(self.faces[(0, n + 1)], v) for v in self.moore(n + 1)])
        else:
            raise SimplicialError(f"π_{n} needs level {n + 1}")
        return Z, B

    def homotopy_dim(self, n: int) -> int:
        Z, B = self.cycles_boundaries(n)
        return len(Z) - len(B)


def algebra_space(A: TruncatedSimplicialAlgebra, w: int, top: int | None = None) -> SimplicialSpace:
    top = A.N if top is None else top
    dims = {n: len(A.slice_basis(n, w)) for n in range(top + 1)}
    faces = {(i, n): A.face_matrix(i, n, w) for n in range(1, top + 1) for i in range(n + 1)}
    return SimplicialSpace(dims, faces)


def homotopy_groups(A, n: int, W: int) -> dict[int, int]:
    """``weight -> dim π_n`` for an algebra or a pair (the ideal part), ``n ≤ N-1``."""
    if isinstance(A, SimplicialPair):
        if n > A.algebra.N - 1:
            raise SimplicialError("homotopy degree exceeds the truncation-correct range")
        return {w: A.ideal_space(w).homotopy_dim(n) for w in range(W + 1)}
    if n > A.N - 1:
        raise SimplicialError("homotopy degree exceeds the truncation-correct range")
    return {w: algebra_space(A, w, n + 1).homotopy_dim(n) for w in range(W + 1)}


# ----------------------------------------------------------- attaching

@dataclass
class AttachReport:
    levels_unchanged: bool
    variable_counts_ok: bool
    identities_ok: bool
    ses_ok: bool
    pi_before: dict[int, int]
    pi_after: dict[int, int]
    killed: dict[int, int]

    @property
    def passed(self) -> bool:
        return self.levels_unchanged and self.variable_counts_ok and self.identities_ok and self.ses_ok


def _is_cycle(A: TruncatedSimplicialAlgebra, omega: Polynomial, n: int) -> bool:
    if n == 0:
        return True
    return all(A.face(i, n, omega).is_zero() for i in range(n + 1))


def attach_cell(A: TruncatedSimplicialAlgebra, d: int, omega: Polynomial | str, name: str | None = None,
                weight: int | None = None) -> TruncatedSimplicialAlgebra:
    """``B = A[x | ∂x = ω]`` with a cell of degree ``d``."""
    if d < 1 or d > A.N:
        raise SimplicialError(f"cell degree must lie in 1..{A.N}")
    T = A.table(d - 1)
    if isinstance(omega, str):
        from .expr import parse_poly
        omega = parse_poly(T, omega)
    omega = A.quotient(d - 1).reduce(omega.embed(T))
    if not omega.is_zero() and not omega.is_homogeneous():
        raise SimplicialError("ω must be weighted-homogeneous")
    if not _is_cycle(A, omega, d - 1):
        raise SimplicialError("ω is not a cycle of the normalized complex")
    if omega.is_zero():
        wt = weight if weight is not None else 1
    else:
        wt = omega.weight()
        if weight is not None and weight != wt:
            raise SimplicialError("weight does not match ω")
    name = name or f"c{len(A.cells)}"
    return TruncatedSimplicialAlgebra(A.cells + (Cell(name, d, wt, omega),), A.relations, A.N)


def _submodule_dim(A: TruncatedSimplicialAlgebra, omega: Polynomial, n: int, w: int, Z, B) -> int:
    """``dim (π_0(A)·[ω])_w`` inside ``π_n(A)_w``."""
    wo = omega.weight() if not omega.is_zero() else 0
    if omega.is_zero():
        return 0
    Q0 = A.quotient(0)
    total = tuple([0] * (n + 1))
    s = la.span_of(B)
    base = s.dim
    for m in Q0.slice_basis(w - wo):
        a = A.act(total, 0, Q0.monomial(m)) if n else Q0.monomial(m)
        p = A.quotient(n).reduce(a * omega.embed(A.table(n)))
        s.add(A.element_coords(n, w, p))
    return s.dim - base


def attach_cell_report(A: TruncatedSimplicialAlgebra, d: int, omega, W: int, name: str | None = None,
                       weight: int | None = None) -> tuple[TruncatedSimplicialAlgebra, AttachReport]:
    """Attach and verify the invariants (levels below ``d``, variable counts, identities, SES)."""
    Bt = attach_cell(A, d, omega, name, weight)
    cell = Bt.cells[-1]
    same = all(A.table(n) == Bt.table(n) for n in range(d))
    counts = all(len(Bt.table(n)) - len(A.table(n)) == comb(n, d) for n in range(Bt.N + 1))
    ident = Bt.check_identities(min(Bt.N, d + 1))
    ses = True
    before, after, killed = {}, {}, {}
    n = d - 1
    for w in range(W + 1):
        SA = algebra_space(A, w, n + 1)
        Z, Bd = SA.cycles_boundaries(n)
        pa = len(Z) - len(Bd)
        k = _submodule_dim(A, cell.boundary, n, w, Z, Bd)
        pb = algebra_space(Bt, w, n + 1).homotopy_dim(n)
        before[w], after[w], killed[w] = pa, pb, k
        ses &= pb == pa - k
    return Bt, AttachReport(same, counts, ident, ses, before, after, killed)


# -------------------------------------------------------------- pairs

@dataclass
class SimplicialPair:
    algebra: TruncatedSimplicialAlgebra
    ideal_cells: tuple[str, ...]

    def ideal_space(self, w: int, top: int | None = None) -> SimplicialSpace:
        A = self.algebra
        top = A.N if top is None else top
        base = algebra_space(A, w, top)
        sub = {}
        for n in range(top + 1):
            Q = A.quotient(n)
            vecs = []
            for c in A.cells:
                if c.name not in self.ideal_cells:
                    continue
                y = Polynomial.var(A.table(n), c.name)
                for m in Q.slice_basis(w - c.weight):
                    vecs.append(A.element_coords(n, w, y * Q.monomial(m)))
            sub[n] = vecs
        return SimplicialSpace(base.dims, base.faces, sub)


@dataclass
class ResolutionData:
    pair: SimplicialPair
    target: LciInput
    ideal_gens: tuple[Polynomial, ...]
    pi0_algebra: dict[int, tuple[int, int]]    # weight -> (dim π_0(A), dim B)
    pi0_ideal: dict[int, tuple[int, int]]      # weight -> (dim π_0(J), dim I)
    pi_higher: dict[tuple[int, str, int], int]  # (n, "algebra"|"ideal", weight) -> dim
    map_ok: bool

    @property
    def passed(self) -> bool:
        return (self.map_ok and all(a == b for a, b in self.pi0_algebra.values())
                and all(a == b for a, b in self.pi0_ideal.values())
                and not any(self.pi_higher.values()))

    def to_json_obj(self):
        return {"resolution": self.pair.algebra.to_json_obj(), "ideal_cells": list(self.pair.ideal_cells),
                "pi0_algebra": {str(w): list(v) for w, v in sorted(self.pi0_algebra.items())},
                "pi0_ideal": {str(w): list(v) for w, v in sorted(self.pi0_ideal.items())},
                "pi_higher": [{"n": n, "part": part, "weight": w, "dim": v}
                              for (n, part, w), v in sorted(self.pi_higher.items())],
                "map_ok": self.map_ok, "passed": self.passed}


def _fresh(name: str, taken: set) -> str:
    while name in taken:
        name = "_" + name
    taken.add(name)
    return name


def resolve_pair(B: LciInput, ideal: Sequence[Polynomial] = (), N: int = 3, W: int = 4,
                 max_cells: int = 64) -> ResolutionData:
    """Free resolution of the pair ``(B, I)`` up to level ``N``, verified through weight ``W``.

    Level 0 is ``Q[X_k, Y_j]`` with ``X_k ↦ T_k`` and ``Y_j ↦ g_j``; degree-1
    cells kill the kernel of that map and higher cells kill remaining
    homotopy classes slice by slice.
    """
    geo = B.geometric
    gens = tuple(g for g in ideal if not g.is_zero())
    taken = set(B.table.names)
    xs = [_fresh(f"X{k + 1}", taken) for k in range(len(geo))]
    ys = [_fresh(f"Y{j + 1}", taken) for j in range(len(gens))]
    cells = [Cell(x, 0, w) for x, w in zip(xs, B.weights_of(geo))]
    cells += [Cell(y, 0, g.weight(), None, True) for y, g in zip(ys, gens)]
    A = TruncatedSimplicialAlgebra(cells, (), N)
    T0 = A.table(0)
    # kernel of Q[X, Y] → B by elimination of the T variables
    big = B.table.extend([Variable(n, "auxiliary", c.weight) for n, c in zip(xs + ys, cells)])
    rel = [Polynomial.var(big, x) - Polynomial.var(big, t) for x, t in zip(xs, geo)]
    rel += [Polynomial.var(big, y) - g.embed(big) for y, g in zip(ys, gens)]
    rel += [f.embed(big) for f in B.gens]
    K = eliminate(Ideal(big, rel), geo)
    kernel = [p for p in K.groebner()]
    count = 0
    for p in kernel:
        q = p.embed(T0)
        A = attach_cell(A, 1, q, f"e{count + 1}")
        count += 1
    # kill higher homotopy (degrees 1..N-2 need levels up to N)
    for n in range(1, N - 1):
        for w in range(W + 1):
            while True:
                S = algebra_space(A, w, n + 1)
                Z, Bd = S.cycles_boundaries(n)
                if len(Z) == len(Bd):
                    break
                s = la.span_of(Bd)
                rep = next(z for z in Z if s.add(z)[0])
                omega = A.quotient(n).element(w, rep)
                count += 1
                if count > max_cells:
                    raise SimplicialError("cell budget exceeded")
                A = attach_cell(A, n + 1, omega, f"e{count}")
    pair = SimplicialPair(A, tuple(ys))
    # verification
    Rq = QuotientPresentation(B.table, B.ideal(), 1)
    tgt = {x: Polynomial.var(B.table, t) for x, t in zip(xs, geo)}
    tgt.update({y: g for y, g in zip(ys, gens)})
    pi0a, pi0i, higher = {}, {}, {}
    map_ok = True
    Iq = Ideal(B.table, list(B.gens) + list(gens))
    for w in range(W + 1):
        S = algebra_space(A, w, min(N, 2))
        Z, Bd = S.cycles_boundaries(0)
        # the map A_0 → B kills boundaries and induces an isomorphism
        Q0 = A.quotient(0)
        images = []
        for m in Q0.slice_basis(w):
            img = Rq.reduce(Q0.monomial(m).substitute(tgt, B.table))
            images.append(Rq.coords(img, w) if not img.is_zero() else {})
        for b in Bd:
            if la.apply(images, b):
                map_ok = False
        rank = la.rank(images)
        pi0 = len(Z) - len(Bd)
        map_ok &= rank == Rq.slice_dim(w) and pi0 == rank
        pi0a[w] = (pi0, Rq.slice_dim(w))
        J = pair.ideal_space(w, min(N, 2))
        pj = J.homotopy_dim(0)
        Ib = QuotientPresentation(B.table, B.ideal(), 1)
        dimI = Rq.slice_dim(w) - QuotientPresentation(B.table, Iq, 1).slice_dim(w)
        pi0i[w] = (pj, dimI)
        for n in range(1, N):
            higher[(n, "algebra", w)] = algebra_space(A, w, n + 1).homotopy_dim(n)
            higher[(n, "ideal", w)] = pair.ideal_space(w, n + 1).homotopy_dim(n)
    return ResolutionData(pair, B, gens, pi0a, pi0i, higher, map_ok)


# ---------------------------------------------------------- left Kan

def omega1_space(A: TruncatedSimplicialAlgebra, w: int, top: int) -> SimplicialSpace:
    """The simplicial vector space ``n ↦ (Ω^1_{A_n})_w`` (levels must be polynomial rings)."""
    if A.relations:
        raise SimplicialError("Ω^1 realization needs free levels")
    bases, index = {}, {}
    for n in range(top + 1):
        T = A.table(n)
        b = []
        for v in T.names[:-1]:
            wv = T.variables[T.index(v)].weight
            for m in A.slice_basis(n, w - wv):
                b.append((m, v))
        bases[n] = b
        index[n] = {x: k for k, x in enumerate(b)}
    faces = {}
    for n in range(1, top + 1):
        T, Tm = A.table(n), A.table(n - 1)
        for i in range(n + 1):
            ops = A.operator(face_op(i, n), n)
            cols = []
            for m, v in bases[n]:
                coef = Polynomial.monomial(T, m).substitute(ops, Tm)
                img = ops[v]
                col = {}
                for u in Tm.names[:-1]:
                    du = img.derivative(u)
                    if du.is_zero():
                        continue
                    for mm, c in (coef * du).terms.items():
                        k = index[n - 1][(mm, u)]
                        col[k] = col.get(k, 0) + c
                cols.append({k: c for k, c in col.items() if c})
            faces[(i, n)] = cols
    return SimplicialSpace({n: len(b) for n, b in bases.items()}, faces)


@dataclass
class LeftKanPieces:
    gr: dict[tuple[int, int, int], int]        # (i, n, weight) -> dim π_n(Ω^i levels)
    wedge: dict[tuple[int, int, int], int]     # (i, n, weight) -> dim H^{-n}(L∧^i)
    resolution: ResolutionData

    @property
    def passed(self) -> bool:
        keys = set(self.gr) | set(self.wedge)
        return all(self.gr.get(k, 0) == self.wedge.get(k, 0) for k in keys)


def left_kan_ht_pieces(R: LciInput, N: int = 3, i_max: int = 1, W: int = 4) -> LeftKanPieces:
    """``gr^i`` (``i ≤ 1``) of the left-Kan-extended theory via a free resolution of ``R``."""
    if i_max > 1:
        raise SimplicialError("left-Kan pieces are only claimed for i <= 1")
    if N < i_max + 2:
        raise SimplicialError("truncation too shallow for the requested piece")
    from .cotangent import cotangent_complex, wedge_power
    res = resolve_pair(R, (), N, W)
    A = res.pair.algebra
    L = cotangent_complex(R)
    gr, wedge = {}, {}
    top_n = N - 2
    for w in range(W + 1):
        for i in range(i_max + 1):
            S = algebra_space(A, w, top_n + 1) if i == 0 else omega1_space(A, w, top_n + 1)
            Wd = wedge_power(L, i).cohomology_dims(w)
            for n in range(top_n + 1):
                gr[(i, n, w)] = S.homotopy_dim(n)
                wedge[(i, n, w)] = Wd.get(-n, 0)
    return LeftKanPieces(gr, wedge, res)
