"""Cochain complexes over Q[t]/t^e, computed one weight slice at a time.

Two representations are used.

* :class:`SliceComplex` is a complex of finite-dimensional Q-vector spaces with
  a nilpotent operator ``t`` commuting with the differential.  Cohomology as a
  Q[t]/t^e-module is read off from the Jordan type of ``t`` on ``ker/im``.
* :class:`FreeComplex` is a complex of free modules over Q[t]/t^e (or over
  Q[t] for an integral model) with matrices of truncated series.  Cohomology is
  computed with a Smith normal form over the local ring.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Callable, Iterable, Sequence

from . import linalg as la
from .linalg import Vec


class ComplexError(ValueError):
    pass


@dataclass(frozen=True)
class ModuleStructure:
    """``Λ^free ⊕ ⊕_a Λ/t^a`` over ``Λ = Q[t]/t^e`` (``e = None``: over Q[t] near t=0)."""

    free_rank: int
    torsion: tuple[int, ...] = ()

    def dim(self, e: int) -> int:
        return self.free_rank * e + sum(self.torsion)

    def is_zero(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def as_dict(self):
        return {"free_rank": self.free_rank, "torsion": list(self.torsion)}

    def __str__(self):
        parts = []
        if self.free_rank:
            parts.append(f"Λ^{self.free_rank}" if self.free_rank > 1 else "Λ")
        for a in self.torsion:
            parts.append(f"Λ/t^{a}" if a > 1 else "Λ/t")
        return " ⊕ ".join(parts) or "0"


def structure_from_blocks(blocks: Iterable[int], e: int) -> ModuleStructure:
    blocks = sorted(b for b in blocks if b > 0)
    free = sum(1 for b in blocks if b >= e)
    return ModuleStructure(free, tuple(b for b in blocks if b < e))


def jordan_structure(Z: Sequence[Vec], B: Sequence[Vec], tmap: Sequence[Vec], e: int) -> ModuleStructure:
    """Structure of ``span(Z)/span(B)`` under the nilpotent operator ``tmap``."""
    base = la.span_of(B)
    dimB = base.dim
    c = []
    cur = list(Z)
    for j in range(e + 1):
        s = la.span_of(B)
        for v in cur:
            s.add(v)
        c.append(s.dim - dimB)
        cur = [la.apply(tmap, v) for v in cur]
        cur = [v for v in cur if v]
    if c[-1] != 0:
        raise ComplexError("t acts with nilpotency order above e on cohomology")
    # number of blocks of size > j is c_j - c_{j+1}
    gt = [c[j] - c[j + 1] for j in range(e)]
    blocks = []
    for s in range(1, e + 1):
        n = gt[s - 1] - (gt[s] if s < e else 0)
        if n < 0:
            raise ComplexError("inconsistent Jordan data")
        blocks.extend([s] * n)
    return structure_from_blocks(blocks, e)


class SliceComplex:
    """One weight slice: Q-spaces ``dims[k]``, differentials ``d[k]: k -> k+1``
    and the nilpotent action ``t[k]`` on each term; all matrices as column lists."""

    def __init__(self, dims: dict[int, int], d: dict[int, list[Vec]], t: dict[int, list[Vec]],
                 e: int, labels: dict[int, list] | None = None, weight: int | None = None):
        self.dims = dict(dims)
        self.d = {k: v for k, v in d.items()}
        self.t = {k: v for k, v in t.items()}
        self.e = e
        self.labels = labels or {}
        self.weight = weight
        for k, n in self.dims.items():
            self.d.setdefault(k, [{} for _ in range(n)])
            self.t.setdefault(k, [{} for _ in range(n)])
            if len(self.d[k]) != n or len(self.t[k]) != n:
                raise ComplexError(f"matrix size mismatch in degree {k}")

    @property
    def degrees(self) -> list[int]:
        return sorted(self.dims)

    def dim(self, k: int) -> int:
        return self.dims.get(k, 0)

    def check(self) -> None:
        """Verify ``d∘d = 0`` and ``d t = t d``."""
        for k in self.degrees:
            n = self.dim(k)
            nxt = self.d.get(k + 1)
            for j in range(n):
                img = self.d[k][j]
                if nxt is not None and img:
                    if la.apply(nxt, img):
                        raise ComplexError(f"d∘d ≠ 0 in degree {k}")
                if self.dim(k + 1):
                    a = la.apply(self.d[k], self.t[k][j])
                    b = la.apply(self.t[k + 1], img)
                    if a != b:
                        raise ComplexError(f"t does not commute with d in degree {k}")

    def cocycles(self, k: int) -> list[Vec]:
        if self.dim(k) == 0:
            return []
        if self.dim(k + 1) == 0:
            return [la.unit(j) for j in range(self.dim(k))]
        return la.kernel(self.d[k])

    def coboundaries(self, k: int) -> list[Vec]:
        if self.dim(k - 1) == 0:
            return []
        return la.image_basis(self.d[k - 1])

    def cohomology_dim(self, k: int) -> int:
        return len(self.cocycles(k)) - len(self.coboundaries(k))

    def cohomology(self, k: int) -> ModuleStructure:
        return jordan_structure(self.cocycles(k), self.coboundaries(k), self.t.get(k, []), self.e)

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * n for k, n in self.dims.items())

    def reduce_mod_t(self) -> "SliceComplex":
        """The quotient complex C/tC (t acting by zero)."""
        dims, d, labels, maps = {}, {}, {}, {}
        for k in self.degrees:
            free, _ = la.quotient_coords(self.t[k], [], self.dim(k))
            maps[k] = free
        for k in self.degrees:
            free = maps[k]
            dims[k] = len(free)
            if k in self.labels:
                labels[k] = [self.labels[k][i] for i in free]
        for k in self.degrees:
            if dims.get(k + 1, 0) == 0:
                continue
            imgs = [self.d[k][i] for i in maps[k]]
            _, coords = la.quotient_coords(self.t[k + 1], imgs, self.dim(k + 1))
            d[k] = coords
        return SliceComplex(dims, d, {}, 1, labels, self.weight)


# ------------------------------------------------------------- Bockstein

@dataclass
class BocksteinData:
    """β on H(C/t) for one weight: bases of H (as vectors in C/t coordinates) and matrices."""

    weight: int | None
    quotient: SliceComplex
    bases: dict[int, list[Vec]]
    matrices: dict[int, list[Vec]]  # matrices[k]: H^k -> H^{k+1}, columns in H basis coords

    def dims(self) -> dict[int, int]:
        return {k: len(v) for k, v in self.bases.items()}

    def compose_zero(self) -> bool:
        for k, m in self.matrices.items():
            nxt = self.matrices.get(k + 1)
            if nxt is None:
                continue
            for col in m:
                if la.apply(nxt, col):
                    return False
        return True


def _cohomology_basis(Z: list[Vec], B: list[Vec]):
    s = la.span_of(B)
    reps = []
    for z in Z:
        if s.add(z)[0]:
            reps.append(z)
    return reps


def bockstein(C: SliceComplex, basis: dict[int, list[Vec]] | None = None) -> BocksteinData:
    """Connecting map of ``0 → C/t → C/t² → C/t → 0`` for a complex free over Q[t]/t^e, e ≥ 2.

    ``basis`` optionally fixes the cocycle representatives of each ``H^k(C/t)``.
    """
    if C.e < 2:
        raise ComplexError("the Bockstein needs the complex modulo t^2 at least")
    free_idx = {}
    for k in C.degrees:
        free, _ = la.quotient_coords(C.t[k], [], C.dim(k))
        free_idx[k] = free
    Q = C.reduce_mod_t()
    bases = {}
    cls_span = {}
    for k in Q.degrees:
        Z = Q.cocycles(k)
        B = Q.coboundaries(k)
        reps = basis[k] if basis is not None and k in basis else _cohomology_basis(Z, B)
        bases[k] = reps
        s = la.Span(track=True)
        for v in B:
            s.add(v, None)
        for j, r in enumerate(reps):
            s.add(r, j)
        cls_span[k] = s
    mats = {}
    for k in Q.degrees:
        if k + 1 not in Q.dims or not bases[k]:
            mats[k] = [{} for _ in bases[k]]
            continue
        solver = la.Solver(C.t[k + 1])
        cols = []
        for z in bases[k]:
            lift = {free_idx[k][i]: c for i, c in z.items()}
            dz = la.apply(C.d[k], lift)
            y = solver.solve(dz)
            if y is None:
                raise ComplexError("lifted differential not divisible by t")
            _, (ybar,) = la.quotient_coords(C.t[k + 1], [y], C.dim(k + 1))
            coeffs = cls_span[k + 1].express(ybar)
            if coeffs is None:
                raise ComplexError("Bockstein image is not a cocycle")
            cols.append({j: c for j, c in coeffs.items() if j is not None and c})
        mats[k] = cols
    return BocksteinData(C.weight, Q, bases, mats)


# ------------------------------------------------------ series over Q[t]/t^e

def s_trim(a: list) -> list:
    a = list(a)
    while a and not a[-1]:
        a.pop()
    return a


def s_val(a: Sequence, e: int | None = None) -> int | None:
    """t-adic valuation of a coefficient list; ``None`` for zero (below ``e``)."""
    n = len(a) if e is None else min(len(a), e)
    for i in range(n):
        if a[i]:
            return i
    return None


def s_mul(a: Sequence, b: Sequence, e: int | None) -> list:
    if not a or not b:
        return []
    n = len(a) + len(b) - 1
    if e is not None:
        n = min(n, e)
    out = [Fraction(0)] * n
    for i, x in enumerate(a):
        if not x or i >= n:
            continue
        for j, y in enumerate(b):
            if i + j >= n:
                break
            if y:
                out[i + j] += x * y
    return s_trim(out)


def s_add(a: Sequence, b: Sequence, c=1) -> list:
    n = max(len(a), len(b))
    out = [(a[i] if i < len(a) else 0) + c * (b[i] if i < len(b) else 0) for i in range(n)]
    return s_trim([Fraction(x) for x in out])


def s_inv(u: Sequence, e: int) -> list:
    """Inverse of a unit series modulo t^e."""
    if not u or not u[0]:
        raise ZeroDivisionError("series is not a unit")
    inv = [Fraction(0)] * e
    inv[0] = 1 / Fraction(u[0])
    for n in range(1, e):
        acc = Fraction(0)
        for k in range(1, min(n, len(u) - 1) + 1):
            acc += u[k] * inv[n - k]
        inv[n] = -acc * inv[0]
    return s_trim(inv)


def s_shift(a: Sequence, k: int) -> list:
    """Multiply by t^k (k may be negative when the low terms vanish)."""
    if k >= 0:
        return s_trim([Fraction(0)] * k + list(a))
    if any(a[:(-k)]):
        raise ValueError("series not divisible")
    return s_trim(list(a[-k:]))


def s_trunc(a: Sequence, e: int | None) -> list:
    return s_trim(list(a[:e]) if e is not None else list(a))


def Mat(rows: int, cols: int) -> list[list[list]]:
    return [[[] for _ in range(cols)] for _ in range(rows)]


@dataclass
class SNFResult:
    exponents: list[int]       # t-exponents of the nonzero diagonal entries, ascending
    U: list                    # rows x rows
    V: list                    # cols x cols
    Vinv: list
    rows: int
    cols: int

    @property
    def rank(self) -> int:
        return len(self.exponents)


def _identity(n):
    M = Mat(n, n)
    for i in range(n):
        M[i][i] = [Fraction(1)]
    return M


def smith_normal_form(M: Sequence[Sequence[Sequence]], e: int, rows: int | None = None,
                      cols: int | None = None) -> SNFResult:
    """SNF over Q[t]/t^e: ``U·M·V = diag(t^a1, …, t^ar, 0, …)`` with ascending exponents."""
    m = len(M) if rows is None else rows
    n = (len(M[0]) if M else 0) if cols is None else cols
    A = [[s_trunc(M[i][j], e) for j in range(n)] for i in range(m)]
    U, V, Vi = _identity(m), _identity(n), _identity(n)
    exps = []
    r = 0
    while r < min(m, n):
        best = None
        for i in range(r, m):
            for j in range(r, n):
                v = s_val(A[i][j], e)
                if v is not None and (best is None or v < best[0]):
                    best = (v, i, j)
                    if v == 0:
                        break
            if best is not None and best[0] == 0:
                break
        if best is None:
            break
        v, i, j = best
        A[r], A[i] = A[i], A[r]
        U[r], U[i] = U[i], U[r]
        for row in A:
            row[r], row[j] = row[j], row[r]
        for row in V:
            row[r], row[j] = row[j], row[r]
        Vi[r], Vi[j] = Vi[j], Vi[r]
        unit = s_shift(A[r][r], -v)
        uinv = s_inv(unit, e)
        A[r] = [s_mul(x, uinv, e) for x in A[r]]
        U[r] = [s_mul(x, uinv, e) for x in U[r]]
        for i2 in range(m):
            if i2 == r or not A[i2][r]:
                continue
            q = s_shift(A[i2][r], -v)
            A[i2] = [s_add(x, s_mul(q, y, e), -1) for x, y in zip(A[i2], A[r])]
            U[i2] = [s_add(x, s_mul(q, y, e), -1) for x, y in zip(U[i2], U[r])]
        for j2 in range(n):
            if j2 == r or not A[r][j2]:
                continue
            q = s_shift(A[r][j2], -v)
            for i2 in range(m):
                if A[i2][r]:
                    A[i2][j2] = s_add(A[i2][j2], s_mul(q, A[i2][r], e), -1)
            for i2 in range(n):
                if V[i2][r]:
                    V[i2][j2] = s_add(V[i2][j2], s_mul(q, V[i2][r], e), -1)
            Vi[r] = [s_add(x, s_mul(q, y, e)) for x, y in zip(Vi[r], Vi[j2])]
        exps.append(v)
        r += 1
    return SNFResult(exps, U, V, Vi, m, n)


def mat_mul(A, B, e):
    m = len(A)
    k = len(B)
    n = len(B[0]) if B else 0
    out = Mat(m, n)
    for i in range(m):
        for l in range(k):
            a = A[i][l]
            if not a:
                continue
            for j in range(n):
                b = B[l][j]
                if b:
                    out[i][j] = s_add(out[i][j], s_mul(a, b, e))
    return out


def _presentation_structure(P: list, nrows: int, ncols: int, e: int) -> ModuleStructure:
    """Structure of the cokernel of ``P`` (nrows generators) over Q[t]/t^e."""
    snf = smith_normal_form(P, e, nrows, ncols)
    blocks = [a for a in snf.exponents if a > 0] + [e] * (nrows - snf.rank)
    return structure_from_blocks(blocks, e)


def snf_cohomology(A, B, n_prev: int, n: int, n_next: int, e: int) -> ModuleStructure:
    """``ker B / im A`` for free modules over Q[t]/t^e; ``A: Λ^n_prev → Λ^n``, ``B: Λ^n → Λ^n_next``."""
    if n == 0:
        return ModuleStructure(0)
    if n_next:
        snf = smith_normal_form(B, e, n_next, n)
        exps = snf.exponents + [e] * (n - snf.rank)
        Vi = snf.Vinv
    else:
        exps = [e] * n
        Vi = _identity(n)
    gens = [k for k in range(n) if exps[k] > 0]
    beta = {k: exps[k] for k in gens}
    Y = mat_mul(Vi, A, e) if n_prev else Mat(n, 0)
    cols = []
    for k in gens:
        if beta[k] < e:
            col = [[] for _ in gens]
            col[gens.index(k)] = [Fraction(0)] * beta[k] + [Fraction(1)]
            cols.append(col)
    for j in range(n_prev):
        col = []
        for k in gens:
            y = Y[k][j]
            shift = e - beta[k]
            if y and s_val(y, e) is not None and s_val(y, e) < shift:
                raise ComplexError("image not contained in the kernel")
            col.append(s_trunc(s_shift(s_trunc(y, e), -shift) if y else [], beta[k]))
        cols.append(col)
    P = [[cols[c][r] for c in range(len(cols))] for r in range(len(gens))]
    return _presentation_structure(P, len(gens), len(cols), e)


def integral_cohomology(A, B, n_prev: int, n: int, n_next: int, E: int) -> ModuleStructure:
    """``ker B / im A`` over Q[t] localized at t, computed modulo t^E.

    ``E`` must exceed every invariant-factor exponent; the result reports free
    rank and torsion exponents (all below ``E``).
    """
    if n == 0:
        return ModuleStructure(0)
    if n_next:
        snf = smith_normal_form(B, E, n_next, n)
        if snf.exponents and snf.exponents[-1] >= E - 1:
            raise ComplexError("precision too low for the integral model")
        r = snf.rank
        Vi = snf.Vinv
    else:
        r = 0
        Vi = _identity(n)
    gens = list(range(r, n))
    if not gens:
        return ModuleStructure(0)
    Y = mat_mul(Vi, A, E) if n_prev else Mat(n, 0)
    for k in range(r):
        for j in range(n_prev):
            if s_val(Y[k][j], E) is not None:
                raise ComplexError("image not contained in the kernel")
    P = [[Y[k][j] for j in range(n_prev)] for k in gens]
    snf2 = smith_normal_form(P, E, len(gens), n_prev)
    if snf2.exponents and snf2.exponents[-1] >= E - 1:
        raise ComplexError("precision too low for the integral model")
    tors = tuple(a for a in snf2.exponents if a > 0)
    return ModuleStructure(len(gens) - snf2.rank, tors)


class FreeComplex:
    """Complex of free modules; ``mats[k]`` (rows=rank k+1, cols=rank k) of coefficient lists.

    ``e`` is the truncation order, or ``None`` for an integral model over Q[t].
    """

    def __init__(self, ranks: dict[int, int], mats: dict[int, list], e: int | None,
                 labels: dict[int, list] | None = None, weight: int | None = None):
        self.ranks = dict(ranks)
        self.e = e
        self.mats = {}
        for k, n in self.ranks.items():
            m = self.ranks.get(k + 1, 0)
            M = mats.get(k)
            if M is None:
                M = Mat(m, n)
            if len(M) != m or any(len(r) != n for r in M):
                raise ComplexError(f"matrix in degree {k} has the wrong shape")
            self.mats[k] = [[s_trunc(x, e) for x in row] for row in M]
        self.labels = labels or {}
        self.weight = weight

    @property
    def degrees(self):
        return sorted(self.ranks)

    def rank(self, k):
        return self.ranks.get(k, 0)

    def check(self):
        for k in self.degrees:
            if self.rank(k + 2) == 0 and k + 1 in self.ranks and self.rank(k + 1):
                pass
            if k + 1 in self.mats and self.rank(k + 2):
                prod = mat_mul(self.mats[k + 1], self.mats[k], self.e)
                if any(x for row in prod for x in row):
                    raise ComplexError(f"d∘d ≠ 0 in degree {k}")

    def max_t_degree(self) -> int:
        return max((len(x) - 1 for M in self.mats.values() for row in M for x in row if x), default=0)

    def truncate(self, e: int) -> "FreeComplex":
        return FreeComplex(self.ranks, self.mats, e, self.labels, self.weight)

    def _mat(self, k):
        return self.mats.get(k, Mat(self.rank(k + 1), self.rank(k)))

    def cohomology(self, k: int) -> ModuleStructure:
        if self.e is None:
            raise ComplexError("use integral_cohomology for integral models")
        return snf_cohomology(self._mat(k - 1), self._mat(k), self.rank(k - 1), self.rank(k),
                              self.rank(k + 1), self.e)

    def precision(self) -> int:
        r = max(self.ranks.values(), default=0)
        return 2 * (r * self.max_t_degree() + 1) + 2

    def integral_cohomology(self, k: int, E: int | None = None) -> ModuleStructure:
        E = E or self.precision()
        return integral_cohomology(self._mat(k - 1), self._mat(k), self.rank(k - 1), self.rank(k),
                                   self.rank(k + 1), E)

    def to_slice(self) -> SliceComplex:
        """Expand into Q-coordinates ``(basis element, t-power)``."""
        e = self.e
        if e is None:
            raise ComplexError("cannot expand an integral model")
        dims = {k: n * e for k, n in self.ranks.items()}
        t = {}
        d = {}
        for k, n in self.ranks.items():
            t[k] = [({(b * e + a + 1): Fraction(1)} if a + 1 < e else {}) for b in range(n) for a in range(e)]
        for k, n in self.ranks.items():
            m = self.rank(k + 1)
            if not m:
                continue
            M = self.mats[k]
            cols = []
            for b in range(n):
                for a in range(e):
                    col = {}
                    for r in range(m):
                        for p, c in enumerate(M[r][b]):
                            if c and a + p < e:
                                col[r * e + a + p] = col.get(r * e + a + p, 0) + c
                    cols.append({i: c for i, c in col.items() if c})
            d[k] = cols
        labels = {}
        for k, labs in self.labels.items():
            labels[k] = [(lab, a) for lab in labs for a in range(e)]
        return SliceComplex(dims, d, t, e, labels, self.weight)


# ----------------------------------------------------------------- décalage

@dataclass
class Lattice:
    """Q[t]-lattice with basis columns ``Q[:, j]·t^exps[j]`` (Q constant, invertible)."""

    Q: list[list[Fraction]]
    exps: list[int]

    def contains_lattice(self, other: "Lattice") -> bool:
        n = len(self.exps)
        if n == 0:
            return len(other.exps) == 0
        Qi = la.inverse(self.Q)
        for j in range(len(other.exps)):
            col = [other.Q[i][j] for i in range(n)]
            coords = [sum(Qi[r][i] * col[i] for i in range(n)) for r in range(n)]
            for r in range(n):
                if coords[r] and other.exps[j] < self.exps[r]:
                    return False
        return True

    def equals(self, other: "Lattice") -> bool:
        return self.contains_lattice(other) and other.contains_lattice(self)


@dataclass
class EtaResult:
    complex: FreeComplex          # integral model of η_t C in the new bases
    lattices: dict[int, Lattice]  # η_t C^i inside C^i


def _poly_eval0(x):
    return x[0] if x else Fraction(0)


def eta_t(C: FreeComplex) -> EtaResult:
    """``(η_t C)^i = t^i C^i ∩ d^{-1}(t^{i+1} C^{i+1})`` on a t-torsion-free integral model."""
    if C.e is not None:
        raise ComplexError("η_t needs the integral (untruncated) model")
    lat = {}
    for i in C.degrees:
        n = C.rank(i)
        m = C.rank(i + 1)
        if m:
            A0 = [{r: _poly_eval0(C.mats[i][r][c]) for r in range(m) if _poly_eval0(C.mats[i][r][c])}
                  for c in range(n)]
            K = la.kernel(A0)
        else:
            K = [la.unit(j) for j in range(n)]
        comp = la.complement_basis(K, n)
        cols = [[K[j].get(r, Fraction(0)) for r in range(n)] for j in range(len(K))]
        cols += [[Fraction(int(r == c)) for r in range(n)] for c in comp]
        Q = [[cols[j][r] for j in range(n)] for r in range(n)]
        exps = [i] * len(K) + [i + 1] * len(comp)
        lat[i] = Lattice(Q, exps)
    mats = {}
    for i in C.degrees:
        m = C.rank(i + 1)
        n = C.rank(i)
        if not (m and n):
            continue
        Qi = la.inverse(lat[i + 1].Q)
        Qn = lat[i].Q
        A = C.mats[i]
        M = Mat(m, n)
        for r in range(m):
            for c in range(n):
                acc: list = []
                for a in range(m):
                    if not Qi[r][a]:
                        continue
                    for b in range(n):
                        if Qn[b][c] and A[a][b]:
                            acc = s_add(acc, [x * Qi[r][a] * Qn[b][c] for x in A[a][b]])
                shift = lat[i].exps[c] - lat[i + 1].exps[r]
                if acc:
                    v = s_val(acc)
                    if v + shift < 0:
                        raise ComplexError("η_t differential is not integral; input not torsion-free?")
                    M[r][c] = s_shift(acc, shift)
        mats[i] = M
    return EtaResult(FreeComplex(C.ranks, mats, None, weight=C.weight), lat)


# ------------------------------------------------------------------ Koszul

def monomials_with_weights(weights: Sequence[int], w: int) -> list[tuple[int, ...]]:
    n = len(weights)
    out = []

    def rec(i, rem, cur):
        if i == n:
            if rem == 0:
                out.append(tuple(cur))
            return
        for k in range(rem // weights[i] + 1):
            cur.append(k)
            rec(i + 1, rem - k * weights[i], cur)
            cur.pop()

    if w >= 0:
        rec(0, w, [])
    return out


@dataclass
class KoszulComplex:
    """Koszul complex on ``seq`` over the full polynomial ring (t included),
    graded by ``grading`` (positive on every variable).  Homological degree h
    sits in cohomological degree -h."""

    table: object
    seq: tuple
    grading: tuple[int, ...]

    def slice(self, w: int) -> SliceComplex:
        c = len(self.seq)
        degs = [sum(a * b for a, b in zip(next(iter(f.terms)), self.grading)) for f in self.seq]
        for f, dg in zip(self.seq, degs):
            if any(sum(a * b for a, b in zip(m, self.grading)) != dg for m in f.terms):
                raise ComplexError(f"{f} is not homogeneous for the Koszul grading")
        bases = {}
        index = {}
        for h in range(c + 1):
            items = []
            for J in combinations(range(c), h):
                wJ = sum(degs[j] for j in J)
                for m in monomials_with_weights(self.grading, w - wJ):
                    items.append((J, m))
            bases[-h] = items
            index[-h] = {it: k for k, it in enumerate(items)}
        d = {}
        for h in range(1, c + 1):
            cols = []
            for J, m in bases[-h]:
                col: Vec = {}
                for pos, j in enumerate(J):
                    sign = -1 if pos % 2 else 1
                    J2 = J[:pos] + J[pos + 1:]
                    for fm, fc in self.seq[j].terms.items():
                        mm = tuple(a + b for a, b in zip(m, fm))
                        k = index[-(h - 1)][(J2, mm)]
                        col[k] = col.get(k, 0) + sign * fc
                cols.append({k: v for k, v in col.items() if v})
            d[-h] = cols
        dims = {k: len(v) for k, v in bases.items()}
        return SliceComplex(dims, d, {}, 1, {k: list(v) for k, v in bases.items()}, w)

    def homology_dims(self, w: int) -> dict[int, int]:
        S = self.slice(w)
        return {-k: S.cohomology_dim(k) for k in S.degrees}


def koszul_complex(table, seq, grading: Sequence[int] | None = None) -> KoszulComplex:
    if grading is None:
        grading = tuple(w if w > 0 else 1 for w in table.weights)
    return KoszulComplex(table, tuple(seq), tuple(grading))


# ---------------------------------------------------------------- reports

@dataclass(frozen=True)
class ReportEntry:
    degree: int
    weight: int
    twist: int
    free_rank: int
    torsion: tuple[int, ...]

    def as_dict(self):
        return {"degree": self.degree, "weight": self.weight, "twist": self.twist,
                "free_rank": self.free_rank, "torsion": list(self.torsion)}


@dataclass
class CohomologyReport:
    e: int
    entries: list[ReportEntry] = field(default_factory=list)

    def add(self, degree: int, weight: int, s: ModuleStructure, twist: int = 0):
        self.entries.append(ReportEntry(degree, weight, twist, s.free_rank, tuple(sorted(s.torsion))))

    def sorted(self) -> "CohomologyReport":
        return CohomologyReport(self.e, sorted(self.entries, key=lambda r: (r.degree, r.weight, r.twist)))

    def get(self, degree: int, weight: int, twist: int | None = None) -> ModuleStructure:
        for r in self.entries:
            if r.degree == degree and r.weight == weight and (twist is None or r.twist == twist):
                return ModuleStructure(r.free_rank, r.torsion)
        return ModuleStructure(0)

    def table(self) -> dict[tuple[int, int], ModuleStructure]:
        return {(r.degree, r.weight): ModuleStructure(r.free_rank, r.torsion) for r in self.entries}

    def dims(self) -> dict[tuple[int, int], int]:
        return {(r.degree, r.weight): r.free_rank * self.e + sum(r.torsion) for r in self.entries}

    def to_json_obj(self):
        return [r.as_dict() for r in self.sorted().entries]

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), sort_keys=True)


def report_from_slices(slices: Callable[[int], SliceComplex | FreeComplex], weights: Iterable[int],
                       degrees: Iterable[int], e: int, twist: int = 0) -> CohomologyReport:
    rep = CohomologyReport(e)
    degrees = list(degrees)
    for w in weights:
        S = slices(w)
        for k in degrees:
            rep.add(k, w, S.cohomology(k), twist)
    return rep
