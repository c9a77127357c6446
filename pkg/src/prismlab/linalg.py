"""Exact sparse linear algebra over Q.

Vectors are dicts ``index -> Fraction`` with no zero entries.  A linear map
is stored by the images of basis vectors (a list of column vectors).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

Vec = dict


def vadd(a: Vec, b: Vec, c=1) -> Vec:
    """``a + c*b`` as a new vector."""
    out = dict(a)
    for k, v in b.items():
        s = out.get(k, 0) + c * v
        if s:
            out[k] = s
        else:
            out.pop(k, None)
    return out


def vscale(a: Vec, c) -> Vec:
    if not c:
        return {}
    return {k: v * c for k, v in a.items()}


def unit(i: int) -> Vec:
    return {i: Fraction(1)}


def apply(cols: Sequence[Vec], x: Vec) -> Vec:
    out: Vec = {}
    for j, c in x.items():
        for k, v in cols[j].items():
            s = out.get(k, 0) + c * v
            if s:
                out[k] = s
            else:
                out.pop(k, None)
    return out


def compose(outer: Sequence[Vec], inner: Sequence[Vec]) -> list[Vec]:
    return [apply(outer, c) for c in inner]


def to_dense(cols: Sequence[Vec], nrows: int) -> list[list[Fraction]]:
    rows = [[Fraction(0)] * len(cols) for _ in range(nrows)]
    for j, c in enumerate(cols):
        for i, v in c.items():
            rows[i][j] = v
    return rows


def from_dense(rows: Sequence[Sequence]) -> list[Vec]:
    if not rows:
        return []
    ncols = len(rows[0])
    cols: list[Vec] = [dict() for _ in range(ncols)]
    for i, r in enumerate(rows):
        for j, v in enumerate(r):
            if v:
                cols[j][i] = Fraction(v)
    return cols


class Span:
    """Incremental echelon basis of a subspace, optionally tracking combinations.

    Each stored vector has a pivot (its smallest index) with coefficient 1 and
    the stored vectors have pairwise distinct pivots.  With tracking enabled,
    ``combo[p]`` expresses stored vector ``p`` in terms of the tags of the
    inserted vectors.
    """

    def __init__(self, track: bool = False):
        self.rows: dict[int, Vec] = {}
        self.track = track
        self.combo: dict[int, Vec] = {}

    def __len__(self):
        return len(self.rows)

    @property
    def dim(self) -> int:
        return len(self.rows)

    def reduce(self, v: Vec, combo: Vec | None = None):
        v = dict(v)
        combo = dict(combo) if combo is not None else ({} if self.track else None)
        rows = self.rows
        while True:
            cand = [k for k in v if k in rows]
            if not cand:
                break
            p = min(cand)
            c = v[p]
            for k, x in rows[p].items():
                s = v.get(k, 0) - c * x
                if s:
                    v[k] = s
                else:
                    v.pop(k, None)
            if combo is not None:
                for k, x in self.combo[p].items():
                    s = combo.get(k, 0) - c * x
                    if s:
                        combo[k] = s
                    else:
                        combo.pop(k, None)
        return v, combo

    def add(self, v: Vec, tag: int | None = None):
        """Insert ``v``; returns ``(independent, dependency combo or None)``."""
        combo0 = {tag: Fraction(1)} if (self.track and tag is not None) else ({} if self.track else None)
        r, combo = self.reduce(v, combo0)
        if not r:
            return False, combo
        p = min(r)
        c = r[p]
        if c != 1:
            inv = 1 / c
            r = {k: x * inv for k, x in r.items()}
            if combo is not None:
                combo = {k: x * inv for k, x in combo.items()}
        self.rows[p] = r
        if combo is not None:
            self.combo[p] = combo
        return True, None

    def contains(self, v: Vec) -> bool:
        r, _ = self.reduce(v, None if not self.track else {})
        return not r

    def basis(self) -> list[Vec]:
        return [self.rows[p] for p in sorted(self.rows)]

    def pivots(self) -> list[int]:
        return sorted(self.rows)

    def express(self, v: Vec) -> Vec | None:
        """Coefficients in terms of inserted tags, or ``None`` if ``v`` is outside."""
        if not self.track:
            raise ValueError("span built without tracking")
        r, combo = self.reduce(v, {})
        if r:
            return None
        return {k: -x for k, x in combo.items()}


def span_of(vecs: Iterable[Vec]) -> Span:
    s = Span()
    for v in vecs:
        s.add(v)
    return s


def rank(cols: Iterable[Vec]) -> int:
    return span_of(cols).dim


def kernel(cols: Sequence[Vec]) -> list[Vec]:
    """Basis of ``{x : sum x_j cols[j] = 0}`` (vectors indexed by column)."""
    s = Span(track=True)
    out = []
    for j, c in enumerate(cols):
        indep, dep = s.add(c, j)
        if not indep:
            out.append(dep)
    return out


def image_basis(cols: Sequence[Vec]) -> list[Vec]:
    return span_of(cols).basis()


def solve(cols: Sequence[Vec], b: Vec) -> Vec | None:
    """Some ``x`` with ``sum x_j cols[j] = b``, or ``None``."""
    s = Span(track=True)
    for j, c in enumerate(cols):
        s.add(c, j)
    return s.express(b)


class Solver:
    """Reusable solver for a fixed list of columns."""

    def __init__(self, cols: Sequence[Vec]):
        self.span = Span(track=True)
        for j, c in enumerate(cols):
            self.span.add(c, j)

    def solve(self, b: Vec) -> Vec | None:
        return self.span.express(b)

    def rank(self) -> int:
        return self.span.dim


def intersect_spaces(a: Sequence[Vec], b: Sequence[Vec]) -> list[Vec]:
    """Basis of span(a) ∩ span(b)."""
    cols = list(a) + [vscale(v, -1) for v in b]
    ker = kernel(cols)
    out = Span()
    for x in ker:
        v: Vec = {}
        for j, c in x.items():
            if j < len(a):
                v = vadd(v, a[j], c)
        out.add(v)
    return out.basis()


def complement_basis(sub: Sequence[Vec], dim: int) -> list[int]:
    """Indices of standard basis vectors completing ``sub`` to all of Q^dim."""
    s = span_of(sub)
    out = []
    for i in range(dim):
        if s.add(unit(i))[0]:
            out.append(i)
    return out


def quotient_coords(sub: Sequence[Vec], vecs: Sequence[Vec], dim: int):
    """Coordinates of ``vecs`` in a fixed complement of ``sub`` (a quotient model).

    Returns ``(complement indices, coords)``, where the coordinates are taken
    after reducing by ``sub`` with the complement chosen among standard vectors
    not occurring as pivots.
    """
    s = span_of(sub)
    free = [i for i in range(dim) if i not in s.rows]
    pos = {i: k for k, i in enumerate(free)}
    out = []
    for v in vecs:
        r, _ = s.reduce(v)
        out.append({pos[i]: x for i, x in r.items()})
    return free, out


def inverse(rows: Sequence[Sequence[Fraction]]) -> list[list[Fraction]]:
    n = len(rows)
    a = [list(map(Fraction, r)) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(rows)]
    for c in range(n):
        p = next((r for r in range(c, n) if a[r][c]), None)
        if p is None:
            raise ValueError("singular matrix")
        a[c], a[p] = a[p], a[c]
        inv = 1 / a[c][c]
        a[c] = [x * inv for x in a[c]]
        for r in range(n):
            if r != c and a[r][c]:
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return [r[n:] for r in a]
