"""Quotient rings ``Q[t, vars]/(J + t^e)`` with weight-slice bases."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from .groebner import Ideal, MonomialOrder, grevlex, _reduce
from .poly import Polynomial, VariableTable


class QuotientPresentation:
    """``table`` variables, defining ideal ``ideal`` and truncation order ``e``.

    Every weight slice has the finite basis of standard monomials of that
    weight with t-exponent below ``e``.
    """

    def __init__(self, table: VariableTable, ideal: Ideal | Iterable[Polynomial], e: int,
                 order: MonomialOrder | None = None):
        if e < 1:
            raise ValueError("truncation order must be >= 1")
        for v in table.variables[:-1]:
            if v.weight <= 0:
                raise ValueError(f"variable {v.name} needs positive weight for finite slices")
        self.table = table
        self.ideal = ideal if isinstance(ideal, Ideal) else Ideal(table, list(ideal))
        self.e = e
        self.order = order or grevlex(table)
        t_e = Polynomial.var(table, "t", e)
        self.full = self.ideal.extended([t_e])
        self._basis = self.full.basis_data(self.order)
        self._lms = [lm for lm, _ in self._basis]
        self._slices: dict[int, list] = {}
        self._index: dict[int, dict] = {}

    def __repr__(self):
        return f"QuotientPresentation({self.table!r}, {self.ideal!r}, e={self.e})"

    def is_zero_ring(self) -> bool:
        return any(not any(lm) for lm in self._lms)

    def groebner(self) -> list[Polynomial]:
        return [Polynomial(self.table, p, _clean=True) for _, p in self._basis]

    def is_standard(self, m) -> bool:
        return not any(all(a <= b for a, b in zip(lm, m)) for lm in self._lms)

    def slice_basis(self, w: int) -> list[tuple]:
        b = self._slices.get(w)
        if b is None:
            if self.is_zero_ring():
                b = []
            else:
                mons = self.table.monomials_of_weight(w, t_max=self.e)
                b = sorted((m for m in mons if self.is_standard(m)), key=self.order.key, reverse=True)
            self._slices[w] = b
            self._index[w] = {m: i for i, m in enumerate(b)}
        return b

    def slice_dim(self, w: int) -> int:
        return len(self.slice_basis(w))

    def reduce(self, p: Polynomial) -> Polynomial:
        if p.table != self.table:
            p = p.embed(self.table)
        return Polynomial(self.table, _reduce(p.terms, self._basis, self.order.key), _clean=True)

    def is_zero(self, p: Polynomial) -> bool:
        return self.reduce(p).is_zero()

    def coords(self, p: Polynomial, w: int) -> dict[int, Fraction]:
        """Coordinates of a weight-``w`` element in the slice basis."""
        self.slice_basis(w)
        idx = self._index[w]
        r = self.reduce(p)
        out = {}
        for m, c in r.terms.items():
            if m not in idx:
                raise ValueError(f"term of {r} not in weight slice {w}")
            out[idx[m]] = c
        return out

    def element(self, w: int, vec: dict) -> Polynomial:
        b = self.slice_basis(w)
        return Polynomial(self.table, {b[i]: c for i, c in vec.items() if c})

    def monomial(self, m) -> Polynomial:
        return Polynomial(self.table, {tuple(m): Fraction(1)}, _clean=True)

    def t_matrix(self, w: int) -> list[dict]:
        t = Polynomial.var(self.table, "t")
        return [self.coords(t * self.monomial(m), w) for m in self.slice_basis(w)]

    def x_degree(self, m, names: Sequence[str]) -> int:
        return sum(m[self.table.index(n)] for n in names)
