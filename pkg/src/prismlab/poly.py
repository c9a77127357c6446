"""Sparse weighted multivariate polynomials over Q.

Every ring carries the deformation variable ``t`` (weight 0), placed last in
the variable table so that it is the smallest variable for graded orders.
Coefficients are :class:`fractions.Fraction`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterable, Mapping

ROLES = ("deformation", "geometric", "envelope", "diagonal", "cell", "auxiliary")
T_NAME = "t"


class TableMismatch(ValueError):
    pass


@dataclass(frozen=True)
class Variable:
    name: str
    role: str
    weight: int


class VariableTable:
    """Ordered variables; ``t`` is always the last entry."""

    __slots__ = ("variables", "_index", "_hash")

    def __init__(self, variables: Iterable[Variable]):
        vs = [v for v in variables if v.role != "deformation"]
        names = [v.name for v in vs]
        if len(set(names)) != len(names) or T_NAME in names:
            raise ValueError(f"duplicate or reserved variable names in {names}")
        for v in vs:
            if v.role not in ROLES:
                raise ValueError(f"unknown role {v.role!r}")
            if v.weight < 0:
                raise ValueError(f"negative weight for {v.name}")
            if v.role in ("geometric", "envelope", "diagonal") and v.weight < 1:
                raise ValueError(f"{v.role} variable {v.name} needs weight >= 1")
        vs.append(Variable(T_NAME, "deformation", 0))
        self.variables = tuple(vs)
        self._index = {v.name: i for i, v in enumerate(self.variables)}
        self._hash = hash(self.variables)

    @classmethod
    def from_spec(cls, spec: Iterable[tuple], role: str = "geometric") -> "VariableTable":
        """Build from ``(name, weight)`` or ``(name, weight, role)`` tuples."""
        out = []
        for item in spec:
            if len(item) == 2:
                out.append(Variable(item[0], role, item[1]))
            else:
                out.append(Variable(item[0], item[2], item[1]))
        return cls(out)

    def __len__(self):
        return len(self.variables)

    def __eq__(self, other):
        return isinstance(other, VariableTable) and self.variables == other.variables

    def __hash__(self):
        return self._hash

    def __repr__(self):
        inner = ", ".join(f"{v.name}:{v.weight}" for v in self.variables[:-1])
        return f"VariableTable([{inner}])"

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(v.name for v in self.variables)

    @property
    def weights(self) -> tuple[int, ...]:
        return tuple(v.weight for v in self.variables)

    @property
    def t_index(self) -> int:
        return len(self.variables) - 1

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"unknown variable {name!r}") from None

    def __contains__(self, name):
        return name in self._index

    def role_of(self, name: str) -> str:
        return self.variables[self.index(name)].role

    def names_with_role(self, *roles: str) -> list[str]:
        return [v.name for v in self.variables if v.role in roles]

    def extend(self, new: Iterable[Variable], front: bool = False) -> "VariableTable":
        base = list(self.variables[:-1])
        new = list(new)
        return VariableTable(new + base if front else base + new)

    def without(self, names: Iterable[str]) -> "VariableTable":
        drop = set(names)
        return VariableTable([v for v in self.variables[:-1] if v.name not in drop])

    def weight_of(self, exps: tuple[int, ...]) -> int:
        return sum(e * w for e, w in zip(exps, self.weights))

    def monomials_of_weight(self, w: int, names: Iterable[str] | None = None,
                            t_max: int = 0) -> list[tuple[int, ...]]:
        """All exponent vectors of weight ``w`` supported on ``names``.

        Variables of weight 0 other than ``t`` are not allowed in ``names``;
        ``t`` may appear with exponent ``< t_max`` when ``t_max > 0``.
        """
        if names is None:
            names = [v.name for v in self.variables[:-1]]
        idx = [self.index(n) for n in names if n != T_NAME]
        for i in idx:
            if self.variables[i].weight <= 0:
                raise ValueError(f"cannot enumerate over weight-0 variable {self.names[i]}")
        n = len(self.variables)
        out = []

        def rec(pos, remaining, cur):
            if pos == len(idx):
                if remaining == 0:
                    out.append(tuple(cur))
                return
            i = idx[pos]
            wi = self.variables[i].weight
            for k in range(remaining // wi + 1):
                cur[i] = k
                rec(pos + 1, remaining - k * wi, cur)
            cur[i] = 0

        if w < 0:
            return []
        rec(0, w, [0] * n)
        if t_max > 0:
            ti = self.t_index
            full = []
            for m in out:
                for a in range(t_max):
                    mm = list(m)
                    mm[ti] = a
                    full.append(tuple(mm))
            return full
        return out


def _frac(c) -> Fraction:
    return c if isinstance(c, Fraction) else Fraction(c)


class Polynomial:
    """Immutable sparse polynomial; ``terms`` maps exponent tuples to Fractions."""

    __slots__ = ("table", "terms", "_hash")

    def __init__(self, table: VariableTable, terms: Mapping[tuple, Fraction] | None = None,
                 _clean: bool = False):
        self.table = table
        if terms is None:
            self.terms = {}
        elif _clean:
            self.terms = terms
        else:
            n = len(table)
            clean = {}
            for m, c in terms.items():
                if len(m) != n:
                    raise ValueError("exponent vector length does not match table")
                c = _frac(c)
                if c:
                    clean[tuple(m)] = c
            self.terms = clean
        self._hash = None

    # constructors
    @classmethod
    def zero(cls, table):
        return cls(table, {}, _clean=True)

    @classmethod
    def constant(cls, table, c):
        c = _frac(c)
        if not c:
            return cls.zero(table)
        return cls(table, {(0,) * len(table): c}, _clean=True)

    @classmethod
    def var(cls, table, name, power=1):
        m = [0] * len(table)
        m[table.index(name)] = power
        return cls(table, {tuple(m): Fraction(1)}, _clean=True)

    @classmethod
    def monomial(cls, table, exps, coeff=1):
        return cls(table, {tuple(exps): _frac(coeff)})

    # basic protocol
    def __bool__(self):
        return bool(self.terms)

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(self.table, other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.table == other.table and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.table, frozenset(self.terms.items())))
        return self._hash

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.table != self.table:
                raise TableMismatch(f"{self.table!r} vs {other.table!r}")
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial.constant(self.table, other)
        raise TypeError(f"cannot combine Polynomial with {type(other).__name__}")

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return Polynomial(self.table, out, _clean=True)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.table, {m: -c for m, c in self.terms.items()}, _clean=True)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = _frac(other)
            if not c:
                return Polynomial.zero(self.table)
            return Polynomial(self.table, {m: a * c for m, a in self.terms.items()}, _clean=True)
        other = self._coerce(other)
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                s = out.get(m, 0) + c1 * c2
                if s:
                    out[m] = s
                else:
                    out.pop(m, None)
        return Polynomial(self.table, out, _clean=True)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        result = Polynomial.constant(self.table, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __truediv__(self, c):
        return self * (1 / _frac(c))

    # structure
    def weight_of(self, m) -> int:
        return self.table.weight_of(m)

    def weights(self) -> set[int]:
        return {self.table.weight_of(m) for m in self.terms}

    def is_homogeneous(self) -> bool:
        return len(self.weights()) <= 1

    def weight(self) -> int:
        ws = self.weights()
        if len(ws) != 1:
            raise ValueError(f"polynomial {self} is not weighted-homogeneous")
        return ws.pop()

    def variables_used(self) -> set[str]:
        names = self.table.names
        return {names[i] for m in self.terms for i, e in enumerate(m) if e}

    def t_degree(self) -> int:
        ti = self.table.t_index
        return max((m[ti] for m in self.terms), default=0)

    def t_valuation(self) -> int:
        ti = self.table.t_index
        return min((m[ti] for m in self.terms), default=0)

    def coefficient(self, m) -> Fraction:
        return self.terms.get(tuple(m), Fraction(0))

    def derivative(self, name: str) -> "Polynomial":
        i = self.table.index(name)
        out = {}
        for m, c in self.terms.items():
            if m[i]:
                mm = list(m)
                mm[i] -= 1
                out[tuple(mm)] = c * m[i]
        return Polynomial(self.table, out, _clean=True)

    def divide_by_t(self, k: int = 1) -> "Polynomial":
        """Exact division by ``t**k``; raises if not divisible."""
        ti = self.table.t_index
        out = {}
        for m, c in self.terms.items():
            if m[ti] < k:
                raise ValueError(f"{self} is not divisible by t^{k}")
            mm = list(m)
            mm[ti] -= k
            out[tuple(mm)] = c
        return Polynomial(self.table, out, _clean=True)

    def substitute(self, assignment: Mapping[str, "Polynomial"],
                   target: VariableTable | None = None) -> "Polynomial":
        """Ring map sending variables to polynomials over ``target``.

        Unmapped variables are passed through by name into ``target``.
        """
        target = target or self.table
        names = self.table.names
        images = []
        for n in names:
            if n in assignment:
                img = assignment[n]
                if img.table != target:
                    raise TableMismatch(f"image of {n} lives over a different table")
                images.append(img)
            else:
                images.append(Polynomial.var(target, n))
        powers: dict = {}

        def pw(i, k):
            key = (i, k)
            if key not in powers:
                powers[key] = images[i] ** k
            return powers[key]

        result = Polynomial.zero(target)
        acc: dict = {}
        for m, c in self.terms.items():
            term = Polynomial.constant(target, c)
            for i, k in enumerate(m):
                if k:
                    term = term * pw(i, k)
            for mm, cc in term.terms.items():
                s = acc.get(mm, 0) + cc
                if s:
                    acc[mm] = s
                else:
                    acc.pop(mm, None)
        result = Polynomial(target, acc, _clean=True)
        return result

    def embed(self, target: VariableTable) -> "Polynomial":
        """Re-express over a table containing all variables used here."""
        if target == self.table:
            return self
        src = self.table.names
        pos = [target.index(n) for n in src]
        n = len(target)
        out = {}
        for m, c in self.terms.items():
            mm = [0] * n
            for i, e in enumerate(m):
                if e:
                    mm[pos[i]] = e
            out[tuple(mm)] = c
        return Polynomial(target, out, _clean=True)

    def truncate_t(self, e: int) -> "Polynomial":
        if e < 1:
            raise ValueError("truncation order must be >= 1")
        ti = self.table.t_index
        return Polynomial(self.table, {m: c for m, c in self.terms.items() if m[ti] < e},
                          _clean=True)

    def weight_components(self) -> dict[int, "Polynomial"]:
        comps: dict[int, dict] = {}
        for m, c in self.terms.items():
            comps.setdefault(self.table.weight_of(m), {})[m] = c
        return {w: Polynomial(self.table, d, _clean=True) for w, d in sorted(comps.items())}

    def set_t(self, value) -> "Polynomial":
        ti = self.table.t_index
        value = _frac(value)
        out: dict = {}
        for m, c in self.terms.items():
            mm = list(m)
            k = mm[ti]
            mm[ti] = 0
            mm = tuple(mm)
            s = out.get(mm, 0) + c * value ** k
            if s:
                out[mm] = s
            else:
                out.pop(mm, None)
        return Polynomial(self.table, out, _clean=True)

    # rendering
    def sorted_terms(self):
        """Terms in graded-lexicographic order (largest first)."""
        return sorted(self.terms.items(), key=lambda mc: (sum(mc[0]), mc[0]), reverse=True)

    def __str__(self):
        if not self.terms:
            return "0"
        names = self.table.names
        parts = []
        for m, c in self.sorted_terms():
            factors = []
            for i, e in enumerate(m):
                if e == 1:
                    factors.append(names[i])
                elif e:
                    factors.append(f"{names[i]}^{e}")
            mono = "*".join(factors)
            a = abs(c)
            cs = str(a.numerator) if a.denominator == 1 else f"{a.numerator}/{a.denominator}"
            if mono:
                body = mono if a == 1 else f"{cs}*{mono}"
            else:
                body = cs
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        first_sign, first = parts[0]
        s = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            s += f" {sign} {body}"
        return s

    def __repr__(self):
        return f"Polynomial({self})"


def poly_arith(a: Polynomial, b: Polynomial, op: str) -> Polynomial:
    if a.table != b.table:
        raise TableMismatch("operands over different tables")
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown op {op!r}")


def substitute(p: Polynomial, assignment: Mapping[str, Polynomial]) -> Polynomial:
    return p.substitute(assignment)


def truncate_t(p: Polynomial, e: int) -> Polynomial:
    return p.truncate_t(e)


def weight_components(p: Polynomial) -> dict[int, Polynomial]:
    return p.weight_components()


def gens(table: VariableTable) -> tuple[Polynomial, ...]:
    """Variables of ``table`` as polynomials, in table order."""
    return tuple(Polynomial.var(table, n) for n in table.names)


def exponent_range(bounds):
    return product(*(range(b + 1) for b in bounds))
