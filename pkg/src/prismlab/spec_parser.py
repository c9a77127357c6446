"""Session specification files: a line-oriented block grammar.

    base { trunc = 2, weight_max = 4, cech_depth = 2, simp_level = 3 }
    ring N { vars = [x:1, y:1] }
    ideal I in N { gens = ["x*y"] }
    crystal C over (N, I) { rank = 1, nabla_x = [["0"]] }
    task hodge_tate { input = I, e = 2 }

Entries are ``key = value`` separated by commas or newlines, ``#`` starts a
comment.  Values are integers, quoted strings, identifiers, ``name:weight``
pairs or bracketed lists of values.  Every error carries ``line:column``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from .expr import ExprError, parse_poly
from .poly import VariableTable


class SpecError(ValueError):
    def __init__(self, kind: str, message: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {kind} error: {message}")
        self.kind = kind
        self.message = message
        self.line = line
        self.col = col


@dataclass(frozen=True)
class Ident:
    name: str

    def __str__(self):
        return self.name


TASK_KINDS = ("envelope", "prism_coh", "inf_coh", "hodge_tate", "cech", "decalage", "reduction",
              "kunneth", "localize", "split", "resolve", "left_kan", "psi_check")

# key -> value kind; "ref" is the name of a ring or ideal
TASK_KEYS: dict[str, dict[str, str]] = {
    "envelope": {"input": "ref", "e": "int", "W": "int"},
    "prism_coh": {"input": "ref", "crystal": "crystal", "e": "int", "W": "int", "route": "ident"},
    "inf_coh": {"input": "ref", "crystal": "crystal", "W": "int"},
    "hodge_tate": {"input": "ref", "e": "int", "W": "int"},
    "cech": {"input": "ref", "crystal": "crystal", "L": "int", "e": "int", "W": "int"},
    "decalage": {"input": "ref", "e_max": "int", "W": "int", "demonstrate": "bool"},
    "reduction": {"input": "ref", "crystal": "crystal", "W": "int", "es": "ints"},
    "kunneth": {"first": "ref", "second": "ref", "W": "int", "i_max": "int"},
    "localize": {"input": "ref", "f": "str", "W": "int", "K": "int", "j_max": "int"},
    "split": {"input": "ref", "W": "int"},
    "resolve": {"input": "ref", "pair": "ideal", "N": "int", "W": "int"},
    "left_kan": {"input": "ref", "N": "int", "W": "int", "i_max": "int"},
    "psi_check": {"input": "ref", "crystal": "crystal", "e": "int", "W": "int"},
}
REQUIRED = {k: (("first", "second") if k == "kunneth" else ("input",)) for k in TASK_KINDS}
REQUIRED["localize"] = ("input", "f")

BASE_KEYS = ("trunc", "weight_max", "cech_depth", "simp_level")
BASE_DEFAULTS = {"trunc": 2, "weight_max": 3, "cech_depth": 2, "simp_level": 3}


@dataclass
class RingDecl:
    name: str
    vars: tuple[tuple[str, int], ...]
    pos: tuple[int, int] = field(default=(0, 0), compare=False)

    def table(self) -> VariableTable:
        return VariableTable.from_spec(self.vars)


@dataclass
class IdealDecl:
    name: str
    ring: str
    gens: tuple[str, ...]
    pos: tuple[int, int] = field(default=(0, 0), compare=False)


@dataclass
class CrystalDecl:
    name: str
    ring: str
    ideal: str
    rank: int
    nabla: tuple[tuple[str, tuple[tuple[str, ...], ...]], ...]
    weights: tuple[int, ...] | None = None
    pos: tuple[int, int] = field(default=(0, 0), compare=False)


@dataclass
class TaskDecl:
    kind: str
    params: tuple[tuple[str, Any], ...]
    pos: tuple[int, int] = field(default=(0, 0), compare=False)

    def get(self, key, default=None):
        for k, v in self.params:
            if k == key:
                return v
        return default


@dataclass
class SessionSpec:
    base: dict[str, int] = field(default_factory=lambda: dict(BASE_DEFAULTS))
    rings: dict[str, RingDecl] = field(default_factory=dict)
    ideals: dict[str, IdealDecl] = field(default_factory=dict)
    crystals: dict[str, CrystalDecl] = field(default_factory=dict)
    tasks: list[TaskDecl] = field(default_factory=list)

    @property
    def e(self) -> int:
        return self.base["trunc"]

    @property
    def W(self) -> int:
        return self.base["weight_max"]

    @property
    def L(self) -> int:
        return self.base["cech_depth"]

    @property
    def N(self) -> int:
        return self.base["simp_level"]

    def ring_of(self, ref: str) -> RingDecl:
        if ref in self.rings:
            return self.rings[ref]
        return self.rings[self.ideals[ref].ring]

    def to_json_obj(self) -> dict:
        return {
            "base": dict(sorted(self.base.items())),
            "rings": [{"name": r.name, "vars": [[n, w] for n, w in r.vars]} for r in self.rings.values()],
            "ideals": [{"name": i.name, "ring": i.ring, "gens": list(i.gens)} for i in self.ideals.values()],
            "crystals": [{"name": c.name, "ring": c.ring, "ideal": c.ideal, "rank": c.rank,
                          "weights": None if c.weights is None else list(c.weights),
                          "nabla": {v: [list(r) for r in M] for v, M in c.nabla}}
                         for c in self.crystals.values()],
            "tasks": [{"kind": t.kind, "params": {k: _plain(v) for k, v in t.params}} for t in self.tasks],
        }


def _plain(v):
    if isinstance(v, Ident):
        return v.name
    if isinstance(v, tuple):
        return [_plain(x) for x in v]
    return v


# ---------------------------------------------------------------- lexer

@dataclass
class Token:
    kind: str     # ident int str sym eof
    value: Any
    line: int
    col: int


_SYMS = set("{}[](),=:")


def tokenize(text: str) -> list[Token]:
    out = []
    line, col = 1, 1
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line, col = line + 1, 1
            i += 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == "#":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if ch in _SYMS:
            out.append(Token("sym", ch, line, col))
            i += 1
            col += 1
            continue
        if ch == '"':
            j = i + 1
            while j < n and text[j] not in '"\n':
                j += 1
            if j >= n or text[j] != '"':
                raise SpecError("lexical", "unterminated string", line, col)
            out.append(Token("str", text[i + 1:j], line, col))
            col += j + 1 - i
            i = j + 1
            continue
        if ch.isdigit() or (ch == "-" and i + 1 < n and text[i + 1].isdigit()):
            j = i + 1
            while j < n and text[j].isdigit():
                j += 1
            out.append(Token("int", int(text[i:j]), line, col))
            col += j - i
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i + 1
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            out.append(Token("ident", text[i:j], line, col))
            col += j - i
            i = j
            continue
        raise SpecError("lexical", f"unexpected character {ch!r}", line, col)
    out.append(Token("eof", None, line, col))
    return out


# --------------------------------------------------------------- parser

class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0

    def peek(self) -> Token:
        return self.toks[self.i]

    def take(self) -> Token:
        t = self.toks[self.i]
        self.i += 1
        return t

    def fail(self, msg, tok=None):
        tok = tok or self.peek()
        raise SpecError("syntax", msg, tok.line, tok.col)

    def expect_sym(self, s):
        t = self.take()
        if t.kind != "sym" or t.value != s:
            self.fail(f"expected {s!r}", t)
        return t

    def expect_ident(self, what="identifier"):
        t = self.take()
        if t.kind != "ident":
            self.fail(f"expected {what}", t)
        return t

    def value(self):
        t = self.peek()
        if t.kind == "int":
            self.take()
            return t.value, t
        if t.kind == "str":
            self.take()
            return t.value, t
        if t.kind == "ident":
            self.take()
            nxt = self.peek()
            if nxt.kind == "sym" and nxt.value == ":":
                self.take()
                w = self.take()
                if w.kind != "int":
                    self.fail("expected integer weight", w)
                return (t.value, w.value), t
            return Ident(t.value), t
        if t.kind == "sym" and t.value == "[":
            self.take()
            items, toks = [], []
            while not (self.peek().kind == "sym" and self.peek().value == "]"):
                v, vt = self.value()
                items.append(v)
                toks.append(vt)
                nxt = self.peek()
                if nxt.kind == "sym" and nxt.value == ",":
                    self.take()
                elif not (nxt.kind == "sym" and nxt.value == "]"):
                    self.fail("expected ',' or ']'")
            self.take()
            return _ListVal(items, toks), t
        self.fail("expected a value", t)

    def entries(self):
        self.expect_sym("{")
        out = []
        seen = set()
        while True:
            t = self.peek()
            if t.kind == "sym" and t.value == "}":
                self.take()
                return out
            if t.kind == "sym" and t.value == ",":
                self.take()
                continue
            key = self.expect_ident("key")
            if key.value in seen:
                raise SpecError("syntax", f"duplicate key {key.value!r}", key.line, key.col)
            seen.add(key.value)
            self.expect_sym("=")
            v, vt = self.value()
            out.append((key, v, vt))

    def parse(self) -> "SessionSpec":
        spec = SessionSpec()
        base_seen = False
        while self.peek().kind != "eof":
            kw = self.expect_ident("block keyword")
            pos = (kw.line, kw.col)
            if kw.value == "base":
                if base_seen:
                    raise SpecError("syntax", "duplicate base block", *pos)
                base_seen = True
                for key, v, vt in self.entries():
                    if key.value not in BASE_KEYS:
                        raise SpecError("syntax", f"unknown base key {key.value!r}", key.line, key.col)
                    if not isinstance(v, int) or v < 1:
                        raise SpecError("syntax", f"{key.value} must be a positive integer", vt.line, vt.col)
                    spec.base[key.value] = v
            elif kw.value == "ring":
                name = self.expect_ident("ring name")
                vars_ = None
                for key, v, vt in self.entries():
                    if key.value != "vars":
                        raise SpecError("syntax", f"unknown ring key {key.value!r}", key.line, key.col)
                    if not isinstance(v, _ListVal) or not all(isinstance(x, tuple) for x in v.items):
                        raise SpecError("syntax", "vars must be a list of name:weight", vt.line, vt.col)
                    vars_ = tuple(v.items)
                if vars_ is None:
                    raise SpecError("syntax", "ring needs vars", name.line, name.col)
                _declare(spec, name, "ring")
                spec.rings[name.value] = RingDecl(name.value, vars_, pos)
            elif kw.value == "ideal":
                name = self.expect_ident("ideal name")
                k = self.expect_ident("'in'")
                if k.value != "in":
                    self.fail("expected 'in'", k)
                ring = self.expect_ident("ring name")
                gens = ()
                gtoks = ()
                for key, v, vt in self.entries():
                    if key.value != "gens":
                        raise SpecError("syntax", f"unknown ideal key {key.value!r}", key.line, key.col)
                    if not isinstance(v, _ListVal) or not all(isinstance(x, str) for x in v.items):
                        raise SpecError("syntax", "gens must be a list of strings", vt.line, vt.col)
                    gens, gtoks = tuple(v.items), tuple(v.toks)
                _declare(spec, name, "ideal")
                spec.ideals[name.value] = IdealDecl(name.value, ring.value, gens, pos)
                self._pending.append(("ideal", name.value, ring, gtoks))
            elif kw.value == "crystal":
                name = self.expect_ident("crystal name")
                k = self.expect_ident("'over'")
                if k.value != "over":
                    self.fail("expected 'over'", k)
                self.expect_sym("(")
                ring = self.expect_ident("ring name")
                self.expect_sym(",")
                ideal = self.expect_ident("ideal name")
                self.expect_sym(")")
                rank, weights, nabla, ntoks = None, None, [], []
                for key, v, vt in self.entries():
                    if key.value == "rank":
                        if not isinstance(v, int) or v < 1:
                            raise SpecError("syntax", "rank must be a positive integer", vt.line, vt.col)
                        rank = v
                    elif key.value == "weights":
                        if not isinstance(v, _ListVal) or not all(isinstance(x, int) for x in v.items):
                            raise SpecError("syntax", "weights must be a list of integers", vt.line, vt.col)
                        weights = tuple(v.items)
                    elif key.value.startswith("nabla_"):
                        rows = _matrix(v, vt)
                        nabla.append((key.value[len("nabla_"):], rows))
                        ntoks.append((key, v))
                    else:
                        raise SpecError("syntax", f"unknown crystal key {key.value!r}", key.line, key.col)
                if rank is None:
                    raise SpecError("syntax", "crystal needs rank", name.line, name.col)
                _declare(spec, name, "crystal")
                spec.crystals[name.value] = CrystalDecl(name.value, ring.value, ideal.value, rank,
                                                        tuple(nabla), weights, pos)
                self._pending.append(("crystal", name.value, (ring, ideal), ntoks))
            elif kw.value == "task":
                kind = self.expect_ident("task kind")
                if kind.value not in TASK_KINDS:
                    raise SpecError("syntax", f"unknown task kind {kind.value!r}", kind.line, kind.col)
                params = []
                ptoks = {}
                for key, v, vt in self.entries():
                    params.append((key.value, v.as_tuple() if isinstance(v, _ListVal) else v))
                    ptoks[key.value] = (key, vt)
                spec.tasks.append(TaskDecl(kind.value, tuple(params), (kind.line, kind.col)))
                self._pending.append(("task", len(spec.tasks) - 1, kind, ptoks))
            else:
                self.fail(f"unknown block {kw.value!r}", kw)
        return spec


class _ListVal:
    def __init__(self, items, toks):
        self.items = items
        self.toks = toks

    def as_tuple(self):
        return tuple(x.as_tuple() if isinstance(x, _ListVal) else x for x in self.items)


def _matrix(v, vt):
    if not isinstance(v, _ListVal) or not all(isinstance(r, _ListVal) for r in v.items):
        raise SpecError("syntax", "connection matrix must be a list of rows", vt.line, vt.col)
    rows = []
    for r, rt in zip(v.items, v.toks):
        if not all(isinstance(x, str) for x in r.items):
            raise SpecError("syntax", "matrix entries must be quoted expressions", rt.line, rt.col)
        rows.append(tuple(r.items))
    return tuple(rows)


def _declare(spec, tok, what):
    taken = set(spec.rings) | set(spec.ideals) | set(spec.crystals)
    if tok.value in taken:
        raise SpecError("resolution", f"name {tok.value!r} already declared", tok.line, tok.col)


def _check_expr(table: VariableTable, text: str, tok: Token):
    try:
        return parse_poly(table, text)
    except ExprError as ex:
        # the string token's column points at the opening quote
        raise SpecError("syntax", ex.message, tok.line, tok.col + 1 + ex.pos) from None
    except Exception as ex:
        raise SpecError("syntax", str(ex), tok.line, tok.col) from None


def _resolve(spec: SessionSpec, pending):
    tables = {}
    for r in spec.rings.values():
        try:
            tables[r.name] = r.table()
        except ValueError as ex:
            raise SpecError("resolution", str(ex), *r.pos) from None
    for kind, name, extra, toks in pending:
        if kind == "ideal":
            ring = extra
            if ring.value not in spec.rings:
                raise SpecError("resolution", f"undeclared ring {ring.value!r}", ring.line, ring.col)
            for g, gt in zip(spec.ideals[name].gens, toks):
                p = _check_expr(tables[ring.value], g, gt)
                if "t" in p.variables_used() or (not p.is_zero() and not p.is_homogeneous()):
                    raise SpecError("resolution", f"generator {g!r} must be t-free and weighted-homogeneous",
                                    gt.line, gt.col)
        elif kind == "crystal":
            ring, ideal = extra
            c = spec.crystals[name]
            if ring.value not in spec.rings:
                raise SpecError("resolution", f"undeclared ring {ring.value!r}", ring.line, ring.col)
            if ideal.value not in spec.ideals or spec.ideals[ideal.value].ring != ring.value:
                raise SpecError("resolution", f"undeclared ideal {ideal.value!r} in ring {ring.value!r}",
                                ideal.line, ideal.col)
            if c.weights is not None and len(c.weights) != c.rank:
                raise SpecError("resolution", "weights length differs from rank", *c.pos)
            T = tables[ring.value]
            for key, v in toks:
                var = key.value[len("nabla_"):]
                if var not in T or T.role_of(var) != "geometric":
                    raise SpecError("resolution", f"unknown variable {var!r}", key.line, key.col)
                if len(v.items) != c.rank or any(len(r.items) != c.rank for r in v.items):
                    raise SpecError("resolution", f"nabla_{var} must be {c.rank}x{c.rank}", key.line, key.col)
                for r in v.items:
                    for x, xt in zip(r.items, r.toks):
                        _check_expr(T, x, xt)
        else:
            task = spec.tasks[name]
            schema = TASK_KEYS[task.kind]
            for key, (kt, vt) in toks.items():
                if key not in schema:
                    raise SpecError("resolution", f"unknown key {key!r} for task {task.kind}", kt.line, kt.col)
                _check_value(spec, schema[key], task.get(key), vt, tables)
            for key in REQUIRED[task.kind]:
                if key not in toks:
                    raise SpecError("resolution", f"task {task.kind} needs {key!r}", extra.line, extra.col)
            cr = task.get("crystal")
            if cr is not None:
                c = spec.crystals[cr.name]
                kt, vt = toks["crystal"]
                if task.get("input").name != c.ideal:
                    raise SpecError("resolution", f"crystal {c.name!r} lives over {c.ideal!r}", vt.line, vt.col)
            if task.kind == "resolve" and task.get("pair") is not None:
                kt, vt = toks["pair"]
                if spec.ideals[task.get("pair").name].ring != spec.ring_of(task.get("input").name).name:
                    raise SpecError("resolution", "pair ideal must live in the input's ring", vt.line, vt.col)
            if task.kind == "localize":
                kt, vt = toks["f"]
                T = tables[spec.ring_of(task.get("input").name).name]
                p = _check_expr(T, task.get("f"), vt)
                if p.is_zero() or not p.is_homogeneous():
                    raise SpecError("resolution", "f must be nonzero and weighted-homogeneous", vt.line, vt.col)


def _check_value(spec, kind, v, tok, tables):
    bad = lambda msg: SpecError("resolution", msg, tok.line, tok.col)
    if kind == "int":
        if not isinstance(v, int) or v < 1:
            raise bad("expected a positive integer")
    elif kind == "ints":
        if not isinstance(v, tuple) or not v or not all(isinstance(x, int) and x >= 1 for x in v):
            raise bad("expected a list of positive integers")
    elif kind == "str":
        if not isinstance(v, str):
            raise bad("expected a quoted expression")
    elif kind == "bool":
        if not (isinstance(v, Ident) and v.name in ("true", "false")):
            raise bad("expected true or false")
    elif kind == "ident":
        if not isinstance(v, Ident) or v.name not in ("A", "B"):
            raise bad("expected route A or B")
    elif kind == "ref":
        if not isinstance(v, Ident) or (v.name not in spec.rings and v.name not in spec.ideals):
            raise bad(f"undeclared ring or ideal {_plain(v)!r}")
    elif kind == "ideal":
        if not isinstance(v, Ident) or v.name not in spec.ideals:
            raise bad(f"undeclared ideal {_plain(v)!r}")
    elif kind == "crystal":
        if not isinstance(v, Ident) or v.name not in spec.crystals:
            raise bad(f"undeclared crystal {_plain(v)!r}")


def parse_spec(text: str) -> SessionSpec:
    p = _Parser(text)
    p._pending = []
    spec = p.parse()
    _resolve(spec, p._pending)
    return spec


# --------------------------------------------------------------- render

def _render_value(v) -> str:
    if isinstance(v, Ident):
        return v.name
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, str):
        return '"' + v + '"'
    if isinstance(v, tuple):
        return "[" + ", ".join(_render_value(x) for x in v) + "]"
    raise TypeError(f"cannot render {v!r}")


def render(spec: SessionSpec) -> str:
    lines = ["base { " + ", ".join(f"{k} = {spec.base[k]}" for k in BASE_KEYS) + " }"]
    for r in spec.rings.values():
        lines.append(f"ring {r.name} {{ vars = [" + ", ".join(f"{n}:{w}" for n, w in r.vars) + "] }")
    for i in spec.ideals.values():
        lines.append(f"ideal {i.name} in {i.ring} {{ gens = {_render_value(i.gens)} }}")
    for c in spec.crystals.values():
        parts = [f"rank = {c.rank}"]
        if c.weights is not None:
            parts.append(f"weights = {_render_value(c.weights)}")
        for var, M in c.nabla:
            parts.append(f"nabla_{var} = {_render_value(M)}")
        lines.append(f"crystal {c.name} over ({c.ring}, {c.ideal}) {{ " + ", ".join(parts) + " }")
    for t in spec.tasks:
        body = ", ".join(f"{k} = {_render_value(v)}" for k, v in t.params)
        lines.append(f"task {t.kind} {{ {body} }}" if body else f"task {t.kind} {{ }}")
    return "\n".join(lines) + "\n"
