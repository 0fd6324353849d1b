"""Block language for describing NQ-1 manifolds, distributions, IM data and actions.

A document is a sequence of blocks ``kind [name] { key = value; ... }``.
Separators ``;`` and ``,`` between statements are optional and ``#`` starts a
comment.  Values are expressions over rationals, ``x<i>``, ``xi<i>``,
``d/dx<i>``, ``d/dxi<i>``, ``Q``, the operators ``+ - * / ^`` and brackets
``[A, B]``, or lists ``[v, ...]`` for list-valued keys.  ``^`` followed by a
number is a power; between two non-numeric factors it is the (graded)
product, so ``xi1^xi2`` is the wedge product.  ``[A, B]`` is the graded
commutator of two vector fields, or the application ``A(B)`` when ``B`` is a
function.  All indices in the text are 1-based.

``parse`` produces a syntax tree with source positions, ``resolve`` turns it
into mathematical objects and ``render`` writes a resolved document back in
canonical form, so that ``render(resolve(parse(render(m)))) == render(m)``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Any, Sequence

from .algebroid import LieAlgebroidData, build_q
from .distributions import ClassicalTriple, greedy_complement, sample_points, std_section
from .graded import GradedFunction
from .lie2 import Lie2Action, StrictLie2Algebra
from .polynomial import Poly, format_scalar
from .reduction import ADAPTED_CHART, POINT_BODY, ReductionSetting
from .vector_fields import VectorField, vf_apply, vf_commutator


class DSLError(ValueError):
    """Input error with a source location."""

    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        self.message, self.line, self.col = message, line, col
        where = f"line {line}, col {col}: " if line is not None else ""
        super().__init__(where + message)


# ---------------------------------------------------------------------------
# tokens

_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>\#[^\n]*)
  | (?P<dvar>d/dxi[0-9]+|d/dx[0-9]+)
  | (?P<num>[0-9]+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<sym>[{}\[\](),;=+\-*/^])
""", re.VERBOSE)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    out: list[Token] = []
    pos, line, start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise DSLError(f"unexpected character {text[pos]!r}", line, pos - start + 1)
        kind, tok = m.lastgroup, m.group()
        col = pos - start + 1
        if kind == "nl":
            line, start = line + 1, m.end()
        elif kind == "dvar":
            out.append(Token("dxi" if tok.startswith("d/dxi") else "dx", tok, line, col))
        elif kind == "ident":
            if re.fullmatch(r"xi[0-9]+", tok):
                out.append(Token("xi", tok, line, col))
            elif re.fullmatch(r"x[0-9]+", tok):
                out.append(Token("x", tok, line, col))
            else:
                out.append(Token("ident", tok, line, col))
        elif kind in ("num", "sym"):
            out.append(Token(kind, tok, line, col))
        pos = m.end()
    out.append(Token("eof", "", line, pos - start + 1))
    return out


# ---------------------------------------------------------------------------
# syntax tree


@dataclass(frozen=True)
class Node:
    kind: str
    args: tuple
    line: int
    col: int


@dataclass
class Statement:
    key: str
    index: tuple[tuple[str, ...], ...]
    value: Any
    line: int
    col: int


@dataclass
class Block:
    kind: str
    name: str | None
    statements: list[Statement]
    line: int
    col: int


@dataclass
class Document:
    blocks: list[Block] = field(default_factory=list)


BLOCK_KINDS = ("manifold", "algebroid", "q_field", "lie2algebra", "action", "distribution",
               "imfoliation", "settings")
LIST_KEYS = {"B", "F", "flat_frame", "F_coords", "complement"}


class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def error(self, msg: str, tok: Token | None = None):
        tok = tok or self.tok
        return DSLError(msg, tok.line, tok.col)

    def take(self) -> Token:
        t = self.toks[self.i]
        self.i += 1
        return t

    def at(self, text: str) -> bool:
        return self.tok.kind == "sym" and self.tok.text == text

    def expect(self, text: str) -> Token:
        if not self.at(text):
            found = self.tok.text or "end of input"
            raise self.error(f"expected {text!r}, found {found!r}")
        return self.take()

    def document(self) -> Document:
        doc = Document()
        while self.tok.kind != "eof":
            doc.blocks.append(self.block())
        return doc

    def block(self) -> Block:
        t = self.tok
        if t.kind != "ident" or t.text not in BLOCK_KINDS:
            raise self.error(f"expected a block kind ({', '.join(BLOCK_KINDS)}), found {t.text or 'end of input'!r}")
        self.take()
        name = None
        if self.tok.kind == "ident":
            name = self.take().text
        self.expect("{")
        stmts = []
        while not self.at("}"):
            if self.tok.kind == "eof":
                raise self.error(f"unterminated block {t.text!r} opened at line {t.line}")
            stmts.append(self.statement())
            while self.at(";") or self.at(","):
                self.take()
        self.take()
        return Block(t.text, name, stmts, t.line, t.col)

    def statement(self) -> Statement:
        t = self.tok
        if t.kind not in ("ident", "x", "xi"):
            raise self.error(f"expected a key, found {t.text!r}")
        self.take()
        index = []
        while self.at("["):
            self.take()
            group = [self.index_item()]
            while self.at(","):
                self.take()
                group.append(self.index_item())
            self.expect("]")
            index.append(tuple(group))
        self.expect("=")
        if t.text in LIST_KEYS:
            value = self.list_value()
        else:
            value = self.expr()
        return Statement(t.text, tuple(index), value, t.line, t.col)

    def index_item(self) -> str:
        t = self.tok
        if t.kind == "num":
            return self.take().text
        if t.kind == "ident":
            s = self.take().text
            while self.at("^"):
                self.take()
                if self.tok.kind != "ident":
                    raise self.error("expected a basis element after '^'")
                s += "^" + self.take().text
            return s
        raise self.error(f"expected an index, found {t.text!r}")

    def list_value(self) -> list[Node]:
        self.expect("[")
        items: list[Node] = []
        if not self.at("]"):
            items.append(self.expr())
            while self.at(","):
                self.take()
                items.append(self.expr())
        self.expect("]")
        return items

    # expressions: sum of terms, term = factors joined by * and /, factor = atoms joined by ^
    def expr(self) -> Node:
        t = self.tok
        if self.at("-") or self.at("+"):
            op = self.take().text
            node = self.term()
            if op == "-":
                node = Node("neg", (node,), t.line, t.col)
        else:
            node = self.term()
        while self.at("+") or self.at("-"):
            op = self.take()
            rhs = self.term()
            node = Node("add" if op.text == "+" else "sub", (node, rhs), op.line, op.col)
        return node

    def term(self) -> Node:
        node = self.factor()
        while self.at("*") or self.at("/"):
            op = self.take()
            rhs = self.factor()
            node = Node("mul" if op.text == "*" else "div", (node, rhs), op.line, op.col)
        return node

    def factor(self) -> Node:
        node = self.atom()
        while self.at("^"):
            op = self.take()
            rhs = self.atom()
            kind = "pow" if rhs.kind == "num" else "wedge"
            node = Node(kind, (node, rhs), op.line, op.col)
        return node

    def atom(self) -> Node:
        t = self.tok
        if t.kind == "num":
            self.take()
            return Node("num", (Fraction(int(t.text)),), t.line, t.col)
        if t.kind in ("x", "xi", "dx", "dxi"):
            self.take()
            k = int(re.search(r"[0-9]+$", t.text).group())
            if k < 1:
                raise DSLError(f"indices start at 1 in {t.text!r}", t.line, t.col)
            return Node(t.kind, (k - 1,), t.line, t.col)
        if t.kind == "ident":
            self.take()
            return Node("Q" if t.text == "Q" else "name", (t.text,), t.line, t.col)
        if self.at("("):
            self.take()
            node = self.expr()
            self.expect(")")
            return node
        if self.at("["):
            self.take()
            a = self.expr()
            self.expect(",")
            b = self.expr()
            self.expect("]")
            return Node("br", (a, b), t.line, t.col)
        raise self.error(f"expected an expression, found {t.text or 'end of input'!r}")


def parse(text: str) -> Document:
    return _Parser(text).document()


def parse_expression(text: str) -> Node:
    p = _Parser(text)
    node = p.expr()
    if p.tok.kind != "eof":
        raise p.error(f"unexpected {p.tok.text!r} after expression")
    return node


# ---------------------------------------------------------------------------
# evaluation


def _kind(v) -> str:
    if isinstance(v, Fraction):
        return "number"
    if isinstance(v, GradedFunction):
        return "function"
    return "vector field"


def evaluate(node: Node, n: int, r: int, Q: VectorField | None = None):
    """Value of an expression: a Fraction, GradedFunction or VectorField."""

    def err(msg, nd=node):
        return DSLError(msg, nd.line, nd.col)

    def ev(nd: Node):
        k, a = nd.kind, nd.args
        if k == "num":
            return a[0]
        if k == "x" or k == "dx":
            if a[0] >= n:
                raise err(f"x{a[0] + 1} does not exist on a base of dimension {n}", nd)
            return GradedFunction.x(n, r, a[0]) if k == "x" else VectorField.d_x(n, r, a[0])
        if k == "xi" or k == "dxi":
            if a[0] >= r:
                raise err(f"xi{a[0] + 1} does not exist in rank {r}", nd)
            return GradedFunction.xi(n, r, a[0]) if k == "xi" else VectorField.d_xi(n, r, a[0])
        if k == "Q":
            if Q is None:
                raise err("Q is not available here (define a q_field or an algebroid first)", nd)
            return Q
        if k == "name":
            raise err(f"unknown symbol {a[0]!r}", nd)
        if k == "neg":
            return -ev(a[0])
        lhs, rhs = ev(a[0]), ev(a[1])
        kl, kr = _kind(lhs), _kind(rhs)
        if k in ("add", "sub"):
            if "vector field" in (kl, kr) and kl != kr:
                raise err(f"cannot add a {kl} and a {kr}", nd)
            if kl == "vector field":
                return lhs + rhs if k == "add" else lhs - rhs
            if kl == "number" and kr == "number":
                return lhs + rhs if k == "add" else lhs - rhs
            if kl == "number":
                lhs = GradedFunction.const(n, r, lhs)
            return lhs + rhs if k == "add" else lhs - rhs
        if k == "div":
            if kr != "number":
                raise err("only division by a number is supported", nd)
            if rhs == 0:
                raise err("division by zero", nd)
            return lhs / rhs if kl == "number" else lhs.scale(1 / rhs)
        if k == "pow":
            if kl == "vector field":
                raise err("a vector field cannot be raised to a power", nd)
            if rhs.denominator != 1 or rhs < 0:
                raise err("exponents must be non-negative integers", nd)
            return lhs ** int(rhs)
        if k in ("mul", "wedge"):
            if kl == "vector field" and kr == "vector field":
                raise err("cannot multiply two vector fields; use [A, B] for the commutator", nd)
            if kl == "vector field":
                if kr != "number":
                    raise err("write the coefficient in front: f*d/dx1", nd)
                return lhs.scale(rhs)
            if kr == "vector field" and k == "wedge":
                raise err("'^' joins functions; use '*' in front of a vector field", nd)
            if kl == "number" and kr == "number":
                return lhs * rhs
            if kl == "number":
                return rhs.scale(lhs)
            if kr == "number":
                return lhs.scale(rhs)
            return lhs * rhs
        if k == "br":
            if kl != "vector field":
                raise err("the first entry of [A, B] must be a vector field", nd)
            if kr == "vector field":
                return vf_commutator(lhs, rhs)
            if kr == "number":
                rhs = GradedFunction.const(n, r, rhs)
            return vf_apply(lhs, rhs)
        raise err(f"unknown expression node {k}", nd)

    return ev(node)


def evaluate_text(text: str, n: int, r: int, Q: VectorField | None = None):
    return evaluate(parse_expression(text), n, r, Q)


# ---------------------------------------------------------------------------
# resolved documents


@dataclass
class DistributionSpec:
    name: str | None
    generators: list[VectorField]
    labels: list[str]


@dataclass
class IMFoliationSpec:
    name: str | None
    triple: ClassicalTriple
    explicit_complement: bool


@dataclass
class ActionSpec:
    name: str | None
    algebra: str | None
    action: Lie2Action


@dataclass
class Model:
    n: int | None = None
    r: int | None = None
    algebroid: LieAlgebroidData | None = None
    algebroid_name: str | None = None
    q_field: VectorField | None = None
    q_name: str | None = None
    lie2: dict[str | None, StrictLie2Algebra] = field(default_factory=dict)
    actions: list[ActionSpec] = field(default_factory=list)
    distributions: list[DistributionSpec] = field(default_factory=list)
    imfoliations: list[IMFoliationSpec] = field(default_factory=list)
    settings: ReductionSetting | None = None

    @property
    def Q(self) -> VectorField | None:
        if self.q_field is not None:
            return self.q_field
        if self.algebroid is not None:
            return build_q(self.algebroid)
        return None

    @property
    def empty(self) -> bool:
        return self.n is None and not (self.lie2 or self.actions or self.distributions or self.imfoliations)


def _serr(msg: str, s: Statement | Block) -> DSLError:
    return DSLError(msg, s.line, s.col)


def _int_index(s: Statement, group: int, count: int, bounds: Sequence[int]) -> tuple[int, ...]:
    if len(s.index) <= group or len(s.index[group]) != count:
        raise _serr(f"{s.key} needs {count} indices in brackets", s)
    out = []
    for item, bound in zip(s.index[group], bounds):
        if not item.isdigit():
            raise _serr(f"index {item!r} of {s.key} must be a number", s)
        k = int(item)
        if not 1 <= k <= bound:
            raise _serr(f"index {k} of {s.key} is out of range 1..{bound}", s)
        out.append(k - 1)
    return tuple(out)


def _no_index(s: Statement) -> None:
    if s.index:
        raise _serr(f"{s.key} takes no index", s)


def _scalar(s: Statement) -> Fraction:
    v = evaluate(s.value, 0, 0)
    if not isinstance(v, Fraction):
        raise _serr(f"{s.key} must be a number", s)
    return v


def _natural(s: Statement) -> int:
    v = _scalar(s)
    if v.denominator != 1 or v < 0:
        raise _serr(f"{s.key} must be a non-negative integer", s)
    return int(v)


def _base_function(node: Node, n: int, r: int, s: Statement) -> Poly:
    v = evaluate(node, n, r)
    if isinstance(v, Fraction):
        return Poly.const(n, v)
    if not isinstance(v, GradedFunction) or v.degree() not in (None, 0):
        raise _serr(f"{s.key} must be a function of the base coordinates", s)
    return v.base_part()


def _section(node: Node, n: int, r: int, Q, s: Statement) -> tuple[Poly, ...]:
    v = evaluate(node, n, r, Q)
    if not isinstance(v, VectorField) or (v and v.degree != -1) or any(f.degree() not in (None, 0) for f in v.odd):
        raise _serr(f"entries of {s.key} must be sections, written as f1*d/dxi1 + ...", s)
    return tuple(f.base_part() for f in v.odd)


def _base_field(node: Node, n: int, r: int, s: Statement) -> tuple[Poly, ...]:
    v = evaluate(node, n, r)
    if not isinstance(v, VectorField) or any(v.odd) or any(f.degree() not in (None, 0) for f in v.even):
        raise _serr(f"entries of {s.key} must be base vector fields, written as f1*d/dx1 + ...", s)
    return tuple(f.base_part() for f in v.even)


def _field(node: Node, n: int, r: int, Q, s: Statement) -> VectorField:
    v = evaluate(node, n, r, Q)
    if not isinstance(v, VectorField):
        raise _serr(f"{s.key} must be a vector field", s)
    return v


class _Resolver:
    def __init__(self, doc: Document):
        self.doc = doc
        self.m = Model()

    def need_sig(self, b: Block) -> tuple[int, int]:
        if self.m.n is None:
            raise _serr(f"block {b.kind!r} needs a manifold block before it", b)
        return self.m.n, self.m.r

    def run(self) -> Model:
        handlers = {"manifold": self.manifold, "algebroid": self.algebroid, "q_field": self.q_field,
                    "lie2algebra": self.lie2algebra, "action": self.action,
                    "distribution": self.distribution, "imfoliation": self.imfoliation,
                    "settings": self.settings}
        for b in self.doc.blocks:
            handlers[b.kind](b)
        return self.m

    def manifold(self, b: Block):
        if self.m.n is not None:
            raise _serr("only one manifold block is allowed", b)
        vals = {}
        for s in b.statements:
            _no_index(s)
            if s.key not in ("base", "rank"):
                raise _serr(f"unknown manifold key {s.key!r} (expected base, rank)", s)
            vals[s.key] = _natural(s)
        if set(vals) != {"base", "rank"}:
            raise _serr("manifold needs base and rank", b)
        self.m.n, self.m.r = vals["base"], vals["rank"]

    def algebroid(self, b: Block):
        n, r = self.need_sig(b)
        if self.m.algebroid is not None:
            raise _serr("only one algebroid block is allowed", b)
        c, rho = {}, {}
        for s in b.statements:
            if s.key == "c":
                i, j, k = _int_index(s, 0, 3, (r, r, r))
                if (i, j, k) in c or (j, i, k) in c:
                    raise _serr(f"c[{i + 1},{j + 1},{k + 1}] is given twice (c is antisymmetric)", s)
                c[(i, j, k)] = _base_function(s.value, n, r, s)
            elif s.key == "rho":
                i, a = _int_index(s, 0, 2, (r, n))
                rho[(i, a)] = _base_function(s.value, n, r, s)
            else:
                raise _serr(f"unknown algebroid key {s.key!r} (expected c, rho)", s)
        try:
            self.m.algebroid = LieAlgebroidData.from_entries(n, r, c=c, rho=rho)
        except ValueError as exc:
            raise _serr(str(exc), b) from exc
        self.m.algebroid_name = b.name

    def q_field(self, b: Block):
        n, r = self.need_sig(b)
        if self.m.q_field is not None:
            raise _serr("only one q_field block is allowed", b)
        if len(b.statements) != 1 or b.statements[0].key != "Q":
            raise _serr("q_field holds exactly one statement Q = <vector field>", b)
        s = b.statements[0]
        _no_index(s)
        self.m.q_field = _field(s.value, n, r, None, s)
        self.m.q_name = b.name

    def lie2algebra(self, b: Block):
        dims = {s.key: _natural(s) for s in b.statements if s.key in ("dim_minus1", "dim0")}
        p, q = dims.get("dim_minus1", 0), dims.get("dim0", 0)
        delta, bracket, module = {}, {}, {}
        for s in b.statements:
            if s.key in ("dim_minus1", "dim0"):
                _no_index(s)
            elif s.key == "delta":
                delta[_int_index(s, 0, 2, (p, q))] = _scalar(s)
            elif s.key == "bracket":
                i, j, k = _int_index(s, 0, 3, (q, q, q))
                if (i, j, k) in bracket or (j, i, k) in bracket:
                    raise _serr(f"bracket[{i + 1},{j + 1},{k + 1}] is given twice (the bracket is antisymmetric)", s)
                bracket[(i, j, k)] = _scalar(s)
            elif s.key == "module":
                module[_int_index(s, 0, 3, (q, p, p))] = _scalar(s)
            else:
                raise _serr(f"unknown lie2algebra key {s.key!r} (expected dim_minus1, dim0, delta, bracket, module)", s)
        if b.name in self.m.lie2:
            raise _serr(f"lie2algebra {b.name or '(unnamed)'} is defined twice", b)
        try:
            self.m.lie2[b.name] = StrictLie2Algebra.from_entries(p, q, delta, bracket, module)
        except ValueError as exc:
            raise _serr(str(exc), b) from exc

    def _basis_ref(self, item: str, L: StrictLie2Algebra, s: Statement) -> tuple[str, int]:
        m = re.fullmatch(r"([ew])([0-9]+)", item)
        if not m:
            raise _serr(f"basis elements are written e<i> (degree 0) or w<a> (degree -1), not {item!r}", s)
        k = int(m.group(2))
        bound = L.m0 if m.group(1) == "e" else L.m1
        if not 1 <= k <= bound:
            raise _serr(f"{item} is not a basis element of the Lie 2-algebra", s)
        return m.group(1), k - 1

    def action(self, b: Block):
        n, r = self.need_sig(b)
        Q = self.m.Q
        ref = None
        for s in b.statements:
            if s.key == "L":
                if s.value.kind != "name":
                    raise _serr("L must name a lie2algebra block", s)
                ref = s.value.args[0]
        if ref not in self.m.lie2:
            if ref is None and len(self.m.lie2) == 1:
                ref = next(iter(self.m.lie2))
            else:
                raise _serr(f"unresolved lie2algebra reference {ref!r}" if ref else
                            "action needs L = <lie2algebra name> when there is not exactly one lie2algebra", b)
        L = self.m.lie2[ref]
        zero = VectorField.zero(n, r)
        mu0, mu1, eta = [zero] * L.m0, [zero] * L.m1, {}
        for s in b.statements:
            if s.key == "L":
                continue
            if s.key == "mu":
                if len(s.index) != 1 or len(s.index[0]) != 1:
                    raise _serr("write mu[e<i>] or mu[w<a>]", s)
                kind, k = self._basis_ref(s.index[0][0], L, s)
                (mu0 if kind == "e" else mu1)[k] = _field(s.value, n, r, Q, s)
            elif s.key == "eta":
                if len(s.index) != 1 or len(s.index[0]) != 1 or s.index[0][0].count("^") != 1:
                    raise _serr("write eta[e<i>^e<j>]", s)
                left, right = s.index[0][0].split("^")
                (k1, i), (k2, j) = self._basis_ref(left, L, s), self._basis_ref(right, L, s)
                if k1 != "e" or k2 != "e":
                    raise _serr("eta is defined on pairs of degree 0 elements", s)
                if (i, j) in eta or (j, i) in eta:
                    raise _serr(f"eta[{left}^{right}] is given twice", s)
                eta[(i, j)] = _field(s.value, n, r, Q, s)
            else:
                raise _serr(f"unknown action key {s.key!r} (expected L, mu, eta)", s)
        try:
            phi = Lie2Action(L, n, r, mu0, mu1, eta)
        except ValueError as exc:
            raise _serr(str(exc), b) from exc
        self.m.actions.append(ActionSpec(b.name, ref, phi))

    def distribution(self, b: Block):
        n, r = self.need_sig(b)
        Q = self.m.Q
        gens, labels = [], []
        for s in b.statements:
            if s.key != "gen":
                raise _serr(f"unknown distribution key {s.key!r} (expected gen)", s)
            if s.index:
                if len(s.index) != 1 or len(s.index[0]) != 1:
                    raise _serr("write gen[label] = <vector field>", s)
                label = s.index[0][0]
            else:
                label = f"g{len(gens) + 1}"
            if label in labels:
                raise _serr(f"generator label {label!r} is used twice", s)
            V = _field(s.value, n, r, Q, s)
            if V and not V.is_homogeneous():
                raise _serr("generators must be homogeneous", s)
            gens.append(V)
            labels.append(label)
        self.m.distributions.append(DistributionSpec(b.name, gens, labels))

    def imfoliation(self, b: Block):
        n, r = self.need_sig(b)
        lists: dict[str, list] = {}
        nabla_entries = []
        for s in b.statements:
            if s.key in ("B", "complement", "flat_frame"):
                _no_index(s)
                lists[s.key] = [_section(v, n, r, None, s) for v in s.value]
            elif s.key == "F":
                _no_index(s)
                lists["F"] = [_base_field(v, n, r, s) for v in s.value]
            elif s.key == "nabla":
                nabla_entries.append(s)
            else:
                raise _serr(f"unknown imfoliation key {s.key!r} (expected B, F, complement, nabla, flat_frame)", s)
        B, F = lists.get("B", []), lists.get("F", [])
        explicit = "complement" in lists
        if explicit:
            comp = lists["complement"]
        else:
            idx = greedy_complement(B, r, sample_points(n)[0])
            comp = [std_section(n, r, c) for c in idx]
        m = len(comp)
        if len(B) + m != r:
            raise _serr(f"B and complement must together have {r} sections", b)
        nabla = [[[Poly.zero(n) for _ in range(m)] for _ in range(m)] for _ in F]
        for s in nabla_entries:
            (k,) = _int_index(s, 0, 1, (len(F),))
            i, j = _int_index(s, 1, 2, (m, m))
            nabla[k][i][j] = _base_function(s.value, n, r, s)
        flat = lists.get("flat_frame")
        try:
            T = ClassicalTriple(n, r, tuple(B), tuple(F), tuple(comp), tuple(nabla),
                                tuple(flat) if flat is not None else None)
        except ValueError as exc:
            raise _serr(str(exc), b) from exc
        self.m.imfoliations.append(IMFoliationSpec(b.name, T, explicit))

    def settings(self, b: Block):
        if self.m.settings is not None:
            raise _serr("only one settings block is allowed", b)
        st = ReductionSetting()
        for s in b.statements:
            _no_index(s)
            if s.key == "mode":
                if s.value.kind != "name" or s.value.args[0] not in (POINT_BODY, ADAPTED_CHART):
                    raise _serr(f"mode is {POINT_BODY} or {ADAPTED_CHART}", s)
                st.mode = s.value.args[0]
            elif s.key == "F_coords":
                n, r = self.need_sig(b)
                coords = []
                for v in s.value:
                    if v.kind == "x":
                        k = v.args[0]
                    elif v.kind == "num" and v.args[0].denominator == 1:
                        k = int(v.args[0]) - 1
                    else:
                        raise _serr("F_coords lists coordinates, e.g. [x1, x2] or [1, 2]", s)
                    if not 0 <= k < n:
                        raise _serr(f"coordinate {k + 1} does not exist", s)
                    coords.append(k)
                st.F_coords = tuple(coords)
            elif s.key == "flat_frame":
                n, r = self.need_sig(b)
                st.flat_frame = tuple(_section(v, n, r, None, s) for v in s.value)
            elif s.key == "max_xi_degree":
                st.max_xi_degree = _natural(s)
            elif s.key == "max_base_degree":
                st.max_base_degree = _natural(s)
            else:
                raise _serr(f"unknown settings key {s.key!r}", s)
        self.m.settings = st


def resolve(doc: Document) -> Model:
    return _Resolver(doc).run()


def load(text: str) -> Model:
    return resolve(parse(text))


# ---------------------------------------------------------------------------
# canonical rendering


def _head(kind: str, name: str | None) -> str:
    return f"{kind} {name} {{" if name else f"{kind} {{"


def _section_field(n: int, r: int, s: Sequence[Poly]) -> str:
    return str(VectorField.section(n, r, s))


def _base_vf(n: int, r: int, v: Sequence[Poly]) -> str:
    return str(VectorField.base_field(n, r, v))


def render_manifold(n: int, r: int) -> list[str]:
    return [f"manifold {{ base = {n}; rank = {r} }}"]


def render_algebroid(A: LieAlgebroidData, name: str | None = None) -> list[str]:
    lines = [_head("algebroid", name)]
    for i, j in combinations(range(A.r), 2):
        for k in range(A.r):
            if A.c[i][j][k]:
                lines.append(f"  c[{i + 1},{j + 1},{k + 1}] = {A.c[i][j][k]};")
    for i in range(A.r):
        for a in range(A.n):
            if A.rho[i][a]:
                lines.append(f"  rho[{i + 1},{a + 1}] = {A.rho[i][a]};")
    lines.append("}")
    return lines


def render_lie2(L: StrictLie2Algebra, name: str | None) -> list[str]:
    lines = [_head("lie2algebra", name), f"  dim_minus1 = {L.m1};", f"  dim0 = {L.m0};"]
    for a in range(L.m1):
        for i in range(L.m0):
            if L.delta[a][i]:
                lines.append(f"  delta[{a + 1},{i + 1}] = {format_scalar(L.delta[a][i])};")
    for i, j in combinations(range(L.m0), 2):
        for k in range(L.m0):
            if L.bracket[i][j][k]:
                lines.append(f"  bracket[{i + 1},{j + 1},{k + 1}] = {format_scalar(L.bracket[i][j][k])};")
    for i in range(L.m0):
        for a in range(L.m1):
            for c in range(L.m1):
                if L.module[i][a][c]:
                    lines.append(f"  module[{i + 1},{a + 1},{c + 1}] = {format_scalar(L.module[i][a][c])};")
    lines.append("}")
    return lines


def render_action(item: ActionSpec) -> list[str]:
    phi = item.action
    lines = [_head("action", item.name)]
    if item.algebra is not None:
        lines.append(f"  L = {item.algebra};")
    for a, X in enumerate(phi.mu1):
        if X:
            lines.append(f"  mu[w{a + 1}] = {X};")
    for i, X in enumerate(phi.mu0):
        if X:
            lines.append(f"  mu[e{i + 1}] = {X};")
    for (i, j), X in sorted(phi.eta_pairs.items()):
        if X:
            lines.append(f"  eta[e{i + 1}^e{j + 1}] = {X};")
    lines.append("}")
    return lines


def render_distribution(item: DistributionSpec) -> list[str]:
    lines = [_head("distribution", item.name)]
    for label, g in zip(item.labels, item.generators):
        lines.append(f"  gen[{label}] = {g};")
    lines.append("}")
    return lines


def render_imfoliation(item: IMFoliationSpec) -> list[str]:
    T = item.triple
    n, r = T.n, T.r
    lines = [_head("imfoliation", item.name),
             "  B = [" + ", ".join(_section_field(n, r, s) for s in T.B) + "];",
             "  F = [" + ", ".join(_base_vf(n, r, v) for v in T.F) + "];"]
    if item.explicit_complement:
        lines.append("  complement = [" + ", ".join(_section_field(n, r, s) for s in T.complement) + "];")
    for k, M in enumerate(T.nabla):
        for i, row in enumerate(M):
            for j, p in enumerate(row):
                if p:
                    lines.append(f"  nabla[{k + 1}][{i + 1},{j + 1}] = {p};")
    if T.flat_frame is not None:
        lines.append("  flat_frame = [" + ", ".join(_section_field(n, r, s) for s in T.flat_frame) + "];")
    lines.append("}")
    return lines


def render_settings(st: ReductionSetting, n: int | None, r: int | None) -> list[str]:
    lines = ["settings {"]
    if st.mode is not None:
        lines.append(f"  mode = {st.mode};")
    if st.F_coords is not None:
        lines.append("  F_coords = [" + ", ".join(f"x{k + 1}" for k in st.F_coords) + "];")
    if st.flat_frame is not None:
        lines.append("  flat_frame = [" + ", ".join(_section_field(n, r, s) for s in st.flat_frame) + "];")
    if st.max_xi_degree is not None:
        lines.append(f"  max_xi_degree = {st.max_xi_degree};")
    lines.append(f"  max_base_degree = {st.max_base_degree};")
    lines.append("}")
    return lines


def render(m: Model) -> str:
    lines: list[str] = []
    if m.n is not None:
        lines += render_manifold(m.n, m.r)
    if m.algebroid is not None:
        lines += render_algebroid(m.algebroid, m.algebroid_name)
    if m.q_field is not None:
        lines += [_head("q_field", m.q_name), f"  Q = {m.q_field};", "}"]
    for name, L in m.lie2.items():
        lines += render_lie2(L, name)
    for item in m.actions:
        lines += render_action(item)
    for item in m.distributions:
        lines += render_distribution(item)
    for item in m.imfoliations:
        lines += render_imfoliation(item)
    if m.settings is not None:
        lines += render_settings(m.settings, m.n, m.r)
    return "\n".join(lines) + ("\n" if lines else "")
