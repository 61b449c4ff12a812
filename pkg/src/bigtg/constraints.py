"""A small navigation-constraint language over typed instance graphs.

Constraint documents declare invariants per context node type. The
expression language covers ``self``, navigation along edge types,
``forAll``/``exists``/``size``/``first`` over navigation results, exact
type tests and casts, ``let`` bindings, boolean connectives and integer
comparisons. Invariants are evaluated on every instance of the context
type or one of its subtypes.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Mapping

from .typedgraph import InstanceGraph, TypeGraph, conforms, outgoing

KEYWORDS = frozenset(
    {
        "context",
        "inv",
        "let",
        "and",
        "or",
        "not",
        "implies",
        "forAll",
        "exists",
        "size",
        "first",
        "oclIsTypeOf",
        "oclAsType",
        "self",
        "true",
        "false",
    }
)

INTEGER_TYPE = "integer"


class ConstraintSyntaxError(Exception):
    """A parse failure, carrying the offending line and column."""

    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {message}")
        self.line = line
        self.col = col


class TypeCheckError(Exception):
    """A constraint does not fit the type graph it is evaluated against."""


class EvaluationError(Exception):
    """A well-typed expression hit an undefined case at runtime."""


# ---------------------------------------------------------------------------
# Abstract syntax


@dataclass(frozen=True)
class SelfRef:
    pass


@dataclass(frozen=True)
class VarRef:
    name: str


@dataclass(frozen=True)
class IntLit:
    value: int


@dataclass(frozen=True)
class BoolLit:
    value: bool


@dataclass(frozen=True)
class Nav:
    obj: "Expr"
    edge: str


@dataclass(frozen=True)
class IsTypeOf:
    obj: "Expr"
    type_name: str


@dataclass(frozen=True)
class AsType:
    obj: "Expr"
    type_name: str


@dataclass(frozen=True)
class SizeOp:
    obj: "Expr"


@dataclass(frozen=True)
class FirstOp:
    obj: "Expr"


@dataclass(frozen=True)
class ForAll:
    obj: "Expr"
    var: str
    body: "Expr"


@dataclass(frozen=True)
class Exists:
    obj: "Expr"
    var: str
    body: "Expr"


@dataclass(frozen=True)
class NotOp:
    operand: "Expr"


@dataclass(frozen=True)
class AndOp:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class OrOp:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class ImpliesOp:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Compare:
    op: str  # one of = < <= > >=
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Let:
    name: str
    decl_type: str
    value: "Expr"
    body: "Expr"


Expr = (
    SelfRef
    | VarRef
    | IntLit
    | BoolLit
    | Nav
    | IsTypeOf
    | AsType
    | SizeOp
    | FirstOp
    | ForAll
    | Exists
    | NotOp
    | AndOp
    | OrOp
    | ImpliesOp
    | Compare
    | Let
)


@dataclass(frozen=True)
class Invariant:
    context_type: str
    name: str
    body: Expr


@dataclass(frozen=True)
class ConstraintDoc:
    invariants: tuple[Invariant, ...] = ()


# ---------------------------------------------------------------------------
# Lexer / parser


@dataclass(frozen=True)
class _Token:
    kind: str  # name, keyword, int, op, eof
    value: str
    line: int
    col: int


_TOKEN_RE = re.compile(
    r"""(?P<ws>\s+)
      | (?P<int>\d+)
      | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
      | (?P<op>-->|->|<=|>=|[().|:=<>])
    """,
    re.VERBOSE,
)


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    line, col, pos = 1, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ConstraintSyntaxError(f"unexpected character {text[pos]!r}", line, col)
        lexeme = m.group(0)
        if m.lastgroup == "int":
            tokens.append(_Token("int", lexeme, line, col))
        elif m.lastgroup == "name":
            kind = "keyword" if lexeme in KEYWORDS else "name"
            tokens.append(_Token(kind, lexeme, line, col))
        elif m.lastgroup == "op":
            value = "->" if lexeme == "-->" else lexeme
            tokens.append(_Token("op", value, line, col))
        newlines = lexeme.count("\n")
        if newlines:
            line += newlines
            col = len(lexeme) - lexeme.rfind("\n")
        else:
            col += len(lexeme)
        pos = m.end()
    tokens.append(_Token("eof", "", line, col))
    return tokens


class _Parser:
    def __init__(self, tokens: list[_Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def advance(self) -> _Token:
        tok = self.tokens[self.pos]
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def error(self, message: str) -> ConstraintSyntaxError:
        tok = self.peek()
        return ConstraintSyntaxError(message, tok.line, tok.col)

    def expect_op(self, op: str) -> None:
        tok = self.peek()
        if tok.kind != "op" or tok.value != op:
            raise self.error(f"expected {op!r}")
        self.advance()

    def expect_keyword(self, kw: str) -> None:
        tok = self.peek()
        if tok.kind != "keyword" or tok.value != kw:
            raise self.error(f"expected keyword {kw!r}")
        self.advance()

    def expect_name(self, what: str) -> str:
        tok = self.peek()
        if tok.kind != "name":
            raise self.error(f"expected {what}")
        self.advance()
        return tok.value

    def at_keyword(self, kw: str) -> bool:
        tok = self.peek()
        return tok.kind == "keyword" and tok.value == kw

    def at_op(self, op: str) -> bool:
        tok = self.peek()
        return tok.kind == "op" and tok.value == op

    def parse_doc(self) -> ConstraintDoc:
        invariants: list[Invariant] = []
        while not self.peek().kind == "eof":
            self.expect_keyword("context")
            context = self.expect_name("a context type name")
            while self.at_keyword("inv"):
                self.advance()
                name = self.expect_name("an invariant name")
                self.expect_op(":")
                body = self.parse_expr()
                invariants.append(Invariant(context, name, body))
        return ConstraintDoc(tuple(invariants))

    def parse_expr(self) -> Expr:
        if self.at_keyword("let"):
            self.advance()
            name = self.expect_name("a binding name")
            self.expect_op(":")
            decl = self.expect_name("a type name")
            self.expect_op("=")
            value = self.parse_implies()
            body = self.parse_expr()
            return Let(name, decl, value, body)
        return self.parse_implies()

    def parse_implies(self) -> Expr:
        left = self.parse_or()
        if self.at_keyword("implies"):
            self.advance()
            return ImpliesOp(left, self.parse_implies())
        return left

    def parse_or(self) -> Expr:
        left = self.parse_and()
        while self.at_keyword("or"):
            self.advance()
            left = OrOp(left, self.parse_and())
        return left

    def parse_and(self) -> Expr:
        left = self.parse_unary()
        while self.at_keyword("and"):
            self.advance()
            left = AndOp(left, self.parse_unary())
        return left

    def parse_unary(self) -> Expr:
        if self.at_keyword("not"):
            self.advance()
            return NotOp(self.parse_unary())
        return self.parse_comparison()

    def parse_comparison(self) -> Expr:
        left = self.parse_postfix()
        tok = self.peek()
        if tok.kind == "op" and tok.value in ("=", "<", "<=", ">", ">="):
            self.advance()
            return Compare(tok.value, left, self.parse_postfix())
        return left

    def parse_postfix(self) -> Expr:
        expr = self.parse_primary()
        while True:
            if self.at_op("."):
                self.advance()
                tok = self.peek()
                if tok.kind == "keyword" and tok.value in ("oclIsTypeOf", "oclAsType"):
                    self.advance()
                    self.expect_op("(")
                    type_name = self.expect_name("a type name")
                    self.expect_op(")")
                    cls = IsTypeOf if tok.value == "oclIsTypeOf" else AsType
                    expr = cls(expr, type_name)
                else:
                    expr = Nav(expr, self.expect_name("an edge type name"))
            elif self.at_op("->"):
                self.advance()
                tok = self.peek()
                if tok.kind == "keyword" and tok.value in ("forAll", "exists"):
                    self.advance()
                    self.expect_op("(")
                    var = self.expect_name("an iterator variable")
                    self.expect_op("|")
                    body = self.parse_expr()
                    self.expect_op(")")
                    cls = ForAll if tok.value == "forAll" else Exists
                    expr = cls(expr, var, body)
                elif tok.kind == "keyword" and tok.value in ("size", "first"):
                    self.advance()
                    self.expect_op("(")
                    self.expect_op(")")
                    expr = SizeOp(expr) if tok.value == "size" else FirstOp(expr)
                else:
                    raise self.error("expected a collection operation")
            else:
                return expr

    def parse_primary(self) -> Expr:
        tok = self.peek()
        if tok.kind == "keyword" and tok.value == "self":
            self.advance()
            return SelfRef()
        if tok.kind == "keyword" and tok.value in ("true", "false"):
            self.advance()
            return BoolLit(tok.value == "true")
        if tok.kind == "int":
            self.advance()
            return IntLit(int(tok.value))
        if tok.kind == "name":
            self.advance()
            return VarRef(tok.value)
        if tok.kind == "op" and tok.value == "(":
            self.advance()
            inner = self.parse_expr()
            self.expect_op(")")
            return inner
        raise self.error("expected an expression")


def parse_constraints(text: str) -> ConstraintDoc:
    """Parse a constraint document; errors carry line and column."""
    return _Parser(_tokenize(text)).parse_doc()


# ---------------------------------------------------------------------------
# Printer

_PREC_LET = 0
_PREC_IMPLIES = 1
_PREC_OR = 2
_PREC_AND = 3
_PREC_NOT = 4
_PREC_CMP = 5
_PREC_POSTFIX = 6


def _fmt(expr: Expr, parent: int) -> str:
    def wrap(text: str, prec: int) -> str:
        return f"({text})" if prec < parent else text

    if isinstance(expr, SelfRef):
        return "self"
    if isinstance(expr, VarRef):
        return expr.name
    if isinstance(expr, IntLit):
        return str(expr.value)
    if isinstance(expr, BoolLit):
        return "true" if expr.value else "false"
    if isinstance(expr, Nav):
        return wrap(f"{_fmt(expr.obj, _PREC_POSTFIX)}.{expr.edge}", _PREC_POSTFIX)
    if isinstance(expr, IsTypeOf):
        return wrap(f"{_fmt(expr.obj, _PREC_POSTFIX)}.oclIsTypeOf({expr.type_name})", _PREC_POSTFIX)
    if isinstance(expr, AsType):
        return wrap(f"{_fmt(expr.obj, _PREC_POSTFIX)}.oclAsType({expr.type_name})", _PREC_POSTFIX)
    if isinstance(expr, SizeOp):
        return wrap(f"{_fmt(expr.obj, _PREC_POSTFIX)}->size()", _PREC_POSTFIX)
    if isinstance(expr, FirstOp):
        return wrap(f"{_fmt(expr.obj, _PREC_POSTFIX)}->first()", _PREC_POSTFIX)
    if isinstance(expr, ForAll):
        return wrap(
            f"{_fmt(expr.obj, _PREC_POSTFIX)}->forAll({expr.var} | {_fmt(expr.body, _PREC_LET)})",
            _PREC_POSTFIX,
        )
    if isinstance(expr, Exists):
        return wrap(
            f"{_fmt(expr.obj, _PREC_POSTFIX)}->exists({expr.var} | {_fmt(expr.body, _PREC_LET)})",
            _PREC_POSTFIX,
        )
    if isinstance(expr, NotOp):
        return wrap(f"not {_fmt(expr.operand, _PREC_NOT)}", _PREC_NOT)
    if isinstance(expr, AndOp):
        return wrap(f"{_fmt(expr.left, _PREC_AND)} and {_fmt(expr.right, _PREC_AND + 1)}", _PREC_AND)
    if isinstance(expr, OrOp):
        return wrap(f"{_fmt(expr.left, _PREC_OR)} or {_fmt(expr.right, _PREC_OR + 1)}", _PREC_OR)
    if isinstance(expr, ImpliesOp):
        return wrap(
            f"{_fmt(expr.left, _PREC_IMPLIES + 1)} implies {_fmt(expr.right, _PREC_IMPLIES)}",
            _PREC_IMPLIES,
        )
    if isinstance(expr, Compare):
        return wrap(
            f"{_fmt(expr.left, _PREC_POSTFIX)} {expr.op} {_fmt(expr.right, _PREC_POSTFIX)}",
            _PREC_CMP,
        )
    if isinstance(expr, Let):
        return wrap(
            f"let {expr.name} : {expr.decl_type} = {_fmt(expr.value, _PREC_IMPLIES)} {_fmt(expr.body, _PREC_LET)}",
            _PREC_LET,
        )
    raise TypeError(f"unknown expression node {expr!r}")


def format_constraints(doc: ConstraintDoc) -> str:
    """Render a document so that reparsing yields an equal AST."""
    lines: list[str] = []
    current_context: str | None = None
    for inv in doc.invariants:
        if inv.context_type != current_context:
            lines.append(f"context {inv.context_type}")
            current_context = inv.context_type
        lines.append(f"  inv {inv.name}:")
        lines.append(f"    {_fmt(inv.body, _PREC_LET)}")
    return "\n".join(lines) + ("\n" if lines else "")


# ---------------------------------------------------------------------------
# Static type check

_INT = ("int",)
_BOOL = ("bool",)


def _check_expr(expr: Expr, env: Mapping[str, tuple], tg: TypeGraph) -> tuple:
    if isinstance(expr, SelfRef):
        return env["self"]
    if isinstance(expr, VarRef):
        if expr.name not in env:
            raise TypeCheckError(f"unknown variable {expr.name!r}")
        return env[expr.name]
    if isinstance(expr, IntLit):
        return _INT
    if isinstance(expr, BoolLit):
        return _BOOL
    if isinstance(expr, Nav):
        ot = _check_expr(expr.obj, env, tg)
        if ot[0] != "obj":
            raise TypeCheckError(f"navigation {expr.edge!r} over a non-object")
        if expr.edge not in tg.edge_types:
            raise TypeCheckError(f"unknown edge type {expr.edge!r}")
        if not conforms(tg, ot[1], tg.graph.src[expr.edge]):
            raise TypeCheckError(f"edge type {expr.edge!r} not applicable to {ot[1]!r}")
        target = tg.graph.tgt[expr.edge]
        upper = tg.mult[expr.edge].ub if expr.edge in tg.mult else None
        return ("obj", target) if upper == 1 else ("coll", target)
    if isinstance(expr, (IsTypeOf, AsType)):
        ot = _check_expr(expr.obj, env, tg)
        if ot[0] != "obj":
            raise TypeCheckError("type test or cast over a non-object")
        if expr.type_name not in tg.node_types:
            raise TypeCheckError(f"unknown type name {expr.type_name!r}")
        return _BOOL if isinstance(expr, IsTypeOf) else ("obj", expr.type_name)
    if isinstance(expr, SizeOp):
        if _check_expr(expr.obj, env, tg)[0] != "coll":
            raise TypeCheckError("size() over a non-collection")
        return _INT
    if isinstance(expr, FirstOp):
        ot = _check_expr(expr.obj, env, tg)
        if ot[0] != "coll":
            raise TypeCheckError("first() over a non-collection")
        return ("obj", ot[1])
    if isinstance(expr, (ForAll, Exists)):
        ot = _check_expr(expr.obj, env, tg)
        if ot[0] != "coll":
            raise TypeCheckError("iteration over a non-collection")
        inner = dict(env)
        inner[expr.var] = ("obj", ot[1])
        if _check_expr(expr.body, inner, tg) != _BOOL:
            raise TypeCheckError("iteration body must be boolean")
        return _BOOL
    if isinstance(expr, NotOp):
        if _check_expr(expr.operand, env, tg) != _BOOL:
            raise TypeCheckError("'not' needs a boolean operand")
        return _BOOL
    if isinstance(expr, (AndOp, OrOp, ImpliesOp)):
        for side in (expr.left, expr.right):
            if _check_expr(side, env, tg) != _BOOL:
                raise TypeCheckError("boolean connective over non-boolean operand")
        return _BOOL
    if isinstance(expr, Compare):
        for side in (expr.left, expr.right):
            if _check_expr(side, env, tg) != _INT:
                raise TypeCheckError(f"comparison {expr.op!r} needs integer operands")
        return _BOOL
    if isinstance(expr, Let):
        vt = _check_expr(expr.value, env, tg)
        if expr.decl_type == INTEGER_TYPE:
            if vt != _INT:
                raise TypeCheckError(f"let {expr.name!r} declared integer but bound to non-integer")
            bound = _INT
        else:
            if expr.decl_type not in tg.node_types:
                raise TypeCheckError(f"unknown type name {expr.decl_type!r}")
            if vt[0] != "obj" or not conforms(tg, vt[1], expr.decl_type):
                raise TypeCheckError(f"let {expr.name!r} binding does not conform to {expr.decl_type!r}")
            bound = ("obj", expr.decl_type)
        inner = dict(env)
        inner[expr.name] = bound
        return _check_expr(expr.body, inner, tg)
    raise TypeError(f"unknown expression node {expr!r}")


def typecheck(doc: ConstraintDoc, tg: TypeGraph) -> None:
    """Raise :class:`TypeCheckError` if the document does not fit ``tg``."""
    for inv in doc.invariants:
        if inv.context_type not in tg.node_types:
            raise TypeCheckError(f"unknown context type {inv.context_type!r} in {inv.name}")
        if _check_expr(inv.body, {"self": ("obj", inv.context_type)}, tg) != _BOOL:
            raise TypeCheckError(f"invariant {inv.name} is not a boolean expression")


# ---------------------------------------------------------------------------
# Evaluation

_EMPTY: tuple = ()


def _render(value: object) -> str:
    if isinstance(value, tuple):
        return "{" + ", ".join(value) + "}"
    return str(value)


def _eval(expr: Expr, env: dict[str, object], g: InstanceGraph, tg: TypeGraph, trace: list[str]) -> object:
    if isinstance(expr, SelfRef):
        return env["self"]
    if isinstance(expr, VarRef):
        return env[expr.name]
    if isinstance(expr, IntLit):
        return expr.value
    if isinstance(expr, BoolLit):
        return expr.value
    if isinstance(expr, Nav):
        source = _eval(expr.obj, env, g, tg, trace)
        if source == _EMPTY:
            return _EMPTY
        targets = sorted({g.graph.tgt[e] for e in outgoing(g, source, expr.edge)})
        upper = tg.mult[expr.edge].ub if expr.edge in tg.mult else None
        trace.append(f"{source}.{expr.edge} = {_render(tuple(targets))}")
        if upper == 1:
            if len(targets) > 1:
                raise EvaluationError(f"navigation {expr.edge!r} from {source} hit {len(targets)} targets")
            return targets[0] if targets else _EMPTY
        return tuple(targets)
    if isinstance(expr, IsTypeOf):
        value = _eval(expr.obj, env, g, tg, trace)
        if value == _EMPTY:
            raise EvaluationError("type test on an empty value")
        return g.node_types.get(value) == expr.type_name
    if isinstance(expr, AsType):
        value = _eval(expr.obj, env, g, tg, trace)
        if value == _EMPTY:
            raise EvaluationError("cast of an empty value")
        actual = g.node_types.get(value)
        if actual != expr.type_name and not conforms(tg, actual, expr.type_name):
            raise EvaluationError(f"cannot cast {value} ({actual!r}) to {expr.type_name!r}")
        return value
    if isinstance(expr, SizeOp):
        return len(_eval(expr.obj, env, g, tg, trace))
    if isinstance(expr, FirstOp):
        coll = _eval(expr.obj, env, g, tg, trace)
        if not coll:
            raise EvaluationError("first() on an empty collection")
        return coll[0]
    if isinstance(expr, ForAll):
        coll = _eval(expr.obj, env, g, tg, trace)
        for item in coll:
            inner = dict(env)
            inner[expr.var] = item
            if not _eval(expr.body, inner, g, tg, trace):
                trace.append(f"forAll({expr.var}) fails at {item}")
                return False
        return True
    if isinstance(expr, Exists):
        coll = _eval(expr.obj, env, g, tg, trace)
        for item in coll:
            inner = dict(env)
            inner[expr.var] = item
            if _eval(expr.body, inner, g, tg, trace):
                return True
        trace.append(f"exists({expr.var}) found no witness in {_render(tuple(coll))}")
        return False
    if isinstance(expr, NotOp):
        return not _eval(expr.operand, env, g, tg, trace)
    if isinstance(expr, AndOp):
        return bool(_eval(expr.left, env, g, tg, trace)) and bool(_eval(expr.right, env, g, tg, trace))
    if isinstance(expr, OrOp):
        return bool(_eval(expr.left, env, g, tg, trace)) or bool(_eval(expr.right, env, g, tg, trace))
    if isinstance(expr, ImpliesOp):
        if not _eval(expr.left, env, g, tg, trace):
            return True
        return bool(_eval(expr.right, env, g, tg, trace))
    if isinstance(expr, Compare):
        left = _eval(expr.left, env, g, tg, trace)
        right = _eval(expr.right, env, g, tg, trace)
        if not isinstance(left, int) or not isinstance(right, int):
            raise EvaluationError(f"comparison {expr.op!r} on non-integers")
        if expr.op == "=":
            return left == right
        if expr.op == "<":
            return left < right
        if expr.op == "<=":
            return left <= right
        if expr.op == ">":
            return left > right
        return left >= right
    if isinstance(expr, Let):
        inner = dict(env)
        inner[expr.name] = _eval(expr.value, env, g, tg, trace)
        return _eval(expr.body, inner, g, tg, trace)
    raise TypeError(f"unknown expression node {expr!r}")


@dataclass(frozen=True)
class InvariantCheck:
    """Verdict of one invariant on one context instance."""

    invariant: str
    context_type: str
    node: str
    passed: bool
    trace: tuple[str, ...] = ()


@dataclass(frozen=True)
class CheckResult:
    checks: tuple[InvariantCheck, ...] = ()

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[InvariantCheck]:
        return [c for c in self.checks if not c.passed]


def evaluate(doc: ConstraintDoc, g: InstanceGraph, tg: TypeGraph) -> CheckResult:
    """Evaluate every invariant on every instance of its context type
    (or a subtype). Failed checks keep their navigation trace."""
    typecheck(doc, tg)
    checks: list[InvariantCheck] = []
    for inv in doc.invariants:
        instances = sorted(
            n
            for n in g.graph.nodes
            if g.node_types.get(n) in tg.node_types
            and conforms(tg, g.node_types[n], inv.context_type)
        )
        for n in instances:
            trace: list[str] = []
            passed = bool(_eval(inv.body, {"self": n}, g, tg, trace))
            checks.append(
                InvariantCheck(inv.name, inv.context_type, n, passed, () if passed else tuple(trace))
            )
    return CheckResult(tuple(checks))
