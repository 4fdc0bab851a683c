"""User-defined maps: a small total expression language plus a builtin catalog.

Grammar (whitespace-insensitive)::

    map      := expr (";" expr)*
    expr     := term (("+"|"-") term)*
    term     := factor ("*" factor)*
    factor   := ("-")? atom ("^" INTEGER)?
    atom     := NUMBER | VAR | FUNC "(" expr ")" | "(" expr ")"
    VAR      := "x" INTEGER
    FUNC     := sin | cos | expneg | sqrt | abs | min2 | max2
                (min2/max2 take two comma-separated arguments)

NUMBER is a nonnegative decimal with optional fraction (no exponents).
Unary minus binds tighter than "^", so ``-x1^2`` means ``(-x1)^2``.
Division is deliberately absent and sqrt is totalized as sqrt(max(t, 0)),
so evaluation never faults on [0,1]^n; outputs are clamped into [0,1]
componentwise, which keeps every parseable map usable as a labeling source.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from decimal import Decimal
from typing import Union

from .labeling import MapFn


class MapParseError(ValueError):
    """Base for parse-time failures; carries a character position."""

    def __init__(self, message: str, position: int | None = None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position


class ExprSyntaxError(MapParseError):
    pass


class ArityError(MapParseError):
    pass


class UnknownIdentifier(MapParseError):
    pass


class IndexOutOfRange(MapParseError):
    pass


class ComponentCountMismatch(MapParseError):
    pass


class UnknownBuiltin(ValueError):
    pass


@dataclass(frozen=True)
class Const:
    value: float


@dataclass(frozen=True)
class Var:
    index: int  # 1-based


@dataclass(frozen=True)
class Unary:
    op: str  # neg | sin | cos | expneg | sqrt | abs
    arg: "ExprNode"


@dataclass(frozen=True)
class Binary:
    op: str  # add | sub | mul | min2 | max2
    left: "ExprNode"
    right: "ExprNode"


@dataclass(frozen=True)
class Pow:
    base: "ExprNode"
    exponent: int  # nonnegative


ExprNode = Union[Const, Var, Unary, Binary, Pow]

UNARY_FUNCS = ("sin", "cos", "expneg", "sqrt", "abs")
BINARY_FUNCS = ("min2", "max2")


def eval_expr(node: ExprNode, p: tuple[float, ...]) -> float:
    if isinstance(node, Const):
        return node.value
    if isinstance(node, Var):
        return p[node.index - 1]
    if isinstance(node, Unary):
        v = eval_expr(node.arg, p)
        if node.op == "neg":
            return -v
        if node.op == "sin":
            return math.sin(v)
        if node.op == "cos":
            return math.cos(v)
        if node.op == "expneg":
            return math.exp(-v)
        if node.op == "sqrt":
            return math.sqrt(max(v, 0.0))
        if node.op == "abs":
            return abs(v)
        raise ValueError(f"unknown unary op {node.op!r}")
    if isinstance(node, Binary):
        a = eval_expr(node.left, p)
        b = eval_expr(node.right, p)
        if node.op == "add":
            return a + b
        if node.op == "sub":
            return a - b
        if node.op == "mul":
            return a * b
        if node.op == "min2":
            return min(a, b)
        if node.op == "max2":
            return max(a, b)
        raise ValueError(f"unknown binary op {node.op!r}")
    if isinstance(node, Pow):
        return eval_expr(node.base, p) ** node.exponent
    raise TypeError(f"not an expression node: {node!r}")


@dataclass(frozen=True)
class MapSpec:
    """A parsed map: one expression tree per output component."""

    n: int
    components: tuple[ExprNode, ...]

    def eval(self, p) -> tuple[float, ...]:
        """Componentwise tree evaluation, clamped into [0,1]^n."""
        pt = tuple(float(c) for c in p)
        raw = (eval_expr(c, pt) for c in self.components)
        return tuple(0.0 if v < 0.0 else 1.0 if v > 1.0 else v for v in raw)

    def as_map_fn(self, name: str = "expr") -> MapFn:
        raw = self.components
        return MapFn(
            n=self.n,
            fn=lambda p, _c=raw: [eval_expr(node, p) for node in _c],
            name=name,
            description=format_map(self),
        )


_TOKEN = re.compile(
    r"\s*(?:(?P<number>\d+(?:\.\d+)?)|(?P<ident>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*^();,]))"
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            at = len(text) - len(stripped)
            raise ExprSyntaxError(f"unexpected character {text[at]!r}", at)
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, text: str, n: int):
        self.text = text
        self.n = n
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None, len(self.text))

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def expect_op(self, symbol: str):
        kind, value, pos = self.take()
        if kind != "op" or value != symbol:
            raise ExprSyntaxError(f"expected {symbol!r}, found {value!r}", pos)

    def at_op(self, *symbols: str) -> bool:
        kind, value, _ = self.peek()
        return kind == "op" and value in symbols

    def parse_map(self) -> MapSpec:
        components = [self.parse_expr()]
        while self.at_op(";"):
            self.take()
            components.append(self.parse_expr())
        kind, value, pos = self.peek()
        if kind is not None:
            raise ExprSyntaxError(f"trailing input {value!r}", pos)
        if len(components) != self.n:
            raise ComponentCountMismatch(
                f"map has {len(components)} components, dimension is {self.n}"
            )
        return MapSpec(self.n, tuple(components))

    def parse_expr(self) -> ExprNode:
        node = self.parse_term()
        while self.at_op("+", "-"):
            _, op, _ = self.take()
            node = Binary("add" if op == "+" else "sub", node, self.parse_term())
        return node

    def parse_term(self) -> ExprNode:
        node = self.parse_factor()
        while self.at_op("*"):
            self.take()
            node = Binary("mul", node, self.parse_factor())
        return node

    def parse_factor(self) -> ExprNode:
        negate = False
        if self.at_op("-"):
            self.take()
            negate = True
        node = self.parse_atom()
        if negate:
            node = Unary("neg", node)
        if self.at_op("^"):
            self.take()
            kind, value, pos = self.take()
            if kind != "number" or "." in value:
                raise ExprSyntaxError("exponent must be a nonnegative integer", pos)
            node = Pow(node, int(value))
        return node

    def parse_atom(self) -> ExprNode:
        kind, value, pos = self.take()
        if kind == "number":
            return Const(float(value))
        if kind == "op" and value == "(":
            node = self.parse_expr()
            self.expect_op(")")
            return node
        if kind == "ident":
            if value in UNARY_FUNCS or value in BINARY_FUNCS:
                return self.parse_call(value, pos)
            m = re.fullmatch(r"x(\d+)", value)
            if m:
                index = int(m.group(1))
                if not 1 <= index <= self.n:
                    raise IndexOutOfRange(
                        f"variable x{index} out of range for dimension {self.n}", pos
                    )
                return Var(index)
            raise UnknownIdentifier(f"unknown identifier {value!r}", pos)
        raise ExprSyntaxError(f"expected a number, variable or '(', found {value!r}", pos)

    def parse_call(self, func: str, pos: int) -> ExprNode:
        self.expect_op("(")
        first = self.parse_expr()
        if self.at_op(","):
            if func in UNARY_FUNCS:
                raise ArityError(f"{func} takes one argument", pos)
            self.take()
            second = self.parse_expr()
            self.expect_op(")")
            return Binary(func, first, second)
        if func in BINARY_FUNCS:
            raise ArityError(f"{func} takes two comma-separated arguments", pos)
        self.expect_op(")")
        return Unary(func, first)


def parse(text: str, n: int) -> MapSpec:
    """Parse ``n`` semicolon-separated component expressions."""
    if n < 1:
        raise ValueError(f"dimension must be >= 1, got {n}")
    return _Parser(text, n).parse_map()


# Formatting.  Levels: 1 expr (+/-), 2 term (*), 3 factor (neg, ^), 4 atom.

def _level(node: ExprNode) -> int:
    if isinstance(node, Binary):
        if node.op in ("add", "sub"):
            return 1
        if node.op == "mul":
            return 2
        return 4  # min2/max2 calls are atoms
    if isinstance(node, Unary):
        return 4 if node.op != "neg" else 3
    if isinstance(node, Pow):
        return 3
    return 4


def _fmt(node: ExprNode, floor: int) -> str:
    text = _raw(node)
    return f"({text})" if _level(node) < floor else text


def _raw(node: ExprNode) -> str:
    if isinstance(node, Const):
        return format_number(node.value)
    if isinstance(node, Var):
        return f"x{node.index}"
    if isinstance(node, Unary):
        if node.op == "neg":
            return "-" + _fmt(node.arg, 4)
        return f"{node.op}({_raw(node.arg)})"
    if isinstance(node, Binary):
        if node.op in ("min2", "max2"):
            return f"{node.op}({_raw(node.left)}, {_raw(node.right)})"
        if node.op == "mul":
            return f"{_fmt(node.left, 2)} * {_fmt(node.right, 3)}"
        symbol = "+" if node.op == "add" else "-"
        return f"{_fmt(node.left, 1)} {symbol} {_fmt(node.right, 2)}"
    if isinstance(node, Pow):
        return f"{_fmt(node.base, 4)}^{node.exponent}"
    raise TypeError(f"not an expression node: {node!r}")


def format_number(v: float) -> str:
    """Decimal text for a nonnegative float, grammar-compatible (no exponent)."""
    text = repr(float(v))
    if "e" in text or "E" in text:
        text = format(Decimal(text), "f")
    return text


def format_expr(node: ExprNode) -> str:
    """Grammar-compatible text; reparsing yields a structurally equal tree."""
    return _raw(node)


def format_map(spec: MapSpec) -> str:
    return "; ".join(_raw(c) for c in spec.components)


# Builtin catalog.  Parameterized entries take their constants in the name,
# e.g. "const-0.5,0.5" or "avg-0.8".

DOTTIE = 0.7390851332151607  # cos's fixed point, correct to double precision


def _parse_params(text: str, what: str) -> tuple[float, ...]:
    try:
        values = tuple(float(part) for part in text.split(","))
    except ValueError:
        raise UnknownBuiltin(f"bad parameter list {text!r} for {what}") from None
    if any(not 0.0 <= v <= 1.0 for v in values):
        raise UnknownBuiltin(f"{what} parameters must lie in [0,1], got {text!r}")
    return values


def builtin(name: str) -> MapFn:
    """Catalog of maps with documented fixed points and Lipschitz constants:

    reflect1d        1 - x                 fixed point 1/2, L = 1
    dottie           cos x                 fixed point 0.7390851332..., L = sin 1
    rot90            (x, y) -> (1-y, x)    fixed point (1/2, 1/2), L = 1
    squeeze          x^2                   fixed points 0 and 1, L = 2
    const-<c,...>    constant c            fixed point c, L = 0
    avg-<c,...>      (x + c) / 2           fixed point c, L = 1/2
    """
    if name == "reflect1d":
        return MapFn(1, lambda p: (1.0 - p[0],), name=name,
                     description="1 - x", lipschitz=1.0, fixed_points=((0.5,),))
    if name == "dottie":
        return MapFn(1, lambda p: (math.cos(p[0]),), name=name,
                     description="cos x", lipschitz=math.sin(1.0),
                     fixed_points=((DOTTIE,),))
    if name == "rot90":
        return MapFn(2, lambda p: (1.0 - p[1], p[0]), name=name,
                     description="(1 - y, x)", lipschitz=1.0,
                     fixed_points=((0.5, 0.5),))
    if name == "squeeze":
        return MapFn(1, lambda p: (p[0] * p[0],), name=name,
                     description="x^2", lipschitz=2.0,
                     fixed_points=((0.0,), (1.0,)))
    if name.startswith("const-"):
        c = _parse_params(name[len("const-"):], "const")
        return MapFn(len(c), lambda p, _c=c: _c, name=name,
                     description=f"constant {c}", lipschitz=0.0, fixed_points=(c,))
    if name.startswith("avg-"):
        c = _parse_params(name[len("avg-"):], "avg")
        return MapFn(len(c), lambda p, _c=c: tuple((x + ci) / 2.0 for x, ci in zip(p, _c)),
                     name=name, description=f"midpoint toward {c}",
                     lipschitz=0.5, fixed_points=(c,))
    raise UnknownBuiltin(
        f"unknown builtin {name!r}; available: reflect1d, dottie, rot90, squeeze, "
        f"const-<c,...>, avg-<c,...>"
    )
