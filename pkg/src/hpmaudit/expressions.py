"""Expression trees for f(x, y) and their evaluation.

The DSL covers exactly what the benchmark problems need: rational constants,
the variables x and y, + - * , unary minus, integer powers, exp(...), and
division by a constant.  Expressions evaluate three ways:

* over the exact series ring (y given as a Series),
* over the bivariate ring of theta-series whose coefficients are x-series
  (y given as a list of corrections),
* as compiled float functions of (x, y) for the numeric integrator, where
  exp is the ordinary float exponential with no constant-term restriction.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .errors import NonzeroConstantTerm, ParseError
from .series import Series


# ---------------------------------------------------------------------------
# Tree nodes
# ---------------------------------------------------------------------------


class Expr:
    """Base class; concrete nodes are frozen dataclasses below."""

    __slots__ = ()


@dataclass(frozen=True)
class Const(Expr):
    value: Fraction

    def __post_init__(self):
        if not isinstance(self.value, Fraction):
            object.__setattr__(self, "value", Fraction(self.value))


@dataclass(frozen=True)
class VarX(Expr):
    pass


@dataclass(frozen=True)
class VarY(Expr):
    pass


@dataclass(frozen=True)
class Add(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Sub(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Mul(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Neg(Expr):
    operand: Expr


@dataclass(frozen=True)
class PowInt(Expr):
    base: Expr
    exponent: int

    def __post_init__(self):
        if not isinstance(self.exponent, int) or self.exponent < 0:
            raise ValueError("PowInt exponent must be a non-negative integer")


@dataclass(frozen=True)
class Exp(Expr):
    operand: Expr


@dataclass(frozen=True)
class DivConst(Expr):
    numerator: Expr
    divisor: Fraction

    def __post_init__(self):
        if not isinstance(self.divisor, Fraction):
            object.__setattr__(self, "divisor", Fraction(self.divisor))
        if self.divisor == 0:
            raise ValueError("DivConst divisor must be nonzero")


# ---------------------------------------------------------------------------
# Parser: tokenizer + precedence climbing
# ---------------------------------------------------------------------------

_TOKEN_RE = re.compile(r"\s*(?:(\d+)|([A-Za-z_]\w*)|(\^|\+|\-|\*|/|\(|\)))")


@dataclass(frozen=True)
class _Token:
    kind: str  # "num", "name", "op", "end"
    text: str
    pos: int


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m or m.end() == pos:
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            bad_at = len(text) - len(stripped)
            raise ParseError(f"bad token {stripped[0]!r}", bad_at)
        if m.group(1) is not None:
            tokens.append(_Token("num", m.group(1), m.start(1)))
        elif m.group(2) is not None:
            tokens.append(_Token("name", m.group(2), m.start(2)))
        else:
            tokens.append(_Token("op", m.group(3), m.start(3)))
        pos = m.end()
    tokens.append(_Token("end", "", len(text)))
    return tokens


def _const_value(e: Expr) -> Fraction | None:
    """Fold a constant subtree to its value, or None if it involves x/y/exp."""
    if isinstance(e, Const):
        return e.value
    if isinstance(e, Neg):
        v = _const_value(e.operand)
        return None if v is None else -v
    if isinstance(e, (Add, Sub, Mul)):
        lv = _const_value(e.left)
        rv = _const_value(e.right)
        if lv is None or rv is None:
            return None
        if isinstance(e, Add):
            return lv + rv
        if isinstance(e, Sub):
            return lv - rv
        return lv * rv
    if isinstance(e, DivConst):
        v = _const_value(e.numerator)
        return None if v is None else v / e.divisor
    if isinstance(e, PowInt):
        v = _const_value(e.base)
        return None if v is None else v**e.exponent
    return None


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> _Token:
        return self.tokens[self.i]

    def advance(self) -> _Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_op(self, op: str):
        tok = self.advance()
        if tok.kind != "op" or tok.text != op:
            raise ParseError(f"expected {op!r}, got {tok.text!r}", tok.pos)

    # precedence: + - (1)  <  * / (2)  <  unary - (3)  <  ^ (4, right-assoc)

    def parse(self) -> Expr:
        e = self.additive()
        tok = self.peek()
        if tok.kind != "end":
            raise ParseError(f"unexpected trailing input {tok.text!r}", tok.pos)
        return e

    def additive(self) -> Expr:
        e = self.multiplicative()
        while True:
            tok = self.peek()
            if tok.kind == "op" and tok.text in "+-":
                self.advance()
                rhs = self.multiplicative()
                e = Add(e, rhs) if tok.text == "+" else Sub(e, rhs)
            else:
                return e

    def multiplicative(self) -> Expr:
        e = self.unary()
        while True:
            tok = self.peek()
            if tok.kind == "op" and tok.text in "*/":
                self.advance()
                rhs = self.unary()
                if tok.text == "*":
                    e = Mul(e, rhs)
                else:
                    divisor = _const_value(rhs)
                    if divisor is None:
                        raise ParseError("divisor must be constant", tok.pos)
                    if divisor == 0:
                        raise ParseError("division by zero", tok.pos)
                    lv = _const_value(e)
                    if lv is not None:
                        e = Const(lv / divisor)
                    else:
                        e = DivConst(e, divisor)
            else:
                return e

    def unary(self) -> Expr:
        tok = self.peek()
        if tok.kind == "op" and tok.text == "-":
            self.advance()
            operand = self.unary()
            if isinstance(operand, Const):
                return Const(-operand.value)
            return Neg(operand)
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        tok = self.peek()
        if tok.kind == "op" and tok.text == "^":
            self.advance()
            exponent = self.exponent_atom()
            return PowInt(base, exponent)
        return base

    def exponent_atom(self) -> int:
        """Exponents must be non-negative integer literals (parens allowed)."""
        tok = self.peek()
        if tok.kind == "op" and tok.text == "(":
            self.advance()
            inner = self.exponent_atom()
            self.expect_op(")")
            return inner
        if tok.kind == "num":
            self.advance()
            value = int(tok.text)
            nxt = self.peek()
            if nxt.kind == "op" and nxt.text == "^":
                # right-associative power tower of integer literals
                self.advance()
                value = value ** self.exponent_atom()
            elif nxt.kind == "op" and nxt.text == "/":
                raise ParseError("non-integer exponent", nxt.pos)
            return value
        if tok.kind == "op" and tok.text == "-":
            raise ParseError("exponent must be non-negative", tok.pos)
        raise ParseError("non-integer exponent", tok.pos)

    def atom(self) -> Expr:
        tok = self.advance()
        if tok.kind == "num":
            return Const(Fraction(int(tok.text)))
        if tok.kind == "name":
            if tok.text == "x":
                return VarX()
            if tok.text == "y":
                return VarY()
            if tok.text == "exp":
                self.expect_op("(")
                inner = self.additive()
                self.expect_op(")")
                return Exp(inner)
            raise ParseError(f"unknown name {tok.text!r}", tok.pos)
        if tok.kind == "op" and tok.text == "(":
            inner = self.additive()
            self.expect_op(")")
            return inner
        raise ParseError(f"unexpected token {tok.text!r}", tok.pos)


def parse_expr(text: str) -> Expr:
    """Parse the f(x, y) DSL; raises ParseError with a character position."""
    return _Parser(text).parse()


# ---------------------------------------------------------------------------
# Formatter (canonical text that reparses to a structurally equal tree)
# ---------------------------------------------------------------------------

_PREC_ADD, _PREC_MUL, _PREC_NEG, _PREC_POW, _PREC_ATOM = 1, 2, 3, 4, 5


def _fmt(e: Expr) -> tuple[str, int]:
    if isinstance(e, Const):
        text = str(e.value)
        return text, (_PREC_ATOM if e.value >= 0 and e.value.denominator == 1
                      else _PREC_MUL if e.value >= 0 else _PREC_NEG - 1)
    if isinstance(e, VarX):
        return "x", _PREC_ATOM
    if isinstance(e, VarY):
        return "y", _PREC_ATOM
    if isinstance(e, Exp):
        inner, _ = _fmt(e.operand)
        return f"exp({inner})", _PREC_ATOM
    if isinstance(e, Add):
        ls, lp = _fmt(e.left)
        rs, rp = _fmt(e.right)
        left = ls if lp >= _PREC_ADD else f"({ls})"
        right = rs if rp > _PREC_ADD else f"({rs})"
        return f"{left} + {right}", _PREC_ADD
    if isinstance(e, Sub):
        ls, lp = _fmt(e.left)
        rs, rp = _fmt(e.right)
        left = ls if lp >= _PREC_ADD else f"({ls})"
        right = rs if rp > _PREC_ADD else f"({rs})"
        return f"{left} - {right}", _PREC_ADD
    if isinstance(e, Mul):
        ls, lp = _fmt(e.left)
        rs, rp = _fmt(e.right)
        left = ls if lp >= _PREC_MUL else f"({ls})"
        right = rs if rp > _PREC_MUL else f"({rs})"
        return f"{left}*{right}", _PREC_MUL
    if isinstance(e, DivConst):
        ls, lp = _fmt(e.numerator)
        left = ls if lp >= _PREC_MUL else f"({ls})"
        d = e.divisor
        right = str(d) if d.denominator == 1 and d >= 0 else f"({d})"
        return f"{left}/{right}", _PREC_MUL
    if isinstance(e, Neg):
        s, p = _fmt(e.operand)
        inner = s if p >= _PREC_NEG else f"({s})"
        return f"-{inner}", _PREC_NEG - 1
    if isinstance(e, PowInt):
        bs, bp = _fmt(e.base)
        base = bs if bp >= _PREC_ATOM else f"({bs})"
        return f"{base}^{e.exponent}", _PREC_POW
    raise TypeError(f"unknown node {type(e).__name__}")


def format_expr(e: Expr) -> str:
    return _fmt(e)[0]


# ---------------------------------------------------------------------------
# Evaluation over the series ring
# ---------------------------------------------------------------------------


def eval_expr_series(e: Expr, y: Series, trunc: int) -> Series:
    """Substitute x -> identity series and y -> the given series.

    ``y`` must be truncated at >= trunc; all arithmetic happens at ``trunc``.
    """
    if y.trunc < trunc:
        raise ValueError(f"y truncated at {y.trunc} < requested {trunc}")
    y = y.truncate(trunc)
    return _eval_series(e, y, trunc)


def _eval_series(e: Expr, y: Series, trunc: int) -> Series:
    if isinstance(e, Const):
        return Series.constant(e.value, trunc)
    if isinstance(e, VarX):
        return Series.x(trunc)
    if isinstance(e, VarY):
        return y
    if isinstance(e, Add):
        return _eval_series(e.left, y, trunc) + _eval_series(e.right, y, trunc)
    if isinstance(e, Sub):
        return _eval_series(e.left, y, trunc) - _eval_series(e.right, y, trunc)
    if isinstance(e, Mul):
        return _eval_series(e.left, y, trunc) * _eval_series(e.right, y, trunc)
    if isinstance(e, Neg):
        return -_eval_series(e.operand, y, trunc)
    if isinstance(e, PowInt):
        return _eval_series(e.base, y, trunc) ** e.exponent
    if isinstance(e, Exp):
        return _eval_series(e.operand, y, trunc).exp()
    if isinstance(e, DivConst):
        return _eval_series(e.numerator, y, trunc).scale(1 / e.divisor)
    raise TypeError(f"unknown node {type(e).__name__}")


# ---------------------------------------------------------------------------
# Evaluation over theta-series (coefficients are x-series)
# ---------------------------------------------------------------------------


class _Theta:
    """Series in theta truncated at order J whose coefficients are x-Series.

    Only what the expression evaluator needs: ring ops, integer powers, and
    exp via the same derivative recurrence as the x-ring, taken in theta.
    """

    __slots__ = ("parts",)

    def __init__(self, parts: list[Series]):
        self.parts = parts

    @classmethod
    def constant(cls, s: Series, order: int) -> "_Theta":
        trunc = s.trunc
        return cls([s] + [Series.zero(trunc) for _ in range(order)])

    @property
    def order(self) -> int:
        return len(self.parts) - 1

    def __add__(self, other: "_Theta") -> "_Theta":
        return _Theta([a + b for a, b in zip(self.parts, other.parts)])

    def __sub__(self, other: "_Theta") -> "_Theta":
        return _Theta([a - b for a, b in zip(self.parts, other.parts)])

    def __neg__(self) -> "_Theta":
        return _Theta([-a for a in self.parts])

    def __mul__(self, other: "_Theta") -> "_Theta":
        J = self.order
        trunc = self.parts[0].trunc
        out = [Series.zero(trunc) for _ in range(J + 1)]
        for i, a in enumerate(self.parts):
            if a.is_zero():
                continue
            for j in range(J + 1 - i):
                b = other.parts[j]
                if not b.is_zero():
                    out[i + j] = out[i + j] + a * b
        return _Theta(out)

    def scale(self, c: Fraction) -> "_Theta":
        return _Theta([a.scale(c) for a in self.parts])

    def pow(self, p: int) -> "_Theta":
        trunc = self.parts[0].trunc
        out = _Theta.constant(Series.constant(1, trunc), self.order)
        for _ in range(p):
            out = out * self
        return out

    def exp(self) -> "_Theta":
        """E_0 = exp(a_0) in the x-ring; m E_m = sum_{i=1..m} i a_i E_{m-i}."""
        J = self.order
        e0 = self.parts[0].exp()  # raises NonzeroConstantTerm if a_00 != 0
        out = [e0] + [Series.zero(e0.trunc) for _ in range(J)]
        for m in range(1, J + 1):
            acc = Series.zero(e0.trunc)
            for i in range(1, m + 1):
                a = self.parts[i]
                if not a.is_zero():
                    acc = acc + a.scale(i) * out[m - i]
            out[m] = acc.scale(Fraction(1, m))
        return _Theta(out)


def eval_expr_theta(
    e: Expr, y: Sequence[Series], trunc: int
) -> list[Series]:
    """Theta-expansion of f(x, sum_j theta^j y_j) through theta^J, J = len(y)-1.

    Each returned entry is the x-series coefficient of one theta power.
    """
    if not y:
        raise ValueError("need at least y0")
    order = len(y) - 1
    for yj in y:
        if yj.trunc < trunc:
            raise ValueError("every correction must be truncated at >= trunc")
    ytheta = _Theta([yj.truncate(trunc) for yj in y])
    result = _eval_theta(e, ytheta, order, trunc)
    return result.parts


def _eval_theta(e: Expr, y: _Theta, order: int, trunc: int) -> _Theta:
    if isinstance(e, Const):
        return _Theta.constant(Series.constant(e.value, trunc), order)
    if isinstance(e, VarX):
        return _Theta.constant(Series.x(trunc), order)
    if isinstance(e, VarY):
        return y
    if isinstance(e, Add):
        return _eval_theta(e.left, y, order, trunc) + _eval_theta(e.right, y, order, trunc)
    if isinstance(e, Sub):
        return _eval_theta(e.left, y, order, trunc) - _eval_theta(e.right, y, order, trunc)
    if isinstance(e, Mul):
        return _eval_theta(e.left, y, order, trunc) * _eval_theta(e.right, y, order, trunc)
    if isinstance(e, Neg):
        return -_eval_theta(e.operand, y, order, trunc)
    if isinstance(e, PowInt):
        return _eval_theta(e.base, y, order, trunc).pow(e.exponent)
    if isinstance(e, Exp):
        return _eval_theta(e.operand, y, order, trunc).exp()
    if isinstance(e, DivConst):
        return _eval_theta(e.numerator, y, order, trunc).scale(1 / e.divisor)
    raise TypeError(f"unknown node {type(e).__name__}")


# ---------------------------------------------------------------------------
# Float evaluation (numeric integrator path; exp unrestricted here)
# ---------------------------------------------------------------------------

FloatFn = Callable[[float, float], float]


def compile_float(e: Expr) -> FloatFn:
    """Compile the tree once into nested closures for fast repeated calls."""
    if isinstance(e, Const):
        v = float(e.value)
        return lambda x, y: v
    if isinstance(e, VarX):
        return lambda x, y: x
    if isinstance(e, VarY):
        return lambda x, y: y
    if isinstance(e, Add):
        f, g = compile_float(e.left), compile_float(e.right)
        return lambda x, y: f(x, y) + g(x, y)
    if isinstance(e, Sub):
        f, g = compile_float(e.left), compile_float(e.right)
        return lambda x, y: f(x, y) - g(x, y)
    if isinstance(e, Mul):
        f, g = compile_float(e.left), compile_float(e.right)
        return lambda x, y: f(x, y) * g(x, y)
    if isinstance(e, Neg):
        f = compile_float(e.operand)
        return lambda x, y: -f(x, y)
    if isinstance(e, PowInt):
        f = compile_float(e.base)
        p = e.exponent
        return lambda x, y: f(x, y) ** p
    if isinstance(e, Exp):
        f = compile_float(e.operand)
        exp = math.exp
        return lambda x, y: exp(f(x, y))
    if isinstance(e, DivConst):
        f = compile_float(e.numerator)
        inv = 1.0 / float(e.divisor)
        return lambda x, y: f(x, y) * inv
    raise TypeError(f"unknown node {type(e).__name__}")


def eval_expr_float(e: Expr, x: float, y: float) -> float:
    return compile_float(e)(x, y)


# ---------------------------------------------------------------------------
# Structure helpers
# ---------------------------------------------------------------------------


def contains_y(e: Expr) -> bool:
    if isinstance(e, VarY):
        return True
    if isinstance(e, (Const, VarX)):
        return False
    if isinstance(e, (Add, Sub, Mul)):
        return contains_y(e.left) or contains_y(e.right)
    if isinstance(e, Neg):
        return contains_y(e.operand)
    if isinstance(e, PowInt):
        return contains_y(e.base)
    if isinstance(e, Exp):
        return contains_y(e.operand)
    if isinstance(e, DivConst):
        return contains_y(e.numerator)
    raise TypeError(f"unknown node {type(e).__name__}")


def _flatten_sum(e: Expr, sign: int, out: list[tuple[int, Expr]]):
    if isinstance(e, Add):
        _flatten_sum(e.left, sign, out)
        _flatten_sum(e.right, sign, out)
    elif isinstance(e, Sub):
        _flatten_sum(e.left, sign, out)
        _flatten_sum(e.right, -sign, out)
    elif isinstance(e, Neg):
        _flatten_sum(e.operand, -sign, out)
    else:
        out.append((sign, e))


def _rebuild_sum(terms: list[tuple[int, Expr]]) -> Expr:
    if not terms:
        return Const(Fraction(0))
    sign, first = terms[0]
    acc: Expr = first if sign > 0 else Neg(first)
    for sign, term in terms[1:]:
        acc = Add(acc, term) if sign > 0 else Sub(acc, term)
    return acc


def split_y_free(e: Expr) -> tuple[Expr, Expr]:
    """Split f = F - g into (F, g) along the top-level additive structure.

    g collects the y-free summands (negated, so f == F - g term by term);
    anything not additively separable stays in F.
    """
    terms: list[tuple[int, Expr]] = []
    _flatten_sum(e, 1, terms)
    y_terms = [(s, t) for s, t in terms if contains_y(t)]
    free_terms = [(-s, t) for s, t in terms if not contains_y(t)]
    return _rebuild_sum(y_terms), _rebuild_sum(free_terms)
