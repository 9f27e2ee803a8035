"""Problem statements: y'' + (k/x) y' + f(x, y) = 0, y(0)=A, y'(0)=B.

The singular coefficient is restricted to k/x (k rational, possibly 0), and
the right-hand side g is folded into f = F - g.  Five builtin problems ship:
the four benchmark equations, with the first one in two variants because its
printed right-hand side and its claimed exact solution disagree (substituting
x^4 - x^3 into the printed equation leaves a residual of exactly -x^4).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .errors import InconsistentSlope, MissingKey, ParseError, UnknownProblem
from .expressions import Expr, parse_expr


@dataclass(frozen=True)
class IvpProblem:
    name: str
    k: Fraction
    f: Expr
    A: Fraction
    B: Fraction

    def __post_init__(self):
        for field in ("k", "A", "B"):
            value = getattr(self, field)
            if not isinstance(value, Fraction):
                object.__setattr__(self, field, Fraction(value))
        if self.k != 0 and self.B != 0:
            raise InconsistentSlope(
                f"problem {self.name!r}: k={self.k} != 0 requires B=0, got B={self.B}"
            )


def _mk(name: str, k: int, f: str) -> IvpProblem:
    return IvpProblem(name=name, k=Fraction(k), f=parse_expr(f),
                      A=Fraction(0), B=Fraction(0))


BUILTINS: dict[str, IvpProblem] = {
    p.name: p
    for p in [
        _mk("ex1_corrected", 8, "x*y - (x^5 - x^4 + 44*x^2 - 30*x)"),
        _mk("ex1_literal", 8, "x*y - (x^5 + 44*x^2 - 30*x)"),
        _mk("ex2", 2, "y - (6 + 12*x + x^2 + x^3)"),
        _mk("ex3", 2, "y^3 - (6 + x^6)"),
        _mk("ex4", 2, "exp(x*y^2) - (x + 1)"),
    ]
}

_ALIASES = {"ex1": "ex1_corrected"}


def builtin(name: str) -> IvpProblem:
    """Look up a builtin problem; ``ex1`` resolves to ``ex1_corrected``."""
    key = _ALIASES.get(name, name)
    try:
        return BUILTINS[key]
    except KeyError:
        known = ", ".join(sorted(set(BUILTINS) | set(_ALIASES)))
        raise UnknownProblem(f"unknown problem {name!r} (known: {known})") from None


def builtin_names() -> list[str]:
    return sorted(BUILTINS)


_RATIONAL_RE = re.compile(r"^[+-]?\d+(/\d+)?$")


def parse_rational(text: str) -> Fraction:
    text = text.strip()
    if not _RATIONAL_RE.match(text):
        raise ParseError(f"not a rational literal: {text!r}", 0)
    return Fraction(text)


_REQUIRED_KEYS = ("name", "k", "f", "A", "B")


def parse_problem_file(text: str) -> IvpProblem:
    """Parse the line-oriented problem format.

    ``key = value`` lines with keys name, k, f, A, B; '#' starts a comment;
    blank lines are ignored.  All five keys are required.
    """
    values: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParseError(f"line {lineno}: expected 'key = value'", 0)
        key, _, value = line.partition("=")
        key = key.strip()
        if key not in _REQUIRED_KEYS:
            raise ParseError(f"line {lineno}: unknown key {key!r}", 0)
        if key in values:
            raise ParseError(f"line {lineno}: duplicate key {key!r}", 0)
        values[key] = value.strip()
    for key in _REQUIRED_KEYS:
        if key not in values:
            raise MissingKey(f"problem file is missing key {key!r}")
    return IvpProblem(
        name=values["name"],
        k=parse_rational(values["k"]),
        f=parse_expr(values["f"]),
        A=parse_rational(values["A"]),
        B=parse_rational(values["B"]),
    )


def load_problem(spec: str) -> IvpProblem:
    """Resolve a CLI problem argument: builtin name first, then file path."""
    key = _ALIASES.get(spec, spec)
    if key in BUILTINS:
        return BUILTINS[key]
    import os

    if os.path.exists(spec):
        with open(spec, "r", encoding="utf-8") as fh:
            return parse_problem_file(fh.read())
    raise UnknownProblem(
        f"unknown problem {spec!r}: not a builtin and not an existing file"
    )
