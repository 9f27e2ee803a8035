"""Truncated formal power series with exact rational coefficients.

A ``Series`` knows its coefficients for degrees 0..trunc and nothing beyond:
coefficients past the truncation degree are *unknown*, not zero.  Mixed-
truncation arithmetic therefore truncates to the shorter operand, and
equality is only meaningful up to the common truncation.  All coefficient
arithmetic runs on ``fractions.Fraction`` — there is no rounding anywhere,
which is what makes "this coefficient is exactly zero" a decidable question.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence, Union

from .errors import NonzeroConstantTerm

Scalar = Union[Fraction, int]


def _frac(value: Scalar) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    raise TypeError(f"exact coefficient expected, got {type(value).__name__}")


class Series:
    """Power series in x, truncated at a fixed degree, over Fraction."""

    __slots__ = ("coeffs",)

    coeffs: tuple[Fraction, ...]

    def __init__(self, coeffs: Iterable[Scalar], trunc: int | None = None):
        """Build a series from coefficients (index m = coefficient of x^m).

        With ``trunc`` given, shorter input is padded with *genuine* zeros up
        to that degree — the caller asserts those coefficients really are
        zero — and longer input is cut down.
        """
        cs = [_frac(c) for c in coeffs]
        if trunc is not None:
            if trunc < 0:
                raise ValueError("truncation degree must be >= 0")
            if len(cs) > trunc + 1:
                cs = cs[: trunc + 1]
            else:
                cs.extend([Fraction(0)] * (trunc + 1 - len(cs)))
        elif not cs:
            raise ValueError("need at least one coefficient or an explicit trunc")
        self.coeffs = tuple(cs)

    # -- constructors ----------------------------------------------------

    @classmethod
    def zero(cls, trunc: int) -> "Series":
        return cls([], trunc=trunc)

    @classmethod
    def constant(cls, c: Scalar, trunc: int) -> "Series":
        return cls([c], trunc=trunc)

    @classmethod
    def x(cls, trunc: int) -> "Series":
        return cls([0, 1], trunc=trunc)

    @classmethod
    def monomial(cls, c: Scalar, m: int, trunc: int | None = None) -> "Series":
        if m < 0:
            raise ValueError("monomial degree must be >= 0")
        if trunc is None:
            trunc = m
        return cls([0] * m + [c], trunc=trunc)

    # -- basic queries ----------------------------------------------------

    @property
    def trunc(self) -> int:
        return len(self.coeffs) - 1

    def coeff(self, m: int) -> Fraction:
        """Coefficient of x^m; degrees beyond the truncation are unknown."""
        if m < 0:
            raise ValueError("negative degree")
        if m > self.trunc:
            raise ValueError(f"coefficient of x^{m} unknown (trunc={self.trunc})")
        return self.coeffs[m]

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def lowest_nonzero_degree(self) -> int | None:
        for m, c in enumerate(self.coeffs):
            if c != 0:
                return m
        return None

    def highest_nonzero_degree(self) -> int | None:
        for m in range(self.trunc, -1, -1):
            if self.coeffs[m] != 0:
                return m
        return None

    def truncate(self, trunc: int) -> "Series":
        """Forget coefficients above ``trunc`` (never invents new ones)."""
        if trunc > self.trunc:
            raise ValueError(
                f"cannot extend truncation {self.trunc} to {trunc}; "
                "unknown coefficients are not zero"
            )
        return Series(self.coeffs[: trunc + 1])

    # -- ring operations --------------------------------------------------

    def __add__(self, other: "Series") -> "Series":
        if not isinstance(other, Series):
            return NotImplemented
        n = min(self.trunc, other.trunc)
        return Series([self.coeffs[m] + other.coeffs[m] for m in range(n + 1)])

    def __sub__(self, other: "Series") -> "Series":
        if not isinstance(other, Series):
            return NotImplemented
        n = min(self.trunc, other.trunc)
        return Series([self.coeffs[m] - other.coeffs[m] for m in range(n + 1)])

    def __neg__(self) -> "Series":
        return Series([-c for c in self.coeffs])

    def __mul__(self, other: "Series") -> "Series":
        if not isinstance(other, Series):
            return NotImplemented
        n = min(self.trunc, other.trunc)
        out = []
        for m in range(n + 1):
            acc = Fraction(0)
            for i in range(m + 1):
                a = self.coeffs[i]
                if a:
                    acc += a * other.coeffs[m - i]
            out.append(acc)
        return Series(out)

    def scale(self, c: Scalar) -> "Series":
        c = _frac(c)
        return Series([c * a for a in self.coeffs])

    def __rmul__(self, c: Scalar) -> "Series":
        if isinstance(c, (int, Fraction)):
            return self.scale(c)
        return NotImplemented

    def __pow__(self, p: int) -> "Series":
        """Non-negative integer power by repeated multiplication."""
        if not isinstance(p, int) or p < 0:
            raise ValueError("series power must be a non-negative integer")
        out = Series.constant(1, self.trunc)
        for _ in range(p):
            out = out * self
        return out

    # -- calculus ----------------------------------------------------------

    def derivative(self) -> "Series":
        """Termwise d/dx; the truncation degree drops by one."""
        if self.trunc == 0:
            raise ValueError("cannot differentiate a series truncated at degree 0")
        return Series([m * self.coeffs[m] for m in range(1, self.trunc + 1)])

    def antiderivative(self) -> "Series":
        """Termwise integral with zero constant; truncation rises by one."""
        out = [Fraction(0)]
        out.extend(self.coeffs[m] / (m + 1) for m in range(self.trunc + 1))
        return Series(out)

    def shift(self, m: int) -> "Series":
        """Multiply by x^m: coefficients move up, low degrees become zero."""
        if m < 0:
            raise ValueError("shift must be >= 0")
        return Series([Fraction(0)] * m + list(self.coeffs))

    def exp(self) -> "Series":
        """Series exponential, requiring a zero constant term.

        Uses the recurrence E' = a'·E, i.e. m·E_m = sum_{i=1..m} i·a_i·E_{m-i},
        which keeps every coefficient rational.
        """
        if self.coeffs[0] != 0:
            raise NonzeroConstantTerm(
                f"exp of series with constant term {self.coeffs[0]} != 0"
            )
        n = self.trunc
        out = [Fraction(1)] + [Fraction(0)] * n
        for m in range(1, n + 1):
            acc = Fraction(0)
            for i in range(1, m + 1):
                a = self.coeffs[i]
                if a:
                    acc += i * a * out[m - i]
            out[m] = acc / m
        return Series(out)

    # -- evaluation and comparison ------------------------------------------

    def eval(self, x: float) -> float:
        """Horner evaluation after float conversion of the coefficients."""
        acc = 0.0
        for c in reversed(self.coeffs):
            acc = acc * x + float(c)
        return acc

    def equal_upto(self, other: "Series", deg: int) -> bool:
        """True iff all coefficients of degree <= deg agree exactly."""
        if deg > self.trunc or deg > other.trunc:
            raise ValueError("comparison degree exceeds a truncation")
        return self.coeffs[: deg + 1] == other.coeffs[: deg + 1]

    def __eq__(self, other: object) -> bool:
        """Equality up to the smaller truncation degree (exact)."""
        if not isinstance(other, Series):
            return NotImplemented
        n = min(self.trunc, other.trunc)
        return self.coeffs[: n + 1] == other.coeffs[: n + 1]

    __hash__ = None  # prefix equality is not hash-compatible

    def __repr__(self) -> str:
        return f"Series({format_series(self)!r}, trunc={self.trunc})"


def format_series(s: Series, max_terms: int | None = None) -> str:
    """Render nonzero terms like ``x^2 + 1/72 x^8``; ``0`` for the zero series."""
    parts: list[str] = []
    shown = 0
    for m, c in enumerate(s.coeffs):
        if c == 0:
            continue
        if max_terms is not None and shown >= max_terms:
            parts.append("...")
            break
        shown += 1
        mag = abs(c)
        if m == 0:
            body = str(mag)
        else:
            xs = "x" if m == 1 else f"x^{m}"
            body = xs if mag == 1 else f"{mag} {xs}"
        if not parts:
            parts.append(body if c > 0 else f"-{body}")
        else:
            parts.append(f"+ {body}" if c > 0 else f"- {body}")
    return " ".join(parts) if parts else "0"


def common_trunc(series: Sequence[Series]) -> int:
    """Smallest truncation degree across a non-empty collection."""
    if not series:
        raise ValueError("no series given")
    return min(s.trunc for s in series)
