"""Order-by-order Taylor series solution of y'' + (k/x) y' + f(x, y) = 0.

Matching powers of x gives the recurrence

    a_n * n * (n + k - 1) = -[x^{n-2}] f(x, y_{<n}),   n >= 2,

with a_0 = A and a_1 = B fixed by the initial conditions.  The coefficient
of x^{n-2} in f can only involve a_m with m < n (every occurrence of y
carries total degree at least its own index), so evaluating f at ring
truncation n-2 on the partial series is exact by construction.

This solver is the ground-truth oracle: it is independent of the
perturbation engine and also certifies exact polynomial solutions.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import SingularRecurrence, SingularResidual
from .expressions import Expr, Exp, Add, Sub, Mul, Neg, PowInt, DivConst, Const, VarX, VarY, eval_expr_series
from .problems import IvpProblem
from .series import Series

DEFAULT_CLOSURE_WINDOW = 10


@dataclass
class TaylorSolution:
    problem: IvpProblem
    series: Series
    terminated: bool
    closure_degree: int | None


def taylor_solve(
    p: IvpProblem, trunc: int, closure_window: int = DEFAULT_CLOSURE_WINDOW
) -> TaylorSolution:
    """Series coefficients through degree ``trunc`` plus closure detection."""
    if trunc < 2:
        raise ValueError("trunc must be >= 2")
    for n in range(2, trunc + 1):
        if n * (n + p.k - 1) == 0:
            raise SingularRecurrence(
                f"recurrence divisor vanishes at n={n} for k={p.k}"
            )
    coeffs: list[Fraction] = [p.A, p.B]
    for n in range(2, trunc + 1):
        partial = Series(coeffs, trunc=n - 2)
        f_series = eval_expr_series(p.f, partial, n - 2)
        rhs = f_series.coeffs[n - 2]
        coeffs.append(-rhs / (n * (n + p.k - 1)))
    series = Series(coeffs)
    closure = _closure_degree(p, series, closure_window)
    return TaylorSolution(
        problem=p,
        series=series,
        terminated=closure is not None,
        closure_degree=closure,
    )


def residual_series(p: IvpProblem, y: Series) -> Series:
    """Full-equation residual y'' + (k/x) y' + f(x, y), exact.

    The singular term is expanded as k * sum n a_n x^{n-2}, which requires
    k * a_1 = 0; otherwise the residual has a 1/x term and is rejected.
    Output truncation is y.trunc - 2.
    """
    if y.trunc < 2:
        raise ValueError("need truncation >= 2 for a residual")
    if p.k != 0 and y.coeffs[1] != 0:
        raise SingularResidual(
            f"k={p.k} with nonzero degree-1 coefficient {y.coeffs[1]}"
        )
    n_out = y.trunc - 2
    linear = [y.coeffs[n] * n * (n - 1 + p.k) for n in range(2, y.trunc + 1)]
    f_series = eval_expr_series(p.f, y, y.trunc)
    return Series(linear) + f_series.truncate(n_out)


def detect_polynomial_closure(t: TaylorSolution, window: int) -> int | None:
    """Smallest degree d with all computed coefficients above d exactly zero,
    a trailing window of at least ``window`` zeros, and a certified zero
    residual for the degree-d polynomial; None otherwise."""
    return _closure_degree(t.problem, t.series, window)


def _closure_degree(p: IvpProblem, series: Series, window: int) -> int | None:
    top = series.highest_nonzero_degree()
    d = 0 if top is None else top
    if series.trunc - d < window:
        return None
    if not _polynomial_is_exact(p, series.coeffs[: d + 1], series.trunc, window):
        return None
    return d


def _degree_bound(e: Expr, dy: int) -> int | None:
    """Max degree f(x, poly) can reach for deg(poly) = dy; None if unbounded."""
    if isinstance(e, Const):
        return 0
    if isinstance(e, VarX):
        return 1
    if isinstance(e, VarY):
        return dy
    if isinstance(e, (Add, Sub)):
        l = _degree_bound(e.left, dy)
        r = _degree_bound(e.right, dy)
        return None if l is None or r is None else max(l, r)
    if isinstance(e, Mul):
        l = _degree_bound(e.left, dy)
        r = _degree_bound(e.right, dy)
        return None if l is None or r is None else l + r
    if isinstance(e, Neg):
        return _degree_bound(e.operand, dy)
    if isinstance(e, PowInt):
        b = _degree_bound(e.base, dy)
        return None if b is None else b * e.exponent
    if isinstance(e, DivConst):
        return _degree_bound(e.numerator, dy)
    if isinstance(e, Exp):
        inner = _degree_bound(e.operand, dy)
        # exp of anything of positive degree is not a polynomial
        return 0 if inner == 0 else None
    raise TypeError(f"unknown node {type(e).__name__}")


def _polynomial_is_exact(
    p: IvpProblem, poly_coeffs, trunc: int, window: int
) -> bool:
    """Exact residual certificate for a candidate polynomial solution.

    Evaluated at an extended truncation: the structural degree bound when f
    is exp-free (which makes the check a complete proof), otherwise a probe
    margin past the known coefficients (exp of a nonzero argument cannot
    close a polynomial, so a nonzero residual term appears quickly).
    """
    d = len(poly_coeffs) - 1
    bound = _degree_bound(p.f, d)
    if bound is not None:
        check_trunc = max(bound, d, 2) + 2
    else:
        check_trunc = max(trunc + window, 2 * d + window, 4)
    poly = Series(list(poly_coeffs), trunc=check_trunc)
    try:
        resid = residual_series(p, poly)
    except SingularResidual:
        return False
    return resid.is_zero()
