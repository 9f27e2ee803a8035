"""Homotopy-perturbation expansion for the singular linear operator
L_k[y] = y'' + (k/x) y'.

The scheme embeds a parameter theta on the nonlinearity, expands
y = y0 + theta y1 + theta^2 y2 + ..., solves order by order with the
closed-form inverse of L_k (L_k[x^s] = s(s+k-1) x^{s-2}, so a forcing
monomial c x^m maps to c x^{m+2} / ((m+k+1)(m+2))), and evaluates partial
sums at theta = 1.

Two embeddings are supported:

* THETA_TIMES_F (default): L[y] + theta f(x, y) = 0 with f = F - g taken
  whole, y0 = A (+ Bx when k = 0).  Order equations
  L[y_j] = -[theta^{j-1}] f(x, y(theta)), j >= 1.
* THETA_TIMES_F_KEEP_G: the y-free source g stays in the order-0 problem
  (the "different starting point"): y0 = A (+ Bx) + L_k^{-1}[g], and orders
  j >= 1 are driven by the theta-expansion of F alone.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import ResonantExponent, SingularResidual
from .expressions import eval_expr_series, eval_expr_theta, split_y_free
from .problems import IvpProblem
from .series import Series


class Embedding(enum.Enum):
    THETA_TIMES_F = "theta-f"
    THETA_TIMES_F_KEEP_G = "theta-f-keep-g"


def lk_invert_monomial(k: Fraction, c: Fraction, m: int) -> Series:
    """The unique solution of L_k[u] = c x^m with u(0) = u'(0) = 0."""
    if m < 0:
        raise ValueError("monomial degree must be >= 0")
    k = Fraction(k)
    if m + k + 1 == 0:
        raise ResonantExponent(m, k)
    denom = (m + k + 1) * (m + 2)
    return Series.monomial(Fraction(c) / denom, m + 2)


def lk_invert_series(k: Fraction, r: Series) -> Series:
    """Termwise L_k^{-1}; output truncation is r.trunc + 2."""
    k = Fraction(k)
    out = [Fraction(0), Fraction(0)]
    for m in range(r.trunc + 1):
        if m + k + 1 == 0:
            raise ResonantExponent(m, k)
        out.append(r.coeffs[m] / ((m + k + 1) * (m + 2)))
    return Series(out)


def lk_apply(k: Fraction, s: Series) -> Series:
    """L_k[s] as a series; needs s to have zero degree-1 coefficient if k != 0.

    The (k/x) s' term is expanded as k * sum n a_n x^{n-2}; a nonzero a_1
    with k != 0 would leave a 1/x term outside the ring.
    """
    k = Fraction(k)
    if s.trunc < 2:
        raise ValueError("need truncation >= 2 to apply the operator")
    if k != 0 and s.coeffs[1] != 0:
        raise SingularResidual(
            f"k={k} with nonzero degree-1 coefficient {s.coeffs[1]}"
        )
    out = []
    for n in range(2, s.trunc + 1):
        out.append(s.coeffs[n] * n * (n - 1 + k))
    return Series(out)


@dataclass
class HpmExpansion:
    problem: IvpProblem
    corrections: list[Series]
    trunc: int
    embedding: Embedding = Embedding.THETA_TIMES_F

    @property
    def orders(self) -> int:
        return len(self.corrections) - 1


def _order_zero(p: IvpProblem, trunc: int, embedding: Embedding) -> Series:
    y0 = Series.constant(p.A, trunc)
    if p.k == 0 and p.B != 0:
        y0 = y0 + Series.monomial(p.B, 1, trunc)
    if embedding is Embedding.THETA_TIMES_F_KEEP_G:
        _, g = split_y_free(p.f)
        g_series = eval_expr_series(g, Series.zero(trunc), trunc)
        y0 = y0 + lk_invert_series(p.k, g_series.truncate(trunc - 2))
    return y0


def _drive_expr(p: IvpProblem, embedding: Embedding):
    if embedding is Embedding.THETA_TIMES_F_KEEP_G:
        f_part, _ = split_y_free(p.f)
        return f_part
    return p.f


def hpm_expand(
    p: IvpProblem,
    orders: int,
    trunc: int,
    embedding: Embedding = Embedding.THETA_TIMES_F,
) -> HpmExpansion:
    """Compute corrections y0..y_J at the given x-truncation."""
    if orders < 0:
        raise ValueError("orders must be >= 0")
    if trunc < 2:
        raise ValueError("trunc must be >= 2")
    drive = _drive_expr(p, embedding)
    corrections = [_order_zero(p, trunc, embedding)]
    for j in range(1, orders + 1):
        theta_coeffs = eval_expr_theta(drive, corrections, trunc)
        rhs = theta_coeffs[j - 1]
        correction = lk_invert_series(p.k, (-rhs).truncate(trunc - 2))
        corrections.append(correction)
    return HpmExpansion(problem=p, corrections=corrections, trunc=trunc,
                        embedding=embedding)


def hpm_partial_sum(h: HpmExpansion, j: int) -> Series:
    """y0 + y1 + ... + y_j, i.e. the expansion with theta set to 1."""
    if not 0 <= j <= h.orders:
        raise ValueError(f"order {j} outside 0..{h.orders}")
    total = h.corrections[0]
    for yj in h.corrections[1 : j + 1]:
        total = total + yj
    return total


def hpm_order_residual(h: HpmExpansion, j: int) -> Series:
    """L_k[y_j] plus the right-hand side assigned to order j; zero when the
    order equation was solved exactly (checked up to trunc - 2)."""
    if not 0 <= j <= h.orders:
        raise ValueError(f"order {j} outside 0..{h.orders}")
    p = h.problem
    applied = lk_apply(p.k, h.corrections[j])
    if j == 0:
        if h.embedding is Embedding.THETA_TIMES_F_KEEP_G:
            _, g = split_y_free(p.f)
            g_series = eval_expr_series(g, Series.zero(h.trunc), h.trunc)
            return applied - g_series.truncate(applied.trunc)
        return applied
    drive = _drive_expr(p, h.embedding)
    theta_coeffs = eval_expr_theta(drive, h.corrections[:j], h.trunc)
    rhs = theta_coeffs[j - 1]
    return applied + rhs.truncate(applied.trunc)


@dataclass
class NoiseOrder:
    order: int
    residual_lowest_degree: int | None
    first_diff_degree: int | None


@dataclass
class NoiseReport:
    problem: str
    orders: list[NoiseOrder]
    # degree -> partial-sum coefficient at each order 0..J
    coefficient_trails: dict[int, list[Fraction]] = field(default_factory=dict)


def noise_report(h: HpmExpansion, exact: Series | None = None) -> NoiseReport:
    """Per order: full-equation residual of the partial sum and (when an
    exact solution is supplied) the lowest degree where they disagree."""
    from .taylor import residual_series  # late import: taylor is the oracle side

    entries: list[NoiseOrder] = []
    partial_sums = []
    for j in range(h.orders + 1):
        s = hpm_partial_sum(h, j)
        partial_sums.append(s)
        resid = residual_series(h.problem, s)
        first_diff = None
        if exact is not None:
            diff = s - exact
            first_diff = diff.lowest_nonzero_degree()
        entries.append(
            NoiseOrder(
                order=j,
                residual_lowest_degree=resid.lowest_nonzero_degree(),
                first_diff_degree=first_diff,
            )
        )
    trails: dict[int, list[Fraction]] = {}
    watch = sorted(
        {
            m
            for s in partial_sums
            for m, c in enumerate(s.coeffs)
            if c != 0
        }
    )
    for m in watch:
        trails[m] = [s.coeffs[m] for s in partial_sums]
    return NoiseReport(problem=h.problem.name, orders=entries,
                       coefficient_trails=trails)
