"""High-accuracy numeric reference solution.

The equation is singular at x = 0 (the k/x coefficient), so integration
starts from a series-powered handoff: the Taylor oracle supplies (y, y') at
x_start, and an adaptive embedded Dormand-Prince 5(4) pair integrates the
first-order system from there.  Every accepted step is recorded; dense
output interpolates each step interval with a cubic Hermite built from the
stored endpoint values and slopes.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

from .errors import (
    MaxStepsExceeded,
    NonFiniteState,
    OutOfRange,
    StartupOutsideRadius,
)
from .expressions import compile_float
from .problems import IvpProblem
from .taylor import taylor_solve


@dataclass
class SolverConfig:
    x_max: float
    x_start: float = 0.5
    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    startup_trunc: int = 30
    max_steps: int = 1_000_000

    def __post_init__(self):
        if not 0.0 < self.x_start < self.x_max:
            raise ValueError(
                f"need 0 < x_start < x_max, got {self.x_start}, {self.x_max}"
            )
        if self.rel_tol <= 0 or self.abs_tol <= 0:
            raise ValueError("tolerances must be positive")
        if self.startup_trunc < 2:
            raise ValueError("startup_trunc must be >= 2")


@dataclass
class Trajectory:
    problem: str
    config: SolverConfig
    xs: list[float] = field(default_factory=list)
    ys: list[float] = field(default_factory=list)
    dys: list[float] = field(default_factory=list)

    @property
    def samples(self) -> list[tuple[float, float, float]]:
        return list(zip(self.xs, self.ys, self.dys))


class StartState(NamedTuple):
    x: float
    y: float
    dy: float
    tail_estimate: float


def series_start_state(p: IvpProblem, cfg: SolverConfig) -> StartState:
    """Evaluate the startup Taylor series and its derivative at x_start.

    The handoff is rejected when the series' own tail estimate at x_start
    (last nonzero kept term; zero for a certified polynomial) exceeds
    rel_tol, which signals that x_start sits outside the reliable range.
    """
    sol = taylor_solve(p, cfg.startup_trunc)
    if sol.terminated:
        tail = 0.0
    else:
        m = sol.series.highest_nonzero_degree()
        tail = 0.0 if m is None else abs(
            float(sol.series.coeffs[m])
        ) * cfg.x_start**m
    if tail > cfg.rel_tol:
        raise StartupOutsideRadius(tail, cfg.x_start)
    y = sol.series.eval(cfg.x_start)
    dy = sol.series.derivative().eval(cfg.x_start)
    return StartState(cfg.x_start, y, dy, tail)


# Dormand-Prince 5(4) tableau; the 7th stage equals the next step's first
# (FSAL), and the propagated solution uses the order-5 weights.
_C = (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0)
_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_ERR = (
    71 / 57600,
    0.0,
    -71 / 16695,
    71 / 1920,
    -17253 / 339200,
    22 / 525,
    -1 / 40,
)

_MIN_FACTOR = 0.2
_MAX_FACTOR = 5.0
_SAFETY = 0.9


def rk_integrate(p: IvpProblem, cfg: SolverConfig) -> Trajectory:
    """Adaptive integration of (y, y') from the series handoff to x_max.

    A step is accepted when the embedded error estimate passes the mixed
    tolerance abs_tol + rel_tol * |y| componentwise (RMS norm).
    """
    f = compile_float(p.f)
    k = float(p.k)

    def rhs(x: float, y: float, v: float) -> tuple[float, float]:
        return v, -(k / x) * v - f(x, y)

    start = series_start_state(p, cfg)
    x, y, v = start.x, start.y, start.dy

    traj = Trajectory(problem=p.name, config=cfg)
    traj.xs.append(x)
    traj.ys.append(y)
    traj.dys.append(v)

    h = min(0.05, (cfg.x_max - cfg.x_start) / 10.0)
    try:
        k1 = rhs(x, y, v)
    except OverflowError as exc:
        raise NonFiniteState(f"right-hand side overflowed at x={x}") from exc
    steps = 0
    while x < cfg.x_max:
        if steps >= cfg.max_steps:
            raise MaxStepsExceeded(
                f"{cfg.max_steps} steps exhausted at x={x:.6g}"
            )
        steps += 1
        clipped = x + h >= cfg.x_max
        if clipped:
            h = cfg.x_max - x
        ky = [k1[0], 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]
        kv = [k1[1], 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]
        finite = True
        try:
            for s in range(1, 7):
                ay = y
                av = v
                for j, a in enumerate(_A[s]):
                    if a:
                        ay += h * a * ky[j]
                        av += h * a * kv[j]
                xs = x + _C[s] * h
                ky[s], kv[s] = rhs(xs, ay, av)
                if not (math.isfinite(ky[s]) and math.isfinite(kv[s])):
                    finite = False
                    break
        except OverflowError:
            finite = False
        if finite:
            # stage 6 state is the order-5 solution (FSAL construction)
            y_new = ay
            v_new = av
            err_y = 0.0
            err_v = 0.0
            for j in range(7):
                e = _ERR[j]
                if e:
                    err_y += e * ky[j]
                    err_v += e * kv[j]
            err_y *= h
            err_v *= h
            sc_y = cfg.abs_tol + cfg.rel_tol * max(abs(y), abs(y_new))
            sc_v = cfg.abs_tol + cfg.rel_tol * max(abs(v), abs(v_new))
            err = math.sqrt(0.5 * ((err_y / sc_y) ** 2 + (err_v / sc_v) ** 2))
            finite = math.isfinite(y_new) and math.isfinite(v_new) and math.isfinite(err)
        if not finite:
            # k1 belongs to the unchanged (x, y, v); just retry smaller
            h *= 0.5
            if h < 1e-15 * max(1.0, abs(x)):
                raise NonFiniteState(
                    f"state or right-hand side not finite near x={x:.6g}"
                )
            continue
        if err <= 1.0:
            x = cfg.x_max if clipped else x + h
            y, v = y_new, v_new
            k1 = (ky[6], kv[6])
            traj.xs.append(x)
            traj.ys.append(y)
            traj.dys.append(v)
            factor = _MAX_FACTOR if err == 0.0 else min(
                _MAX_FACTOR, _SAFETY * err ** -0.2
            )
        else:
            factor = max(_MIN_FACTOR, _SAFETY * err ** -0.2)
        h *= factor
        if h <= 0.0 or not math.isfinite(h):
            raise NonFiniteState(f"step size degenerated near x={x:.6g}")
    return traj


def _hermite_state(t: Trajectory, x: float) -> tuple[float, float]:
    """Interpolated (y, y') at x via the cubic Hermite on the enclosing step."""
    if x < t.xs[0] or x > t.xs[-1]:
        raise OutOfRange(f"x={x} outside [{t.xs[0]}, {t.xs[-1]}]")
    i = bisect_right(t.xs, x) - 1
    if i >= len(t.xs) - 1:
        i = len(t.xs) - 2
    if x == t.xs[i]:
        return t.ys[i], t.dys[i]
    if x == t.xs[i + 1]:
        return t.ys[i + 1], t.dys[i + 1]
    h = t.xs[i + 1] - t.xs[i]
    s = (x - t.xs[i]) / h
    s2 = s * s
    s3 = s2 * s
    y = (
        (2 * s3 - 3 * s2 + 1) * t.ys[i]
        + (s3 - 2 * s2 + s) * h * t.dys[i]
        + (-2 * s3 + 3 * s2) * t.ys[i + 1]
        + (s3 - s2) * h * t.dys[i + 1]
    )
    dy = (
        (6 * s2 - 6 * s) / h * t.ys[i]
        + (3 * s2 - 4 * s + 1) * t.dys[i]
        + (-6 * s2 + 6 * s) / h * t.ys[i + 1]
        + (3 * s2 - 2 * s) * t.dys[i + 1]
    )
    return y, dy


def sample_dense(
    t: Trajectory, xs: Sequence[float]
) -> list[tuple[float, float]]:
    """Cubic Hermite interpolation on the stored step intervals."""
    return [(x, _hermite_state(t, x)[0]) for x in xs]


def sample_dense_state(
    t: Trajectory, xs: Sequence[float]
) -> list[tuple[float, float, float]]:
    """Like sample_dense but also returns the interpolated slope."""
    out = []
    for x in xs:
        y, dy = _hermite_state(t, x)
        out.append((x, y, dy))
    return out


def asymptote_residual(
    t: Trajectory, xs: Sequence[float]
) -> list[tuple[float, float]]:
    """r(x) = y(x) - sqrt(ln(x)/x); defined for x > 1 only."""
    for x in xs:
        if x <= 1.0:
            raise OutOfRange(f"asymptote comparison needs x > 1, got {x}")
    sampled = sample_dense(t, xs)
    return [(x, y - math.sqrt(math.log(x) / x)) for x, y in sampled]


def crossing_count(rs: Sequence[tuple[float, float]]) -> int:
    """Strict sign changes along the residual sequence.

    Exact zeros take the sign of the following sample, so they neither
    create nor break a crossing on their own.
    """
    count = 0
    prev = 0
    for _, r in rs:
        s = 1 if r > 0 else -1 if r < 0 else 0
        if s == 0:
            continue
        if prev != 0 and s != prev:
            count += 1
        prev = s
    return count
