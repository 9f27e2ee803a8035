"""Exception hierarchy shared across the package.

Everything raised on purpose derives from HpmAuditError so the CLI can map
failures to its exit-code contract in one place.
"""

from __future__ import annotations


class HpmAuditError(Exception):
    """Base class for all errors raised by this package."""


class NonzeroConstantTerm(HpmAuditError):
    """exp() of a series whose constant term is not exactly zero.

    Allowing it would force an irrational factor e^{a0} into the otherwise
    exact rational coefficient ring.
    """


class ParseError(HpmAuditError):
    """Bad expression or problem-file syntax; carries a character position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class MissingKey(HpmAuditError):
    """Problem file lacks a required key."""


class InconsistentSlope(HpmAuditError):
    """k != 0 together with B != 0: a nonzero initial slope cannot satisfy
    the singular term at x = 0."""


class UnknownProblem(HpmAuditError):
    """Name does not match any builtin problem."""


class ResonantExponent(HpmAuditError):
    """Inverting the linear operator hit m + k + 1 = 0 at some degree m;
    the solution would need a logarithmic term, which is out of scope."""

    def __init__(self, degree: int, k):
        super().__init__(
            f"resonant exponent: degree {degree} with k={k} needs a log term"
        )
        self.degree = degree


class SingularRecurrence(HpmAuditError):
    """Series recurrence divisor n(n+k-1) vanished for some needed n."""


class SingularResidual(HpmAuditError):
    """Residual of a series with k != 0 and nonzero degree-1 coefficient:
    the (k/x) y' term would leave a 1/x singularity."""


class StartupOutsideRadius(HpmAuditError):
    """Series/numeric handoff point looks unreliable for the startup series."""

    def __init__(self, magnitude: float, x_start: float):
        super().__init__(
            f"startup series tail term has magnitude {magnitude:.3e} at "
            f"x_start={x_start}; move x_start closer to 0 or raise startup_trunc"
        )
        self.magnitude = magnitude


class MaxStepsExceeded(HpmAuditError):
    """Adaptive integrator exhausted its step budget."""


class NonFiniteState(HpmAuditError):
    """Integration state or right-hand side overflowed to inf/nan."""


class OutOfRange(HpmAuditError):
    """Requested sample point outside the valid range."""
