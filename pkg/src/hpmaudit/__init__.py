"""hpmaudit: exact-series audit of homotopy-perturbation solutions of
singular second-order initial-value problems y'' + (k/x) y' + f(x, y) = 0."""

__version__ = "0.1.0"

from .errors import (
    HpmAuditError,
    InconsistentSlope,
    MaxStepsExceeded,
    MissingKey,
    NonFiniteState,
    NonzeroConstantTerm,
    OutOfRange,
    ParseError,
    ResonantExponent,
    SingularRecurrence,
    SingularResidual,
    StartupOutsideRadius,
    UnknownProblem,
)
from .expressions import (
    Expr,
    compile_float,
    eval_expr_float,
    eval_expr_series,
    eval_expr_theta,
    format_expr,
    parse_expr,
)
from .hpm import (
    Embedding,
    HpmExpansion,
    NoiseReport,
    hpm_expand,
    hpm_order_residual,
    hpm_partial_sum,
    lk_invert_monomial,
    lk_invert_series,
    noise_report,
)
from .integrate import (
    SolverConfig,
    Trajectory,
    asymptote_residual,
    crossing_count,
    rk_integrate,
    sample_dense,
    sample_dense_state,
    series_start_state,
)
from .problems import (
    BUILTINS,
    IvpProblem,
    builtin,
    builtin_names,
    load_problem,
    parse_problem_file,
)
from .series import Series, format_series
from .taylor import (
    TaylorSolution,
    detect_polynomial_closure,
    residual_series,
    taylor_solve,
)

__all__ = [
    "BUILTINS",
    "Embedding",
    "Expr",
    "HpmAuditError",
    "HpmExpansion",
    "InconsistentSlope",
    "IvpProblem",
    "MaxStepsExceeded",
    "MissingKey",
    "NoiseReport",
    "NonFiniteState",
    "NonzeroConstantTerm",
    "OutOfRange",
    "ParseError",
    "ResonantExponent",
    "Series",
    "SingularRecurrence",
    "SingularResidual",
    "SolverConfig",
    "StartupOutsideRadius",
    "TaylorSolution",
    "Trajectory",
    "UnknownProblem",
    "asymptote_residual",
    "builtin",
    "builtin_names",
    "compile_float",
    "crossing_count",
    "detect_polynomial_closure",
    "eval_expr_float",
    "eval_expr_series",
    "eval_expr_theta",
    "format_expr",
    "format_series",
    "hpm_expand",
    "hpm_order_residual",
    "hpm_partial_sum",
    "lk_invert_monomial",
    "lk_invert_series",
    "load_problem",
    "noise_report",
    "parse_expr",
    "parse_problem_file",
    "residual_series",
    "rk_integrate",
    "sample_dense",
    "sample_dense_state",
    "series_start_state",
    "taylor_solve",
]
