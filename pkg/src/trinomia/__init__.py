"""Hypergeometric solution of the trinomial equation ``x**n - x + t = 0``."""

from .errors import (
    BranchPointError,
    BudgetExceededError,
    NonConvergenceError,
    OutsideDiscError,
    ShiftUndefinedError,
    TrinomiaError,
)
from .exact import (
    Factorization,
    TruncatedSeries,
    apply_theta,
    binom,
    coeff_c,
    factorize,
    pochhammer,
    series_differentiate,
    series_integrate,
    series_mul,
    series_reciprocal,
    series_substitute_monomial,
)
from .hyper import (
    EvalResult,
    HyperSpec,
    H_spec,
    cancel_parameters,
    coefficients,
    derivative_spec,
    evaluate,
    gamma_n,
    integral_spec,
    ode_residual,
    x_spec,
)
from .trinomial import (
    RootResult,
    TrinomialProblem,
    g_residual,
    radius,
    solve_all_branches,
    solve_large_t,
    solve_principal,
    x_series,
    y_series,
    y_value,
)

__version__ = "0.1.0"
