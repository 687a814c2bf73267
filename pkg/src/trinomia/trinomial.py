"""Solving ``x**n - x + t = 0`` and its companion equation for ``y = dx/dt``.

Near ``t = 0`` the root with ``x(0) = 0`` is ``t * pFq(...; gamma_n t**(n-1))``
and ``y`` is the generating function of ``C(nk, k)`` in ``z = t**(n-1)``.
All ``n`` roots are available from a simultaneous (Durand-Kerner) iteration,
and for large ``|t|`` from the fixed point ``x = e^{i pi/n} t^{1/n} (1 - x/t)^{1/n}``.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, NamedTuple

import mpmath

from .errors import NonConvergenceError, OutsideDiscError
from .exact import TruncatedSeries, series_substitute_monomial
from .hyper import H_spec, coefficients, evaluate, gamma_n, to_mp, x_spec

__all__ = [
    "TrinomialProblem",
    "RootResult",
    "Radius",
    "radius",
    "x_series",
    "y_series",
    "f_residual",
    "g_residual",
    "solve_principal",
    "y_value",
    "solve_all_branches",
    "solve_large_t",
    "large_t_iterates",
    "branch_sum_expected",
    "DEFAULT_DIGITS",
    "DEFAULT_RHO",
]

DEFAULT_DIGITS = 40
DEFAULT_RHO = 0.95
LARGE_T_FACTOR = 2


@dataclass(frozen=True)
class TrinomialProblem:
    n: int
    t: object = 0

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 2:
            raise ValueError(f"degree n must be an integer >= 2, got {self.n!r}")


@dataclass
class RootResult:
    value: object
    residual: object
    error_bound: object
    method: str  # series | large_t_iteration | oracle
    terms_used: int = 0


class Radius(NamedTuple):
    z0: Fraction   # r_n ** (n-1), exact
    r: object      # r_n as an mpf


def radius(n: int, digits: int = DEFAULT_DIGITS) -> Radius:
    """Convergence radius of the principal series in ``t``."""
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    z0 = 1 / gamma_n(n)
    with mpmath.workdps(digits + 5):
        r = mpmath.root(to_mp(z0), n - 1)
    return Radius(z0, r)


def _default_eps(digits: int):
    return mpmath.mpf(10) ** (-(digits - 10))


def _series_from_z(coeffs, n: int, prefactor: int, K: int) -> TruncatedSeries:
    z_series = TruncatedSeries("z", tuple(coeffs))
    return series_substitute_monomial(z_series, n - 1, prefactor).truncate(K)


def _z_terms(n: int, prefactor: int, K: int) -> int:
    # enough z-coefficients that the substituted order reaches K
    return max(0, (K - prefactor) // (n - 1) + 1)


def x_series(n: int, j: int, K: int) -> TruncatedSeries:
    """``x_{n,j}(t) = x(t)**j`` as an exact series in ``t`` through ``t**K``."""
    prefactor, spec = x_spec(n, j)
    return _series_from_z(coefficients(spec, _z_terms(n, prefactor, K)), n, prefactor, K)


def y_series(n: int, j: int, K: int) -> TruncatedSeries:
    """``y_{n,j}(t) = t**j H_{n,j}(t**(n-1))`` through ``t**K``."""
    return _series_from_z(coefficients(H_spec(n, j), _z_terms(n, j, K)), n, j, K)


def f_residual(n: int, x, t):
    return x**n - x + t


def g_residual(n: int, y, t):
    """``gamma_n t^(n-1) y^n - (y - 1)(y + 1/(n-1))^(n-1)``."""
    g = to_mp(gamma_n(n))
    return g * t ** (n - 1) * y**n - (y - 1) * (y + mpmath.mpf(1) / (n - 1)) ** (n - 1)


def _realify(v, bound):
    if isinstance(v, mpmath.mpc) and abs(v.imag) <= bound:
        return v.real
    return v


def _check_disc(p: TrinomialProblem, t, rho, digits):
    r = radius(p.n, digits).r
    # read a float rho as its decimal literal so that 0.95 means 0.95 exactly
    rho = mpmath.mpf(repr(rho)) if isinstance(rho, float) else to_mp(rho)
    if abs(t) > rho * r:
        raise OutsideDiscError(
            f"|t| = {mpmath.nstr(abs(t), 8)} exceeds {rho} * r_{p.n} = {mpmath.nstr(rho * r, 8)}"
        )


def solve_principal(p: TrinomialProblem, eps=None, *, digits: int = DEFAULT_DIGITS,
                    rho: float = DEFAULT_RHO, max_terms: int | None = None) -> RootResult:
    """Principal root ``x(t)`` (the one with ``x(0) = 0``) from its series."""
    eps = _default_eps(digits) if eps is None else eps
    with mpmath.workdps(digits):
        t = to_mp(p.t)
        _check_disc(p, t, rho, digits)
        if t == 0:
            return RootResult(mpmath.mpf(0), mpmath.mpf(0), mpmath.mpf(0), "series", 1)
        _, spec = x_spec(p.n, 1)
        res = evaluate(spec, t ** (p.n - 1), eps, max_terms=max_terms)
    with mpmath.workdps(max(digits, res.digits)):
        x = t * res.value
        err = abs(t) * res.tail_bound
        x = _realify(x, err)
        residual = abs(f_residual(p.n, x, t))
    return RootResult(x, residual, err, "series", res.terms_used)


def y_value(p: TrinomialProblem, eps=None, *, digits: int = DEFAULT_DIGITS,
            rho: float = DEFAULT_RHO, max_terms: int | None = None) -> RootResult:
    """``y = dx/dt`` on the principal branch; ``residual`` is ``|G_n(y, t)|``."""
    eps = _default_eps(digits) if eps is None else eps
    with mpmath.workdps(digits):
        t = to_mp(p.t)
        _check_disc(p, t, rho, digits)
        res = evaluate(H_spec(p.n, 0), t ** (p.n - 1), eps, max_terms=max_terms)
    with mpmath.workdps(max(digits, res.digits)):
        y = _realify(res.value, res.tail_bound)
        residual = abs(g_residual(p.n, y, t))
    return RootResult(y, residual, res.tail_bound, "series", res.terms_used)


def branch_sum_expected(n: int) -> int:
    """Sum of all roots of ``x**n - x + t`` (Vieta): 1 for n = 2, else 0."""
    return 1 if n == 2 else 0


def solve_all_branches(p: TrinomialProblem, eps=None, *, digits: int = DEFAULT_DIGITS,
                       seed: int = 0, max_iter: int = 2000) -> list[RootResult]:
    """All ``n`` roots by Durand-Kerner iteration, Newton-polished.

    Starting points lie on a slightly perturbed circle of radius
    ``max(1, |t|**(1/n))``; ``seed`` fixes the perturbation.
    """
    n = p.n
    eps = _default_eps(digits) if eps is None else eps
    rng = random.Random(seed)
    with mpmath.workdps(digits + 10):
        t = to_mp(p.t)
        eps = to_mp(eps)
        scale = max(mpmath.mpf(1), abs(t) ** (mpmath.mpf(1) / n))
        xs = []
        for k in range(n):
            angle = 2 * mpmath.pi * (k + 0.25 + 0.1 * rng.random()) / n
            rad = scale * (1 + 0.05 * rng.random())
            xs.append(mpmath.mpc(rad * mpmath.cos(angle), rad * mpmath.sin(angle)))
        tol = mpmath.mpf(10) ** (-(digits + 2)) * scale
        for _ in range(max_iter):
            step = mpmath.mpf(0)
            for i in range(n):
                den = mpmath.mpf(1)
                for k in range(n):
                    if k != i:
                        den *= xs[i] - xs[k]
                if den == 0:
                    den = tol
                delta = f_residual(n, xs[i], t) / den
                xs[i] -= delta
                step = max(step, abs(delta))
            if step <= tol:
                break
        else:
            raise NonConvergenceError(f"Durand-Kerner did not converge in {max_iter} iterations")
        results = []
        for x in xs:
            for _ in range(3):
                d = n * x ** (n - 1) - 1
                if d == 0:
                    break
                x -= f_residual(n, x, t) / d
            results.append(x)
    with mpmath.workdps(digits):
        out = []
        bound = mpmath.mpf(10) ** (-(digits - 5)) * scale
        for x in results:
            x = _realify(+x, bound)
            out.append(RootResult(x, abs(f_residual(n, x, t)), bound, "oracle", 0))
    return out


def large_t_iterates(n: int, t, x0=None) -> Iterator:
    """Iterates of ``x <- e^{i pi/n} t^{1/n} (1 - x/t)^{1/n}`` (principal powers)."""
    lead = mpmath.exp(1j * mpmath.pi / n) * mpmath.root(t, n)
    x = lead if x0 is None else x0
    while True:
        yield x
        x = lead * mpmath.root(1 - x / t, n)


def solve_large_t(p: TrinomialProblem, eps=None, *, digits: int = DEFAULT_DIGITS,
                  threshold: float = LARGE_T_FACTOR, max_iter: int = 500) -> RootResult:
    """One root for large ``|t|`` by fixed-point iteration.

    Requires ``|t| >= threshold * r_n``. Aborts with :class:`NonConvergenceError`
    when successive steps stop shrinking, which signals ``|t|`` is too small
    for the map to contract; use the series or the oracle instead.
    """
    n = p.n
    eps = _default_eps(digits) if eps is None else eps
    with mpmath.workdps(digits + 10):
        t = to_mp(p.t)
        r = radius(n, digits).r
        if abs(t) < threshold * r:
            raise OutsideDiscError(
                f"|t| = {mpmath.nstr(abs(t), 8)} is below {threshold} * r_{n}; use series or oracle")
        target = to_mp(eps) * abs(t) ** (mpmath.mpf(1) / n) / 10
        prev_step = None
        stalls = 0
        it = large_t_iterates(n, t)
        x = next(it)
        for i in range(max_iter):
            x_new = next(it)
            step = abs(x_new - x)
            x = x_new
            if step <= target or step == 0:
                break
            if prev_step is not None and step > 0.95 * prev_step:
                stalls += 1
                if stalls >= 3:
                    raise NonConvergenceError(
                        f"large-t iteration is not contracting at |t| = {mpmath.nstr(abs(t), 8)}; "
                        "use the series or the oracle")
            prev_step = step
        else:
            raise NonConvergenceError(f"large-t iteration did not converge in {max_iter} steps")
    with mpmath.workdps(digits):
        x = +x
        residual = abs(f_residual(n, x, t))
        bound = max(step, mpmath.mpf(10) ** (-(digits - 5)))
        x = _realify(x, bound)
    return RootResult(x, residual, bound, "large_t_iteration", i + 1)

