"""Generalized hypergeometric series ``pFq(alphas; betas; gamma*z)``.

Exact coefficient streams, the parameter-shift calculus, the hypergeometric
ODE residual, and arbitrary-precision evaluation with a certified tail bound.
"""
from __future__ import annotations

import math
import os
from collections import Counter
from dataclasses import dataclass, field, replace
from fractions import Fraction

import mpmath

from .errors import BudgetExceededError, OutsideDiscError, ShiftUndefinedError
from .exact import TruncatedSeries, apply_theta, pochhammer

__all__ = [
    "HyperSpec",
    "EvalResult",
    "gamma_n",
    "H_spec",
    "x_spec",
    "cancel_parameters",
    "coefficients",
    "direct_coefficients",
    "stream",
    "derivative_spec",
    "integral_spec",
    "ode_residual",
    "evaluate",
    "max_terms_default",
]

DEFAULT_MAX_TERMS = 100_000
GUARD_DIGITS = 10


def _frac_tuple(values):
    return tuple(Fraction(v) for v in values)


@dataclass(frozen=True)
class HyperSpec:
    """Upper parameters, lower parameters and argument scale of a pFq."""

    alphas: tuple
    betas: tuple
    gamma: Fraction = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "alphas", _frac_tuple(self.alphas))
        object.__setattr__(self, "betas", _frac_tuple(self.betas))
        object.__setattr__(self, "gamma", Fraction(self.gamma))
        for b in self.betas:
            if b <= 0 and b.denominator == 1:
                raise ValueError(f"lower parameter {b} is a nonpositive integer")

    @property
    def p(self) -> int:
        return len(self.alphas)

    @property
    def q(self) -> int:
        return len(self.betas)

    def with_gamma(self, gamma) -> HyperSpec:
        return replace(self, gamma=Fraction(gamma))

    def same_function(self, other: HyperSpec) -> bool:
        """Equality of parameter multisets and scale, ignoring order."""
        return (
            Counter(self.alphas) == Counter(other.alphas)
            and Counter(self.betas) == Counter(other.betas)
            and self.gamma == other.gamma
        )

    def __str__(self):
        a = ", ".join(str(x) for x in sorted(self.alphas))
        b = ", ".join(str(x) for x in sorted(self.betas))
        return f"{self.p}F{self.q}({a}; {b}; {self.gamma}*z)"


def gamma_n(n: int) -> Fraction:
    """Argument scale ``n**n / (n-1)**(n-1)``."""
    return Fraction(n**n, (n - 1) ** (n - 1))


def cancel_parameters(s: HyperSpec) -> HyperSpec:
    """Drop equal upper/lower pairs, one pair per coincidence."""
    betas = list(s.betas)
    alphas = []
    for a in s.alphas:
        if a in betas:
            betas.remove(a)
        else:
            alphas.append(a)
    return HyperSpec(tuple(alphas), tuple(betas), s.gamma)


def H_spec(n: int, j: int = 0, cancel: bool = True) -> HyperSpec:
    """Spec of the generating function ``H_{n,j}(z) = sum C(nk+j, k) z**k``."""
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    if j < 0:
        raise ValueError("j must be nonnegative")
    alphas = [Fraction(j + i, n) for i in range(1, n + 1)]
    betas = [Fraction(j + i, n - 1) for i in range(1, n)]
    spec = HyperSpec(alphas, betas, gamma_n(n))
    return cancel_parameters(spec) if cancel else spec


def x_spec(n: int, j: int = 1, cancel: bool = True) -> tuple[int, HyperSpec]:
    """``(j, spec)`` with ``x_{n,j}(t) = t**j * pFq(spec; gamma_n * t**(n-1))``."""
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    if j < 1:
        raise ValueError("x-family index j must be >= 1")
    alphas = [Fraction(j + i - 1, n) for i in range(1, n + 1)]
    betas = [Fraction(j + i, n - 1) for i in range(1, n)]
    spec = HyperSpec(alphas, betas, gamma_n(n))
    return j, cancel_parameters(spec) if cancel else spec


def coefficients(s: HyperSpec, K: int) -> list[Fraction]:
    """``c_0 .. c_K`` of ``pFq(...; gamma*z)`` from the term-ratio recurrence."""
    out = [Fraction(1)]
    c = Fraction(1)
    for k in range(K):
        num = s.gamma
        for a in s.alphas:
            num *= k + a
        den = Fraction(k + 1)
        for b in s.betas:
            den *= k + b
        c = c * num / den
        out.append(c)
    return out


def direct_coefficients(s: HyperSpec, K: int) -> list[Fraction]:
    """Same stream from the Pochhammer-quotient definition, term by term."""
    out = []
    for k in range(K + 1):
        num = s.gamma**k
        for a in s.alphas:
            num *= pochhammer(a, k)
        den = Fraction(math.factorial(k))
        for b in s.betas:
            den *= pochhammer(b, k)
        out.append(num / den)
    return out


def stream(s: HyperSpec, K: int) -> TruncatedSeries:
    return TruncatedSeries("z", tuple(coefficients(s, K)))


def derivative_spec(s: HyperSpec) -> tuple[Fraction, HyperSpec]:
    """``d/dz pFq(a; b; g z) = mult * pFq(a+1; b+1; g z)``."""
    mult = s.gamma
    for a in s.alphas:
        mult *= a
    for b in s.betas:
        mult /= b
    shifted = HyperSpec(tuple(a + 1 for a in s.alphas), tuple(b + 1 for b in s.betas), s.gamma)
    return mult, shifted


def integral_spec(s: HyperSpec) -> tuple[Fraction, HyperSpec]:
    """Antiderivative (up to a constant) as ``mult * pFq(a-1; b-1; g z)``.

    Raises :class:`ShiftUndefinedError` when a parameter equals 1, since the
    shifted spec would carry a zero parameter.
    """
    if any(a == 1 for a in s.alphas):
        raise ShiftUndefinedError("an upper parameter equals 1; downward shift is not defined")
    if any(b == 1 for b in s.betas):
        raise ShiftUndefinedError("a lower parameter equals 1; downward shift is not defined")
    if s.gamma == 0:
        raise ShiftUndefinedError("zero argument scale")
    num = Fraction(1)
    for b in s.betas:
        num *= b - 1
    den = s.gamma
    for a in s.alphas:
        den *= a - 1
    shifted = HyperSpec(tuple(a - 1 for a in s.alphas), tuple(b - 1 for b in s.betas), s.gamma)
    return num / den, shifted


def ode_residual(s: HyperSpec, K: int, u: TruncatedSeries | None = None) -> TruncatedSeries:
    """Apply the hypergeometric operator in the normalized variable ``w = gamma*z``.

    ``D prod(D + b - 1) u - w prod(D + a) u`` with ``D = w d/dw``, truncated at
    ``K``. ``u`` defaults to the series of ``s`` itself, so the result is the
    zero series for a correct stream.
    """
    if u is None:
        u = stream(s.with_gamma(1), K)
    left = apply_theta(u)
    for b in s.betas:
        left = apply_theta(left) + (b - 1) * left
    right = u
    for a in s.alphas:
        right = apply_theta(right) + a * right
    return (left - right.shift(1)).truncate(K)


# ---------------------------------------------------------------------------
# numeric evaluation
# ---------------------------------------------------------------------------

@dataclass
class EvalResult:
    value: object
    tail_bound: object
    terms_used: int
    digits: int = field(default=0, repr=False)


def max_terms_default() -> int:
    env = os.environ.get("TRINOMIA_MAX_TERMS")
    return int(env) if env else DEFAULT_MAX_TERMS


def to_mp(x):
    """Convert ints, floats, Fractions, complex numbers or strings to mpmath."""
    if isinstance(x, Fraction):
        return mpmath.mpf(x.numerator) / x.denominator
    if isinstance(x, (mpmath.mpf, mpmath.mpc)):
        return +x
    return mpmath.mpmathify(x)


def _digits_for(eps) -> int:
    eps = to_mp(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    return max(1, int(mpmath.ceil(-mpmath.log10(eps))))


def _pairing(s: HyperSpec):
    """Pair upper parameters with lower ones (the implicit k! supplies a 1)."""
    uppers = sorted(s.alphas)
    lowers = sorted(s.betas + (Fraction(1),))
    if len(uppers) > len(lowers):
        return None
    return list(zip(uppers, lowers)), lowers[len(uppers):]


def _ratio_sup(pairs, unmatched, k: int, az):
    """Bound ``sup_{i >= k} |term_{i+1}/term_i|``, or None if not yet applicable.

    Each ``(i+a)/(i+b)`` with positive ``i+a, i+b`` is monotone in ``i`` and
    tends to 1, so its supremum is ``max(value at k, 1)``; each unmatched
    ``1/(i+b)`` is decreasing.
    """
    r = az
    for a, b in pairs:
        if k + a <= 0 or k + b <= 0:
            return None
        r *= max(to_mp(k + a) / to_mp(k + b), 1)
    for b in unmatched:
        if k + b <= 0:
            return None
        r /= to_mp(k + b)
    return r


def _terminates(s: HyperSpec):
    """Index after which every term vanishes (nonpositive integer upper parameter)."""
    stops = [int(-a) for a in s.alphas if a <= 0 and a.denominator == 1]
    return min(stops) if stops else None


def evaluate(s: HyperSpec, z, eps=mpmath.mpf("1e-30"), *, max_terms: int | None = None,
             terms: int | None = None) -> EvalResult:
    """Sum ``pFq(alphas; betas; gamma*z)`` to within ``eps``.

    Parameters
    ----------
    s : HyperSpec
        Series to evaluate; real rational parameters.
    z : number
        Real or complex point with ``|gamma*z| < 1``.
    eps : positive real
        Target bound on the absolute truncation error.
    max_terms : int, optional
        Term budget (default 100000, or ``$TRINOMIA_MAX_TERMS``).
    terms : int, optional
        Sum exactly this many terms instead and report the tail bound at
        that point (``inf`` if no bound applies yet).

    Returns
    -------
    EvalResult
        ``value`` is within ``tail_bound`` of the infinite sum.
    """
    max_terms = max_terms or max_terms_default()
    budget = terms if terms is not None else max_terms
    digits = _digits_for(eps) + GUARD_DIGITS + math.ceil(math.log10(budget + 1))
    pairing = _pairing(s)
    if pairing is None:
        raise ValueError(f"{s} has more upper than lower parameters plus one; the series diverges")
    pairs, unmatched = pairing
    stop = _terminates(s)
    with mpmath.workdps(digits):
        eps = to_mp(eps)
        w = to_mp(s.gamma) * to_mp(z)
        aw = abs(w)
        if not unmatched and aw >= 1 and stop is None:
            raise OutsideDiscError(f"|gamma*z| = {mpmath.nstr(aw, 8)} is not inside the unit disc")
        alphas = [to_mp(a) for a in s.alphas]
        betas = [to_mp(b) for b in s.betas]
        total = mpmath.mpf(0) if not isinstance(w, mpmath.mpc) else mpmath.mpc(0)
        term = mpmath.mpf(1)
        best = mpmath.inf
        k = 0
        while True:
            total += term
            if term == 0 or (stop is not None and k >= stop):
                tail = mpmath.mpf(0)
            else:
                r = _ratio_sup(pairs, unmatched, k, aw)
                tail = abs(term) * r / (1 - r) if r is not None and r < 1 else mpmath.inf
            best = min(best, tail)
            if terms is not None:
                if k + 1 >= terms:
                    return EvalResult(+total, tail, k + 1, digits)
            elif tail <= eps:
                return EvalResult(+total, tail, k + 1, digits)
            elif k + 1 >= max_terms:
                raise BudgetExceededError(
                    f"tail bound {mpmath.nstr(best, 5)} > eps after {k + 1} terms",
                    best_bound=best, terms_used=k + 1)
            num = w
            for a in alphas:
                num *= k + a
            den = mpmath.mpf(k + 1)
            for b in betas:
                den *= k + b
            term = term * num / den
            k += 1
