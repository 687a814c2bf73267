"""Exact and numeric checks of the identities satisfied by the x/y families.

Every ``check_*`` returns a :class:`CheckReport`; a failure is a result, not
an exception. Formal checks accept ``perturb=k``, which adds 1 to the k-th
coefficient of the series under test, so each check can be shown to fail.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from importlib import resources

import mpmath

from .errors import BranchPointError
from .exact import (
    TruncatedSeries,
    binom,
    coeff_c,
    format_factored,
    parse_factored,
    series_differentiate,
    series_integrate,
    series_mul,
    series_reciprocal,
)
from .hyper import (
    H_spec,
    HyperSpec,
    cancel_parameters,
    coefficients,
    derivative_spec,
    direct_coefficients,
    gamma_n,
    integral_spec,
    ode_residual,
    stream,
    x_spec,
)
from .trinomial import (
    TrinomialProblem,
    branch_sum_expected,
    g_residual,
    radius,
    solve_all_branches,
    x_series,
    y_series,
)

__all__ = [
    "CheckReport",
    "check_root_identity",
    "check_reciprocal_relation",
    "check_powers",
    "check_derivative_chain",
    "check_moment_expansion",
    "check_stream_product",
    "check_branch_relations",
    "check_coefficient_formulas",
    "check_ode",
    "check_cancellation",
    "check_shift_calculus",
    "regenerate_table",
    "load_fixture",
    "TABLE_FUNCTIONS",
    "TYPOS",
]


@dataclass
class CheckReport:
    name: str
    parameters: dict
    status: str  # "pass" | "fail"
    witness: object = None
    details: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.status not in ("pass", "fail"):
            raise ValueError(f"bad status {self.status!r}")
        if self.status == "fail" and self.witness is None:
            raise ValueError("a failing report must carry a witness")

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_record(self) -> dict:
        return _jsonable(asdict(self))


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, float):
        return obj
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, (mpmath.mpf, mpmath.mpc)):
        return mpmath.nstr(obj, 20)
    return str(obj)


def _report(name, params, first_bad, details=None):
    """Pass iff ``first_bad`` is None; otherwise it is the witness."""
    if first_bad is None:
        return CheckReport(name, params, "pass", None, details or {})
    return CheckReport(name, params, "fail", first_bad, details or {})


def _poke(s: TruncatedSeries, k: int | None) -> TruncatedSeries:
    if k is None:
        return s
    return s.with_coefficient(k, s[k] + 1)


def _first_diff(a: TruncatedSeries, b: TruncatedSeries) -> int | None:
    K = min(a.order, b.order)
    for k in range(K + 1):
        if a[k] != b[k]:
            return k
    return None


def _first_list_diff(a, b) -> int | None:
    for k, (u, v) in enumerate(zip(a, b)):
        if u != v:
            return k
    return None


# ---------------------------------------------------------------------------
# formal identities in t
# ---------------------------------------------------------------------------

def check_root_identity(n: int, K: int, perturb: int | None = None) -> CheckReport:
    """``x**n - x + t == 0`` and ``dx/dt == y`` for the series solutions."""
    x = _poke(x_series(n, 1, K), perturb)
    t = TruncatedSeries.monomial(1, K)
    residual = x**n - x + t
    bad = residual.first_nonzero()
    dx = series_differentiate(x)
    bad_dy = _first_diff(dx, y_series(n, 0, K - 1))
    witness = None
    if bad is not None:
        witness = {"equation": "x^n - x + t", "order": bad}
    elif bad_dy is not None:
        witness = {"equation": "dx/dt - y", "order": bad_dy}
    return _report("root_identity", {"n": n, "K": K}, witness)


def check_reciprocal_relation(n: int, K: int, perturb: int | None = None) -> CheckReport:
    """``(1 - n x**(n-1)) * y == 1``."""
    x = x_series(n, 1, K)
    y = _poke(y_series(n, 0, K), perturb)
    lhs = series_mul(1 - n * x ** (n - 1), y)
    return _report("reciprocal", {"n": n, "K": K}, _first_diff(lhs, TruncatedSeries.constant(1, K)))


def check_powers(n: int, j: int, K: int, perturb: int | None = None) -> CheckReport:
    """``x**j == x_{n,j}`` and ``x**j * y == y_{n,j}``."""
    x = _poke(x_series(n, 1, K), perturb)
    xj = x**j
    witness = None
    bad = _first_diff(xj, x_series(n, j, K))
    if bad is not None:
        witness = {"identity": "x^j = x_{n,j}", "order": bad}
    else:
        bad = _first_diff(series_mul(xj, y_series(n, 0, K)), y_series(n, j, K))
        if bad is not None:
            witness = {"identity": "x^j y = y_{n,j}", "order": bad}
    return _report("powers", {"n": n, "j": j, "K": K}, witness)


def check_derivative_chain(n: int, K: int, perturb: int | None = None) -> CheckReport:
    """Applying ``(1/y) d/dt`` to ``1/y`` n-1 times leaves the constant ``-n!``."""
    inv_y = series_reciprocal(_poke(y_series(n, 0, K), perturb))
    u = inv_y
    for _ in range(n - 1):
        u = series_mul(inv_y, series_differentiate(u))
    target = TruncatedSeries.constant(-math.factorial(n), u.order)
    bad = _first_diff(u, target)
    return _report("derivative_chain", {"n": n, "K": K}, bad, {"constant": u[0], "sound_order": u.order})


def gaussian_moment(i: int, k: int) -> int:
    """``<z^i zbar^k>`` under ``exp(-|z|^2) dz dzbar / pi``."""
    return math.factorial(k) if i == k else 0


def moment_coefficients(n: int, M: int) -> dict:
    """Formal expansion of ``exp(zbar (z+t)^n)`` integrated term by term.

    Term m is ``zbar^m (z+t)^(nm) / m!``; expanding the binomial and applying
    the moment rule leaves ``t``-coefficients keyed by power.
    """
    out: dict[int, Fraction] = {}
    for m in range(M + 1):
        for i in range(n * m + 1):
            mom = gaussian_moment(i, m)
            if mom:
                power = n * m - i
                out[power] = out.get(power, Fraction(0)) + Fraction(binom(n * m, i) * mom, math.factorial(m))
    return out


def check_moment_expansion(n: int, M: int, perturb: int | None = None) -> CheckReport:
    K = (n - 1) * M
    y = _poke(y_series(n, 0, K), perturb)
    coeffs = moment_coefficients(n, M)
    bad = None
    for k in range(K + 1):
        if coeffs.get(k, 0) != y[k]:
            bad = k
            break
    return _report("moment_expansion", {"n": n, "M": M}, bad)


# ---------------------------------------------------------------------------
# products of pFq streams in z
# ---------------------------------------------------------------------------

def _unit_spec(alphas, betas) -> HyperSpec:
    return HyperSpec(alphas, betas, 1)


def _x_params(n, j):
    return ([Fraction(j + i, n) for i in range(n)], [Fraction(j + i, n - 1) for i in range(1, n)])


def _h_params(n, l):
    return ([Fraction(l + i, n) for i in range(1, n + 1)], [Fraction(l + i, n - 1) for i in range(1, n)])


PRODUCT_FORMS = ("xx", "xy")
CORRECTED_READING = "upper (j+l+1)/n.., lower (j+l+1)/(n-1).."


def check_stream_product(n: int, j: int, l: int, K: int, form: str = "xx",
                         perturb: int | None = None) -> CheckReport:
    """Product identities of the x- and y-type streams, as exact series in z.

    ``form="xx"``: X(j) * X(l) == X(j+l).
    ``form="xy"``: X(j) * Y(l) == Y(j+l).

    Streams use unit argument scale, so both sides are compared as
    coefficient sequences in ``z``. For ``"xy"`` the right-hand side is also
    tried under two misprinted parameter lists (upper list starting at
    ``(j+l)/n`` with ``n+1`` entries; lower list starting at
    ``(l+l+1)/(n-1)``); every reading's outcome is listed in ``details``.
    """
    params = {"n": n, "j": j, "l": l, "K": K, "form": form}
    left = stream(_unit_spec(*_x_params(n, j)), K)
    if form == "xx":
        if j < 1 or l < 1:
            raise ValueError("form xx needs j, l >= 1")
        right_factor = stream(_unit_spec(*_x_params(n, l)), K)
        product = _poke(series_mul(left, right_factor), perturb)
        rhs = stream(_unit_spec(*_x_params(n, j + l)), K)
        return _report("stream_product", params, _first_diff(product, rhs))
    if form != "xy":
        raise ValueError(f"form must be one of {PRODUCT_FORMS}")
    if j < 1 or l < 0:
        raise ValueError("form xy needs j >= 1, l >= 0")
    right_factor = stream(_unit_spec(*_h_params(n, l)), K)
    product = _poke(series_mul(left, right_factor), perturb)
    s = j + l
    upper = [Fraction(s + i, n) for i in range(1, n + 1)]
    upper_long = [Fraction(s + i, n) for i in range(0, n + 1)]
    lower = [Fraction(s + i, n - 1) for i in range(1, n)]
    lower_ll = [Fraction(l + l + i, n - 1) for i in range(1, n)]
    readings = {
        CORRECTED_READING: (upper, lower),
        "upper (j+l)/n.. with n+1 entries, lower (j+l+1)/(n-1)..": (upper_long, lower),
        "upper (j+l)/n.. with n+1 entries, lower (l+l+1)/(n-1)..": (upper_long, lower_ll),
    }
    results = {}
    for label, (up, lo) in readings.items():
        bad = _first_diff(product, stream(_unit_spec(up, lo), K))
        results[label] = "pass" if bad is None else f"fail at z^{bad}"
    bad = _first_diff(product, stream(_unit_spec(*readings[CORRECTED_READING]), K))
    return _report("stream_product", params, bad, {"readings": results})


# ---------------------------------------------------------------------------
# hypergeometric property suites
# ---------------------------------------------------------------------------

def check_coefficient_formulas(n: int, j: int, K: int, perturb: int | None = None) -> CheckReport:
    """Recurrence stream == Pochhammer-quotient stream == ``C(nk+j, k)``."""
    spec = H_spec(n, j)
    rec = coefficients(spec, K)
    if perturb is not None:
        rec[perturb] += 1
    direct = direct_coefficients(spec, K)
    binoms = [coeff_c(n, j, k) for k in range(K + 1)]
    witness = None
    bad = _first_list_diff(rec, direct)
    if bad is not None:
        witness = {"pair": "recurrence vs pochhammer", "k": bad}
    else:
        bad = _first_list_diff(rec, binoms)
        if bad is not None:
            witness = {"pair": "recurrence vs binomial", "k": bad}
    return _report("coefficients", {"n": n, "j": j, "K": K}, witness)


def check_ode(spec: HyperSpec, K: int, perturb: int | None = None) -> CheckReport:
    u = _poke(stream(spec.with_gamma(1), K), perturb)
    res = ode_residual(spec, K, u)
    return _report("ode", {"spec": str(spec), "K": K}, res.first_nonzero())


def check_cancellation(spec: HyperSpec, K: int, perturb: int | None = None) -> CheckReport:
    """``cancel_parameters`` does not change the coefficient stream."""
    before = _poke(stream(spec, K), perturb)
    after = stream(cancel_parameters(spec), K)
    return _report("cancellation", {"spec": str(spec), "K": K}, _first_diff(before, after))


def check_shift_calculus(spec: HyperSpec, K: int, perturb: int | None = None) -> CheckReport:
    """Derivative and antiderivative specs agree with term-wise calculus.

    ``mult * stream(shifted)`` must equal the formal derivative of the
    stream; when the downward shift exists, its scaled stream must match the
    formal antiderivative away from the constant term.
    """
    base = _poke(stream(spec, K + 1), perturb)
    mult, up = derivative_spec(spec)
    scaled = stream(up, K) * mult
    witness = None
    bad = _first_diff(scaled, series_differentiate(base))
    if bad is not None:
        witness = {"shift": "derivative", "k": bad}
    else:
        try:
            imult, down = integral_spec(spec)
        except ValueError:
            down = None
        if down is not None:
            anti = stream(down, K + 1) * imult
            formal = series_integrate(base.truncate(K))
            bad = _first_diff(anti.with_coefficient(0, 0), formal)
            if bad is not None:
                witness = {"shift": "integral", "k": bad}
    return _report("shift_calculus", {"spec": str(spec), "K": K}, witness)


# ---------------------------------------------------------------------------
# numeric branch relations
# ---------------------------------------------------------------------------

BRANCH_GUARD = mpmath.mpf("1e-3")


def check_branch_relations(n: int, t, eps=mpmath.mpf("1e-10"), *, digits: int = 40,
                           seed: int = 0) -> CheckReport:
    """All roots: their sum, the sum of the ``y = 1/(1 - n x^(n-1))``, and G_n residuals.

    The root sum is compared with its Vieta value (1 for n = 2, else 0).
    Raises :class:`BranchPointError` when ``|1 - z/z0| < 1e-3``.
    """
    with mpmath.workdps(digits):
        t = mpmath.mpmathify(t) if not isinstance(t, Fraction) else mpmath.mpf(t.numerator) / t.denominator
        eps = mpmath.mpmathify(eps)
        z0 = radius(n, digits).z0
        z = t ** (n - 1)
        closeness = abs(1 - z / (mpmath.mpf(z0.numerator) / z0.denominator))
        if closeness < BRANCH_GUARD:
            raise BranchPointError(f"|1 - z/z0| = {mpmath.nstr(closeness, 5)} < {BRANCH_GUARD}")
        roots = [r.value for r in solve_all_branches(TrinomialProblem(n, t), digits=digits, seed=seed)]
        ys = [1 / (1 - n * x ** (n - 1)) for x in roots]
        xsum = abs(mpmath.fsum(roots) - branch_sum_expected(n))
        ysum = abs(mpmath.fsum(ys))
        worst_g = mpmath.mpf(0)
        g = mpmath.mpf(gamma_n(n).numerator) / gamma_n(n).denominator
        for y in ys:
            scale = max(1, abs(g * z * y**n), abs((y - 1) * (y + mpmath.mpf(1) / (n - 1)) ** (n - 1)))
            worst_g = max(worst_g, abs(g_residual(n, y, t)) / scale)
        details = {"x_sum_error": xsum, "y_sum": ysum, "max_scaled_G": worst_g}
        witness = None
        if xsum > eps:
            witness = {"quantity": "sum x", "value": xsum}
        elif ysum > eps:
            witness = {"quantity": "sum y", "value": ysum}
        elif worst_g > eps:
            witness = {"quantity": "G_n", "value": worst_g}
    return _report("branches", {"n": n, "t": t, "eps": eps}, _jsonable(witness) if witness else None,
                   _jsonable(details))


# ---------------------------------------------------------------------------
# published coefficient tables
# ---------------------------------------------------------------------------

TABLE_FUNCTIONS = {
    2: ("x", "y0", "y1"),
    3: ("x", "y0", "y0inv", "y1", "y2"),
    4: ("x", "y0", "y1", "y2", "y3"),
    5: ("x", "y0", "y1", "y2", "y3", "y4"),
    6: ("x", "y0"),
}

# Mismatches between the printed tables and computed values, each reviewed
# by hand: (n, function, field) -> printed, computed, note.
TYPOS = {
    (6, "y0", "power"): {
        "printed": 6,
        "computed": 5,
        "note": "argument printed as t^6; the listed series is in powers of t^5 = z",
    },
}


@dataclass
class Fixture:
    n: int
    function: str
    header: dict
    rows: list  # (exponent, integer, factored)


def _parse_rational(text: str) -> Fraction:
    num, _, den = text.partition("/")

    def atom(s):
        b, _, e = s.partition("^")
        return int(b) ** int(e or 1)

    return Fraction(atom(num), atom(den) if den else 1)


def load_fixture(n: int, function: str) -> Fixture:
    path = resources.files("trinomia") / "data" / "tables" / f"n{n}_{function}.tsv"
    header, rows = {}, []
    for line in path.read_text(encoding="utf-8").splitlines():
        if not line.strip():
            continue
        if line.startswith("#"):
            for item in line[1:].split(";"):
                k, _, v = item.strip().partition("=")
                header[k] = v
            continue
        e, v, f = line.split("\t")
        rows.append((int(e), int(v), f))
    return Fixture(n, function, header, rows)


def _computed_series(n: int, function: str, K: int) -> TruncatedSeries:
    if function == "x":
        return x_series(n, 1, K)
    if function == "y0inv":
        return series_reciprocal(y_series(n, 0, K))
    return y_series(n, int(function[1:]), K)


def _computed_header(n: int, function: str):
    if function == "x":
        prefactor, spec = x_spec(n, 1)
    else:
        prefactor, spec = int(function[1:]), H_spec(n, int(function[1:]))
    return spec, {"power": n - 1, "prefactor": prefactor}


def _label(function: str) -> str:
    if function == "x":
        return "x(t)"
    if function == "y0inv":
        return "y_0(t)^-1"
    return f"y_{function[1:]}(t)"


def _excused(n, function, field_name, printed, computed) -> bool:
    entry = TYPOS.get((n, function, field_name))
    return entry is not None and entry["printed"] == printed and entry["computed"] == computed


def regenerate_table(n: int) -> tuple[str, CheckReport]:
    """Recompute every published coefficient for degree ``n``.

    Returns the rendered table and a report that fails on the first
    mismatch not listed in :data:`TYPOS`.
    """
    if n not in TABLE_FUNCTIONS:
        raise ValueError(f"tables exist for n in 2..6, not {n}")
    lines = [f"n = {n}"]
    mismatches, excused = [], []
    checked = 0
    for function in TABLE_FUNCTIONS[n]:
        fx = load_fixture(n, function)
        K = max(e for e, _, _ in fx.rows)
        series = _computed_series(n, function, K)
        if fx.header:
            spec, shape = _computed_header(n, function)
            printed_a = sorted(_parse_rational(a) for a in fx.header["alphas"].split(",") if a)
            printed_b = sorted(_parse_rational(b) for b in fx.header["betas"].split(",") if b)
            for field_name, printed, computed in (
                ("alphas", printed_a, sorted(spec.alphas)),
                ("betas", printed_b, sorted(spec.betas)),
                ("gamma", _parse_rational(fx.header["gamma"]), spec.gamma),
                ("power", int(fx.header["power"]), shape["power"]),
                ("prefactor", int(fx.header["prefactor"]), shape["prefactor"]),
            ):
                checked += 1
                if printed != computed:
                    item = (function, field_name, _jsonable(printed), _jsonable(computed))
                    (excused if _excused(n, function, field_name, printed, computed) else mismatches).append(item)
            pre = f"t^{shape['prefactor']} " if shape["prefactor"] else ""
            lines.append(f"{_label(function)} = {pre}{spec.p}F{spec.q}("
                         f"{', '.join(map(str, sorted(spec.alphas)))}; "
                         f"{', '.join(map(str, sorted(spec.betas)))}; {spec.gamma} t^{n - 1})")
        else:
            lines.append(f"{_label(function)}")
        printed_powers = {e for e, _, _ in fx.rows}
        for e, value, factored in fx.rows:
            computed = series[e]
            computed_f = format_factored(int(computed)) if computed.denominator == 1 else str(computed)
            checked += 1
            ok = computed == value and computed_f == factored and parse_factored(factored) == value
            if not ok:
                item = (function, f"t^{e}", factored, computed_f)
                (excused if _excused(n, function, f"t^{e}", factored, computed_f) else mismatches).append(item)
            lines.append(f"  t^{e:<3d} {str(computed):>14}   {computed_f}")
        # terms absent from the printed table must vanish
        for e in range(K + 1):
            if e not in printed_powers and series[e] != 0:
                mismatches.append((function, f"t^{e}", "0", str(series[e])))
    details = {"checked": checked, "excused": excused}
    witness = mismatches[0] if mismatches else None
    report = _report("tables", {"n": n}, _jsonable(witness) if witness else None, _jsonable(details))
    return "\n".join(lines), report
