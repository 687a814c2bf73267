"""Acceptance criteria, one test each, at the stated tolerances.

Each criterion prints a single PASS/FAIL line: at the end of a pytest run
(terminal summary) or directly when run as ``python3 tests/test_acceptance.py``.
"""
import random
import time

import mpmath
import pytest

from trinomia import verify as V
from trinomia.hyper import H_spec, x_spec
from trinomia.trinomial import (
    TrinomialProblem,
    branch_sum_expected,
    f_residual,
    g_residual,
    radius,
    solve_all_branches,
    solve_large_t,
    solve_principal,
    y_value,
)

try:
    from conftest import ACCEPTANCE_RESULTS
except ImportError:  # run as a script
    ACCEPTANCE_RESULTS = {}


def record(number, title, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] {number:2d}. {title}: {detail}"
    ACCEPTANCE_RESULTS[number] = line
    return line


def timed(fn):
    start = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - start


# ---------------------------------------------------------------------------

def criterion_1():
    reports, secs = timed(lambda: [V.regenerate_table(n)[1] for n in range(2, 7)])
    failed = [r.parameters["n"] for r in reports if not r.passed]
    checked = sum(r.details["checked"] for r in reports)
    excused = sum(len(r.details["excused"]) for r in reports)
    documented = all(e["note"] and e["printed"] != e["computed"] for e in V.TYPOS.values())
    ok = not failed and secs <= 10 and documented
    return ok, f"{checked} items for n=2..6, {excused} documented typo(s), failed n={failed}, {secs:.2f}s"


def criterion_2():
    reports, secs = timed(lambda: [V.check_root_identity(n, 60) for n in range(2, 7)])
    ok = all(r.passed for r in reports) and secs <= 30
    return ok, f"x^n - x + t == 0 through t^60, n=2..6, {secs:.2f}s"


def criterion_3():
    reports = []
    for n in range(2, 6):
        reports.append(V.check_reciprocal_relation(n, 40))
        reports += [V.check_powers(n, j, 40) for j in range(2, 5)]
    bad = [(r.name, r.parameters) for r in reports if not r.passed]
    return not bad, f"{len(reports)} exact checks at K=40, failures={bad}"


def criterion_4():
    constants = [V.check_derivative_chain(n, 40) for n in range(2, 6)]
    values = [r.details["constant"] for r in constants]
    ok = all(r.passed for r in constants) and values == [-2, -6, -24, -120]
    return ok, f"constants {[str(v) for v in values]}"


def criterion_5():
    reports = [V.check_moment_expansion(n, 12) for n in range(2, 6)]
    return all(r.passed for r in reports), "moment expansion equals C(nm, m) for n=2..5, m<=12"


def criterion_6():
    reports = []
    for n in range(2, 6):
        for j in (1, 2):
            reports += [V.check_stream_product(n, j, l, 20, form="xx") for l in (1, 2)]
            reports += [V.check_stream_product(n, j, l, 20, form="xy") for l in (0, 1, 2)]
    bad = [r.parameters for r in reports if not r.passed]
    return not bad, f"{len(reports)} stream products through z^20, failures={bad}"


def criterion_7():
    worst_f = worst_g = mpmath.mpf(0)
    slowest = 0.0
    with mpmath.workdps(40):
        for n in range(2, 7):
            p = TrinomialProblem(n, radius(n, 40).r / 2)
            (xr, yr), secs = timed(lambda: (solve_principal(p, digits=40), y_value(p, digits=40)))
            worst_f = max(worst_f, abs(f_residual(n, xr.value, p.t)))
            worst_g = max(worst_g, abs(g_residual(n, yr.value, p.t)))
            slowest = max(slowest, secs)
        ok = worst_f <= mpmath.mpf("1e-25") and worst_g <= mpmath.mpf("1e-25") and slowest <= 1
    return ok, (f"max|F|={mpmath.nstr(worst_f, 3)}, max|G|={mpmath.nstr(worst_g, 3)}, "
                f"slowest solve {slowest:.3f}s")


def criterion_8():
    rng = random.Random(8)
    worst = mpmath.mpf(0)
    with mpmath.workdps(50):
        for _ in range(20):
            t = mpmath.mpf(0.2) * mpmath.sqrt(rng.random()) * mpmath.expjpi(2 * rng.random())
            x = solve_principal(TrinomialProblem(2, t), mpmath.mpf("1e-35"), digits=50).value
            worst = max(worst, abs(x - (1 - mpmath.sqrt(1 - 4 * t)) / 2))
        ok = worst <= mpmath.mpf("1e-30")
    return ok, f"max deviation from (1 - sqrt(1-4t))/2 over 20 t: {mpmath.nstr(worst, 3)}"


def criterion_9():
    rng = random.Random(9)
    worst_sum = worst_res = worst_ysum = mpmath.mpf(0)
    tested = skipped = 0
    with mpmath.workdps(40):
        for i in range(100):
            n = 2 + i % 5
            r = radius(n, 40)
            t = r.r * (0.1 + 2.9 * rng.random()) * mpmath.expjpi(2 * rng.random())
            z0 = mpmath.mpf(r.z0.numerator) / r.z0.denominator
            if abs(1 - t ** (n - 1) / z0) < V.BRANCH_GUARD:
                skipped += 1
                continue
            roots = solve_all_branches(TrinomialProblem(n, t), digits=40, seed=i)
            xs = [rr.value for rr in roots]
            worst_sum = max(worst_sum, abs(mpmath.fsum(xs) - branch_sum_expected(n)))
            worst_res = max(worst_res, max(abs(f_residual(n, x, t)) for x in xs))
            worst_ysum = max(worst_ysum, abs(mpmath.fsum(1 / (1 - n * x ** (n - 1)) for x in xs)))
            tested += 1
        ok = (worst_sum <= mpmath.mpf("1e-10") and worst_res <= mpmath.mpf("1e-12")
              and worst_ysum <= mpmath.mpf("1e-8"))
    return ok, (f"{tested} samples ({skipped} guarded): |sum x - vieta|={mpmath.nstr(worst_sum, 3)}, "
                f"max residual={mpmath.nstr(worst_res, 3)}, |sum y|={mpmath.nstr(worst_ysum, 3)}")


def criterion_10():
    slopes = {}
    pts = [mpmath.mpf(v) for v in ("0.99", "0.995", "0.9975")]
    with mpmath.workdps(40):
        for n in range(3, 7):
            r = radius(n, 40).r
            ys = [y_value(TrinomialProblem(n, f * r), mpmath.mpf("1e-20"), rho=1).value for f in pts]
            slopes[n] = [float(mpmath.log(ys[k + 1] / ys[k]) / mpmath.log((1 - pts[k + 1]) / (1 - pts[k])))
                         for k in range(2)]
        worst = mpmath.mpf(0)
        for t in (mpmath.mpf("0.01"), mpmath.mpf("0.1"), mpmath.mpf("0.2"), mpmath.mpc("0.1", "0.15")):
            y = y_value(TrinomialProblem(2, t), mpmath.mpf("1e-35"), digits=50).value
            worst = max(worst, abs(y * mpmath.sqrt(1 - 4 * t) - 1))
    ok = all(-0.55 <= s <= -0.45 for v in slopes.values() for s in v) and worst <= mpmath.mpf("1e-30")
    shown = {n: [round(s, 4) for s in v] for n, v in slopes.items()}
    return ok, f"log-slopes {shown}; n=2 |y sqrt(1-4t) - 1| <= {mpmath.nstr(worst, 3)}"


def criterion_11():
    worst = 0.0
    with mpmath.workdps(40):
        for n in range(3, 7):
            base = 10 * radius(n, 40).r
            for t in (base, base * mpmath.expjpi(mpmath.mpf(2) / 7)):
                p = TrinomialProblem(n, t)
                x = solve_large_t(p, digits=40).value
                gap = min(abs(rr.value - x) for rr in solve_all_branches(p, digits=40))
                worst = max(worst, float(gap / abs(t) ** (mpmath.mpf(1) / n)))
    return worst <= 1e-12, f"max |x_iter - x_oracle| / |t|^(1/n) = {worst:.2e}"


def criterion_12():
    clean, sabotaged = [], []
    for n in range(2, 7):
        for j in range(4):
            clean.append(V.check_coefficient_formulas(n, j, 50))
            sabotaged.append(V.check_coefficient_formulas(n, j, 50, perturb=13))
            for spec in [H_spec(n, j)] + ([x_spec(n, j)[1]] if j else []):
                clean.append(V.check_ode(spec, 40))
                sabotaged.append(V.check_ode(spec, 40, perturb=17))
                clean.append(V.check_shift_calculus(spec, 30))
                sabotaged.append(V.check_shift_calculus(spec, 30, perturb=5))
            clean.append(V.check_cancellation(H_spec(n, j, cancel=False), 30))
            sabotaged.append(V.check_cancellation(H_spec(n, j, cancel=False), 30, perturb=3))
    suites = sorted({r.name for r in clean})
    ok = all(r.passed for r in clean) and not any(r.passed for r in sabotaged)
    return ok, (f"suites {suites}: {sum(r.passed for r in clean)}/{len(clean)} clean pass, "
                f"{sum(not r.passed for r in sabotaged)}/{len(sabotaged)} sabotaged fail")


CRITERIA = [
    (1, "published tables regenerate", criterion_1),
    (2, "root identity through t^60", criterion_2),
    (3, "reciprocal and power identities", criterion_3),
    (4, "derivative chain constant -n!", criterion_4),
    (5, "Gaussian-moment expansion", criterion_5),
    (6, "products of x- and y-streams", criterion_6),
    (7, "numeric solve at r_n/2", criterion_7),
    (8, "n=2 closed form", criterion_8),
    (9, "branch sums and residuals", criterion_9),
    (10, "square-root singularity", criterion_10),
    (11, "large-|t| iteration", criterion_11),
    (12, "property suites and sabotage", criterion_12),
]


@pytest.mark.parametrize("number, title, fn", CRITERIA, ids=[f"criterion_{c[0]:02d}" for c in CRITERIA])
def test_criterion(number, title, fn):
    ok, detail = fn()
    record(number, title, ok, detail)
    assert ok, detail


if __name__ == "__main__":
    for number, title, fn in CRITERIA:
        print(record(number, title, *fn()), flush=True)
