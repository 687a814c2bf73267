"""Command-line front end: ``trinomia {solve,series,verify,branches,bench}``.

Exit codes: 0 success, 1 usage error, 2 domain error, 3 verification
failure, 4 term budget exceeded.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import random
import re
import sys
import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import mpmath

from . import verify as V
from .errors import BudgetExceededError, NonConvergenceError, TrinomiaError
from .exact import format_factored, series_reciprocal
from .hyper import H_spec, x_spec
from .trinomial import (
    DEFAULT_RHO,
    LARGE_T_FACTOR,
    TrinomialProblem,
    f_residual,
    g_residual,
    radius,
    solve_all_branches,
    solve_large_t,
    solve_principal,
    x_series,
    y_series,
    y_value,
)

EXIT_OK, EXIT_USAGE, EXIT_DOMAIN, EXIT_VERIFY, EXIT_BUDGET = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


@dataclass
class OutputRecord:
    command: str
    inputs: dict
    outputs: dict
    bounds: dict = field(default_factory=dict)
    timing: float = 0.0
    warnings: list = field(default_factory=list)

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> OutputRecord:
        return cls(**json.loads(text))


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------

def _parse_real(text: str, n: int | None):
    text = text.strip()
    if text.endswith("r"):
        if n is None:
            raise UsageError("radius shorthand needs a degree")
        factor = _parse_real(text[:-1] or "1", None)
        return factor * radius(n, mpmath.mp.dps).r
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"cannot parse number {text!r}") from exc
    return mpmath.mpf(value.numerator) / value.denominator


_SPLIT = re.compile(r"(?<=[^eE+-])(?=[+-])")


def parse_t(text: str, n: int | None = None):
    """Parse ``a``, ``a+bi``, ``bi``, rationals like ``1/4`` and ``0.9r`` (= 0.9 r_n)."""
    s = text.replace(" ", "")
    if not s:
        raise UsageError("empty number")
    if s[-1] not in "ij":
        return _parse_real(s, n)
    body = s[:-1]
    parts = _SPLIT.split(body)
    if len(parts) == 1:
        re_part, im_part = "0", parts[0]
    elif len(parts) == 2:
        re_part, im_part = parts
    else:
        raise UsageError(f"cannot parse complex literal {text!r}")
    if im_part in ("", "+"):
        im_part = "1"
    elif im_part == "-":
        im_part = "-1"
    return mpmath.mpc(_parse_real(re_part, n), _parse_real(im_part, n))


def parse_range(text: str) -> list[int]:
    """``"2..5"`` -> [2, 3, 4, 5]; ``"3"`` -> [3]; ``"2,4"`` -> [2, 4]."""
    try:
        if ".." in text:
            lo, hi = text.split("..")
            return list(range(int(lo), int(hi) + 1))
        return [int(v) for v in text.split(",")]
    except ValueError as exc:
        raise UsageError(f"cannot parse integer range {text!r}") from exc


def parse_grid(text: str, n: int, steps: int) -> list:
    if ".." in text:
        lo, hi = (parse_t(v, n) for v in text.split(".."))
        if steps < 2:
            return [lo]
        return [lo + (hi - lo) * k / (steps - 1) for k in range(steps)]
    return [parse_t(v, n) for v in text.split(",")]


def fmt(v, digits: int) -> str:
    if isinstance(v, mpmath.mpc):
        im = mpmath.nstr(abs(v.imag), digits)
        sign = "-" if v.imag < 0 else "+"
        return f"{mpmath.nstr(v.real, digits)}{sign}{im}i"
    if isinstance(v, (mpmath.mpf, float)):
        return mpmath.nstr(v, digits)
    return str(v)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def _eps(args):
    if args.eps is not None:
        return _parse_real(args.eps, None)
    return mpmath.mpf(10) ** (-(args.digits - 10))


def _y_from_x(n, x):
    return 1 / (1 - n * x ** (n - 1))


def cmd_solve(args) -> list[OutputRecord]:
    n, digits = args.n, args.digits
    warnings = []
    with mpmath.workdps(digits):
        t = parse_t(args.t, n)
        eps = _eps(args)
        r = radius(n, digits).r
        mode = args.mode
        if mode == "auto":
            if abs(t) <= DEFAULT_RHO * r:
                mode = "series"
            else:
                mode = "oracle"
                warnings.append(
                    f"|t| = {fmt(abs(t), 8)} is outside {DEFAULT_RHO} r_{n} = {fmt(DEFAULT_RHO * r, 8)}; "
                    "using the root oracle")
        start = time.perf_counter()
        p = TrinomialProblem(n, t)
        terms = 0
        if mode == "series":
            xr = solve_principal(p, eps, digits=digits)
            yr = y_value(p, eps, digits=digits)
            x, y, terms = xr.value, yr.value, max(xr.terms_used, yr.terms_used)
            bound = xr.error_bound
            method = "series"
        elif mode == "large-t":
            xr = solve_large_t(p, eps, digits=digits)
            x, bound, method = xr.value, xr.error_bound, xr.method
            y = _y_from_x(n, x)
        else:
            roots = solve_all_branches(p, eps, digits=digits, seed=args.seed)
            if abs(t) >= LARGE_T_FACTOR * r:
                # pick the branch the large-|t| iteration selects
                try:
                    ref = solve_large_t(p, eps, digits=digits).value
                except NonConvergenceError:
                    ref = 0
            else:
                ref = 0
            best = min(roots, key=lambda rr: abs(rr.value - ref))
            x, bound, method = best.value, best.error_bound, "oracle"
            y = _y_from_x(n, x)
        elapsed = time.perf_counter() - start
        res_f = abs(f_residual(n, x, t))
        res_g = abs(g_residual(n, y, t))
        show = min(digits, 30)
        rec = OutputRecord(
            "solve",
            {"n": n, "t": fmt(t, show), "eps": fmt(eps, 3), "mode": args.mode, "digits": digits},
            {"x": fmt(x, show), "y": fmt(y, show), "method": method, "terms_used": terms},
            {"error_bound": fmt(bound, 3), "residual_F": fmt(res_f, 3), "residual_G": fmt(res_g, 3)},
            round(elapsed, 6),
            warnings,
        )
    return [rec]


def cmd_series(args) -> list[OutputRecord]:
    n, j, K = args.n, args.j, args.order
    if args.kind == "x":
        if j < 1:
            raise UsageError("kind x needs --j >= 1")
        prefactor, spec = x_spec(n, j)
        s = x_series(n, j, K)
    elif args.kind == "yinv":
        prefactor, spec = 0, None
        s = series_reciprocal(y_series(n, j, K))
    else:
        if j < 0:
            raise UsageError("kind y needs --j >= 0")
        prefactor, spec = j, H_spec(n, j)
        s = y_series(n, j, K)
    coeffs = {}
    for e in range(K + 1):
        c = s[e]
        if c:
            if args.factored and c.denominator == 1:
                coeffs[str(e)] = f"{c} = {format_factored(int(c))}"
            else:
                coeffs[str(e)] = str(c)
    outputs = {"coefficients": coeffs, "prefactor": prefactor}
    if spec is not None:
        outputs.update(alphas=[str(a) for a in sorted(spec.alphas)],
                       betas=[str(b) for b in sorted(spec.betas)],
                       gamma=str(spec.gamma), argument_power=n - 1)
    return [OutputRecord("series", {"n": n, "j": j, "kind": args.kind, "order": K,
                                    "factored": bool(args.factored)}, outputs)]


SUITES = ("root", "powers", "chain", "moments", "products", "tables", "branches", "properties")


def _branch_samples(n, count, seed):
    rng = random.Random(seed * 1000 + n)
    r = radius(n, mpmath.mp.dps).r
    for _ in range(count):
        mod = r * (0.1 + 2.9 * rng.random())
        arg = 2 * mpmath.pi * rng.random()
        yield mod * mpmath.expjpi(arg / mpmath.pi)


def run_suite(suite: str, ns: list[int], K: int | None, seed: int = 0):
    """Yield CheckReports for one suite."""
    if suite == "root":
        for n in ns:
            yield V.check_root_identity(n, K or 60)
    elif suite == "powers":
        for n in ns:
            yield V.check_reciprocal_relation(n, K or 40)
            for j in (2, 3, 4):
                yield V.check_powers(n, j, K or 40)
    elif suite == "chain":
        for n in ns:
            yield V.check_derivative_chain(n, K or max(40, n * (n - 1)))
    elif suite == "moments":
        for n in ns:
            yield V.check_moment_expansion(n, K or 12)
    elif suite == "products":
        for n in ns:
            for j in (1, 2):
                for l in (1, 2):
                    yield V.check_stream_product(n, j, l, K or 20, form="xx")
                for l in (0, 1, 2):
                    yield V.check_stream_product(n, j, l, K or 20, form="xy")
    elif suite == "tables":
        for n in ns:
            if n in V.TABLE_FUNCTIONS:
                yield V.regenerate_table(n)[1]
    elif suite == "branches":
        with mpmath.workdps(40):
            for n in ns:
                for t in _branch_samples(n, 5, seed):
                    try:
                        yield V.check_branch_relations(n, t, seed=seed)
                    except V.BranchPointError:
                        continue
    elif suite == "properties":
        for n in ns:
            for j in range(0, 4):
                yield V.check_coefficient_formulas(n, j, K or 50)
                yield V.check_ode(H_spec(n, j), K or 40)
                if j >= 1:
                    yield V.check_ode(x_spec(n, j)[1], K or 40)
                yield V.check_shift_calculus(H_spec(n, j), K or 30)
            yield V.check_cancellation(H_spec(n, 0, cancel=False), K or 30)
    else:
        raise UsageError(f"unknown suite {suite!r}")


def cmd_verify(args) -> list[OutputRecord]:
    suites = SUITES if args.suite == "all" else (args.suite,)
    ns = parse_range(args.n)
    records = []
    for suite in suites:
        checks = run_suite(suite, ns, args.K, args.seed)
        while True:
            start = time.perf_counter()
            rep = next(checks, None)
            if rep is None:
                break
            d = rep.to_record()
            records.append(OutputRecord(
                "verify", {"suite": suite, **d["parameters"]},
                {"name": d["name"], "status": d["status"], "witness": d["witness"], "details": d["details"]},
                {}, round(time.perf_counter() - start, 6)))
    return records


def cmd_branches(args) -> list[OutputRecord]:
    n, digits = args.n, args.digits
    with mpmath.workdps(digits):
        t = parse_t(args.t, n)
        eps = _eps(args)
        start = time.perf_counter()
        roots = solve_all_branches(TrinomialProblem(n, t), eps, digits=digits, seed=args.seed)
        elapsed = time.perf_counter() - start
        show = min(digits, 25)
        rows = []
        for rr in roots:
            y = _y_from_x(n, rr.value) if (1 - n * rr.value ** (n - 1)) != 0 else mpmath.inf
            rows.append({"x": fmt(rr.value, show), "residual_F": fmt(rr.residual, 3),
                         "y": fmt(y, show), "residual_G": fmt(abs(g_residual(n, y, t)), 3)})
        total = mpmath.fsum(rr.value for rr in roots)
        rec = OutputRecord("branches", {"n": n, "t": fmt(t, show), "digits": digits},
                           {"roots": rows, "branch_sum": fmt(total, show)},
                           {"eps": fmt(eps, 3)}, round(elapsed, 6))
    return [rec]


def cmd_bench(args) -> list[OutputRecord]:
    records = []
    for n in parse_range(args.n):
        with mpmath.workdps(args.digits):
            eps = _eps(args)
            for t in parse_grid(args.t, n, args.steps):
                p = TrinomialProblem(n, t)
                r = radius(n, args.digits).r
                start = time.perf_counter()
                try:
                    sr = solve_principal(p, eps, digits=args.digits, rho=1)
                    s_time, s_terms, s_res = time.perf_counter() - start, sr.terms_used, fmt(sr.residual, 3)
                except (TrinomiaError, ValueError) as exc:
                    s_time, s_terms, s_res = time.perf_counter() - start, -1, type(exc).__name__
                start = time.perf_counter()
                roots = solve_all_branches(p, eps, digits=args.digits, seed=args.seed)
                o_time = time.perf_counter() - start
                o_res = max(rr.residual for rr in roots)
                records.append(OutputRecord(
                    "bench", {"n": n, "t_over_r": fmt(t / r, 6), "eps": fmt(eps, 3)},
                    {"series_terms": s_terms, "series_seconds": round(s_time, 6), "series_residual": s_res,
                     "oracle_seconds": round(o_time, 6), "oracle_max_residual": fmt(o_res, 3)}))
    return records


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------

def _human(rec: OutputRecord) -> str:
    if rec.command == "verify":
        o = rec.outputs
        params = " ".join(f"{k}={v}" for k, v in rec.inputs.items() if k != "suite")
        line = f"{o['status'].upper():4s} {o['name']:14s} {params}"
        if "constant" in o["details"]:
            line += f"  constant={o['details']['constant']}"
        if o["witness"] is not None:
            line += f"  witness={o['witness']}"
        return line
    if rec.command == "series":
        o = rec.outputs
        head = []
        if "alphas" in o:
            head.append(f"alphas = {', '.join(o['alphas'])}")
            head.append(f"betas  = {', '.join(o['betas'])}")
            head.append(f"gamma  = {o['gamma']}  (argument gamma * t^{o['argument_power']}, "
                        f"prefactor t^{o['prefactor']})")
        body = [f"t^{e:<4s} {c}" for e, c in o["coefficients"].items()]
        return "\n".join(head + body)
    if rec.command == "branches":
        lines = [f"n = {rec.inputs['n']}, t = {rec.inputs['t']}"]
        for i, row in enumerate(rec.outputs["roots"], 1):
            lines.append(f"  x{i} = {row['x']}  |F| = {row['residual_F']}  "
                         f"y = {row['y']}  |G| = {row['residual_G']}")
        lines.append(f"  sum x = {rec.outputs['branch_sum']}")
        return "\n".join(lines)
    items = {**rec.inputs, **rec.outputs, **rec.bounds}
    return "\n".join(f"{k:12s} {v}" for k, v in items.items())


def emit(records, args, out=None):
    out = out or sys.stdout
    if getattr(args, "csv", False):
        rows = [{**r.inputs, **r.outputs} for r in records]
        if rows:
            buf = io.StringIO()
            writer = csv.DictWriter(buf, fieldnames=list(rows[0]))
            writer.writeheader()
            writer.writerows(rows)
            out.write(buf.getvalue())
        return
    for r in records:
        print(r.to_json() if args.json else _human(r), file=out)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--digits", type=int, default=40, help="working precision in decimal digits")
    common.add_argument("--eps", default=None, help="target accuracy (default 10^-(digits-10))")
    common.add_argument("--json", action="store_true", help="line-delimited JSON records")
    common.add_argument("--seed", type=int, default=0)

    parser = _Parser(prog="trinomia", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("solve", parents=[common], help="principal root x and y = dx/dt")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--t", required=True, help="a, a+bi, 1/4, 0.5r ...")
    p.add_argument("--mode", choices=("auto", "series", "oracle", "large-t"), default="auto")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("series", parents=[common], help="series coefficients of x_{n,j} or y_{n,j}")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--j", type=int, default=None)
    p.add_argument("--kind", choices=("x", "y", "yinv"), default="x")
    p.add_argument("--order", type=int, default=20)
    p.add_argument("--factored", action="store_true")
    p.set_defaults(func=cmd_series)

    p = sub.add_parser("verify", parents=[common], help="run identity checks")
    p.add_argument("--suite", choices=("all",) + SUITES, default="all")
    p.add_argument("--n", default="2..6")
    p.add_argument("--K", type=int, default=None)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("branches", parents=[common], help="all n roots")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--t", required=True)
    p.set_defaults(func=cmd_branches)

    p = sub.add_parser("bench", parents=[common], help="series vs oracle timings")
    p.add_argument("--n", default="2..6")
    p.add_argument("--t", default="0.5r..0.95r", help="grid: a..b or comma list; 'r' means r_n")
    p.add_argument("--steps", type=int, default=4)
    p.add_argument("--csv", action="store_true")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "series" and args.j is None:
        args.j = 1 if args.kind == "x" else 0
    try:
        if isinstance(args.n, int) and args.n < 2:
            raise UsageError("--n must be >= 2")
        records = args.func(args)
    except UsageError as exc:
        print(f"trinomia: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetExceededError as exc:
        print(f"trinomia: budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (TrinomiaError, ValueError, ZeroDivisionError) as exc:
        print(f"trinomia: domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    for rec in records:
        for w in rec.warnings:
            print(f"warning: {w}", file=sys.stderr)
    emit(records, args)
    if args.command == "verify" and any(r.outputs["status"] != "pass" for r in records):
        return EXIT_VERIFY
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
