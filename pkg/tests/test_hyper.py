from fractions import Fraction as F

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from trinomia.errors import BudgetExceededError, OutsideDiscError, ShiftUndefinedError
from trinomia.exact import coeff_c, series_differentiate, series_integrate
from trinomia.hyper import (
    H_spec,
    HyperSpec,
    cancel_parameters,
    coefficients,
    derivative_spec,
    direct_coefficients,
    evaluate,
    gamma_n,
    integral_spec,
    ode_residual,
    stream,
    x_spec,
)

FAMILY = [H_spec(n, j) for n in range(2, 7) for j in range(4)] + \
         [x_spec(n, j)[1] for n in range(2, 7) for j in range(1, 4)]


def params(spec):
    return sorted(spec.alphas), sorted(spec.betas), spec.gamma


# -- spec construction ----------------------------------------------------------

def test_H_spec_examples():
    assert params(H_spec(3, 0)) == ([F(1, 3), F(2, 3)], [F(1, 2)], F(27, 4))
    assert params(H_spec(5, 0)) == ([F(1, 5), F(2, 5), F(3, 5), F(4, 5)],
                                    [F(1, 4), F(1, 2), F(3, 4)], F(3125, 256))
    assert params(H_spec(3, 2)) == ([F(1), F(4, 3), F(5, 3)], [F(3, 2), F(2)], F(27, 4))


def test_x_spec_examples():
    j, s = x_spec(5, 1)
    assert j == 1
    assert params(s) == ([F(1, 5), F(2, 5), F(3, 5), F(4, 5)], [F(1, 2), F(3, 4), F(5, 4)], F(3125, 256))
    assert params(x_spec(2, 1)[1]) == ([F(1, 2), F(1)], [F(2)], F(4))
    assert params(x_spec(3, 1)[1]) == ([F(1, 3), F(2, 3)], [F(3, 2)], F(27, 4))
    with pytest.raises(ValueError):
        x_spec(3, 0)


def test_gamma_n():
    assert [gamma_n(n) for n in (2, 3, 4)] == [4, F(27, 4), F(256, 27)]


def test_cancel_parameters():
    s = cancel_parameters(HyperSpec([F(1, 3), F(2, 3), 1], [F(1, 2), 1]))
    assert params(s)[:2] == ([F(1, 3), F(2, 3)], [F(1, 2)])
    plain = HyperSpec([F(1, 3)], [F(1, 2)])
    assert cancel_parameters(plain) == plain
    s = cancel_parameters(HyperSpec([1, 1], [1]))
    assert s.alphas == (1,) and s.betas == ()


def test_lower_parameter_validation():
    with pytest.raises(ValueError):
        HyperSpec([1], [0])
    with pytest.raises(ValueError):
        HyperSpec([1], [-2])


@pytest.mark.parametrize("n", range(2, 7))
@pytest.mark.parametrize("j", range(4))
def test_cancellation_leaves_stream(n, j):
    raw = H_spec(n, j, cancel=False)
    assert coefficients(raw, 30) == coefficients(cancel_parameters(raw), 30)
    if j >= 1:
        raw = x_spec(n, j, cancel=False)[1]
        assert coefficients(raw, 30) == coefficients(cancel_parameters(raw), 30)


# -- coefficient streams --------------------------------------------------------

def test_coefficients_examples():
    assert coefficients(H_spec(2, 0), 4) == [1, 2, 6, 20, 70]
    assert coefficients(H_spec(6, 0), 3) == [1, 6, 66, 816]
    assert coefficients(HyperSpec([F(7, 3)], [F(5, 2)], 9), 0) == [1]


@pytest.mark.parametrize("spec", FAMILY, ids=str)
def test_recurrence_equals_pochhammer_formula(spec):
    assert coefficients(spec, 50) == direct_coefficients(spec, 50)


def test_binomial_equals_stream():
    for n in range(2, 7):
        for j in range(5):
            assert coefficients(H_spec(n, j), 50) == [coeff_c(n, j, k) for k in range(51)]


# -- shift calculus -------------------------------------------------------------

@pytest.mark.parametrize("n", range(2, 7))
@pytest.mark.parametrize("j", range(4))
def test_derivative_of_H_is_j_plus_n_times_shifted(n, j):
    mult, shifted = derivative_spec(H_spec(n, j))
    assert mult == j + n
    expected = HyperSpec([F(j + n + i, n) for i in range(1, n + 1)],
                         [F(j + n - 1 + i, n - 1) for i in range(1, n)], gamma_n(n))
    assert cancel_parameters(shifted).same_function(cancel_parameters(expected))


def test_derivative_of_n2_y0():
    mult, shifted = derivative_spec(HyperSpec([F(1, 2)], [], 4))
    assert mult == 2
    assert shifted.alphas == (F(3, 2),)
    # term-wise differentiation of sum C(2k,k) z^k
    base = stream(H_spec(2, 0), 31)
    assert stream(shifted, 30) * mult == series_differentiate(base)


@pytest.mark.parametrize("spec", FAMILY, ids=str)
def test_derivative_stream_matches_formal_derivative(spec):
    mult, shifted = derivative_spec(spec)
    assert stream(shifted, 30) * mult == series_differentiate(stream(spec, 31))


def test_integral_inverts_derivative():
    s = H_spec(3, 1)
    m1, up = derivative_spec(s)
    m2, back = integral_spec(up)
    assert back.same_function(s)
    assert m1 * m2 == 1


def test_integral_matches_formal_antiderivative():
    s = H_spec(3, 1)  # 2F1(2/3, 4/3; 3/2): no parameter equals 1
    mult, down = integral_spec(s)
    anti = stream(down, 21) * mult
    formal = series_integrate(stream(s, 20))
    assert anti.with_coefficient(0, 0) == formal


def test_integral_multiplier_finite_for_x52():
    mult, down = integral_spec(x_spec(5, 2)[1])
    # (3/4-1)(5/4-1)(3/2-1) / (gamma (2/5-1)(3/5-1)(4/5-1)(6/5-1))
    expected = F(-1, 4) * F(1, 4) * F(1, 2) / (F(3125, 256) * F(-3, 5) * F(-2, 5) * F(-1, 5) * F(1, 5))
    assert mult == expected


def test_integral_undefined_for_unit_parameter():
    with pytest.raises(ShiftUndefinedError):
        integral_spec(x_spec(2, 1)[1])


# -- ODE residual -------------------------------------------------------------

def test_ode_residual_examples():
    assert ode_residual(H_spec(2, 0), 20).is_zero()
    assert ode_residual(H_spec(5, 0), 40).is_zero()
    assert ode_residual(x_spec(4, 1)[1], 40).is_zero()


@pytest.mark.parametrize("spec", FAMILY, ids=str)
def test_ode_residual_vanishes(spec):
    res = ode_residual(spec, 40)
    assert res.order == 40 and res.is_zero()


def test_ode_residual_detects_wrong_stream():
    spec = H_spec(4, 1)
    u = stream(spec.with_gamma(1), 40)
    assert ode_residual(spec, 40, u.with_coefficient(7, u[7] + 1)).first_nonzero() == 7


# -- numeric evaluation ---------------------------------------------------------

def test_evaluate_closed_form_n2():
    with mpmath.workdps(50):
        res = evaluate(H_spec(2, 0), F(1, 8), mpmath.mpf("1e-30"))
        assert abs(res.value - mpmath.sqrt(2)) <= res.tail_bound + mpmath.mpf("1e-45")
        assert res.tail_bound <= mpmath.mpf("1e-30")


def test_evaluate_at_zero():
    res = evaluate(x_spec(4, 1)[1], 0)
    assert res.value == 1 and res.tail_bound == 0 and res.terms_used == 1


def test_evaluate_n3_y_matches_newton_oracle():
    with mpmath.workdps(50):
        t = mpmath.mpf("0.2")
        x = mpmath.findroot(lambda x: x**3 - x + t, t)  # independent Newton route
        res = evaluate(H_spec(3, 0), t**2, mpmath.mpf("1e-30"))
        assert abs(res.value - 1 / (1 - 3 * x**2)) <= mpmath.mpf("1e-29")


@pytest.mark.parametrize("spec", FAMILY[::3], ids=str)
def test_evaluate_matches_mpmath_hyper(spec):
    with mpmath.workdps(50):
        z = mpmath.mpf("0.6") / mpmath.mpf(spec.gamma.numerator) * spec.gamma.denominator
        res = evaluate(spec, z, mpmath.mpf("1e-30"))
        ref = mpmath.hyper([mpmath.mpf(a.numerator) / a.denominator for a in spec.alphas],
                           [mpmath.mpf(b.numerator) / b.denominator for b in spec.betas],
                           mpmath.mpf("0.6"))
        assert abs(res.value - ref) <= res.tail_bound + mpmath.mpf("1e-40")


@settings(max_examples=40, deadline=None)
@given(idx=st.integers(0, len(FAMILY) - 1), frac=st.floats(0.05, 0.9),
       angle=st.floats(0, 6.28), K=st.integers(5, 80))
def test_tail_bound_dominates_truncation_error(idx, frac, angle, K):
    spec = FAMILY[idx]
    with mpmath.workdps(40):
        z = mpmath.mpf(frac) * mpmath.expj(angle) / (mpmath.mpf(spec.gamma.numerator) / spec.gamma.denominator)
        eps = mpmath.mpf("1e-30")
        a = evaluate(spec, z, eps, terms=K)
        b = evaluate(spec, z, eps, terms=2 * K)
        # tail_bound covers truncation only; allow rounding at working precision
        rounding = mpmath.mpf(10) ** (-(a.digits - 2))
        assert abs(a.value - b.value) <= a.tail_bound + rounding


def test_evaluate_outside_disc():
    with pytest.raises(OutsideDiscError):
        evaluate(H_spec(3, 0), F(4, 27))


def test_evaluate_budget_exceeded():
    with pytest.raises(BudgetExceededError) as info:
        evaluate(H_spec(2, 0), mpmath.mpf("0.2499"), mpmath.mpf("1e-30"), max_terms=50)
    assert info.value.best_bound > 0
    assert info.value.terms_used == 50


def test_budget_env_override(monkeypatch):
    monkeypatch.setenv("TRINOMIA_MAX_TERMS", "20")
    with pytest.raises(BudgetExceededError):
        evaluate(H_spec(2, 0), mpmath.mpf("0.2"), mpmath.mpf("1e-30"))


def test_fewer_terms_for_looser_eps():
    z = mpmath.mpf("0.1")
    loose = evaluate(H_spec(2, 0), z, mpmath.mpf("1e-10"))
    tight = evaluate(H_spec(2, 0), z, mpmath.mpf("1e-30"))
    assert loose.terms_used < tight.terms_used
