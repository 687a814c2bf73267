"""
Solving a quintic with a hypergeometric series
==============================================

The root of x^5 - x + t = 0 that vanishes at t = 0 is t times a 4F3
evaluated at 5^5/4^4 t^4. Summing that series gives the root to any
precision inside the disc |t| < r_5.
"""

import mpmath

from trinomia import TrinomialProblem, radius, solve_principal, y_value

mpmath.mp.dps = 40

# the series converges for |t| < r_5 = 4 / 5^(5/4)
r5 = radius(5).r
print("r_5 =", r5)

t = mpmath.mpf("0.1")
x = solve_principal(TrinomialProblem(5, t))
print("x(0.1)       =", x.value)
print("terms summed =", x.terms_used, " error bound =", mpmath.nstr(x.error_bound, 3))
print("x^5 - x + t  =", mpmath.nstr(x.value**5 - x.value + t, 3))

# y = dx/dt comes from a second series, with no differentiation needed
y = y_value(TrinomialProblem(5, t))
print("y(0.1)       =", y.value)
print("1/(1-5x^4)   =", 1 / (1 - 5 * x.value**4))

# complex t works the same way
tc = mpmath.mpc("0.2", "0.3")
xc = solve_principal(TrinomialProblem(5, tc)).value
print("x(0.2+0.3i)  =", xc)

# the closer t gets to r_5, the more terms the sum needs
for frac in ("0.5", "0.8", "0.9", "0.95"):
    res = solve_principal(TrinomialProblem(5, mpmath.mpf(frac) * r5))
    print(f"t = {frac} r_5: {res.terms_used:5d} terms")
