"""
All branches, and large t
=========================

Outside the disc of convergence the series no longer applies. Durand-Kerner
iteration finds all n roots at once. For large |t|, a fixed-point iteration
follows one branch. The root sum matches Vieta: 1 for n = 2 and 0 for
larger n.
"""

import mpmath

from trinomia import TrinomialProblem, radius, solve_all_branches, solve_large_t
from trinomia.trinomial import f_residual

mpmath.mp.dps = 40

n, t = 5, mpmath.mpc("0.4", "0.7")
roots = solve_all_branches(TrinomialProblem(n, t))
for r in roots:
    print(mpmath.nstr(r.value, 20), " |F| =", mpmath.nstr(r.residual, 3))
print("sum of roots:", mpmath.nstr(mpmath.fsum(r.value for r in roots), 3))

# the fixed point x = e^{i pi/n} t^{1/n} (1 - x/t)^{1/n} at t = 10 r_n
t = 10 * radius(n).r
x = solve_large_t(TrinomialProblem(n, t))
print("large-t root:", x.value, "after", x.terms_used, "iterations")
print("residual:", mpmath.nstr(abs(f_residual(n, x.value, t)), 3))
print("matches an oracle root:",
      min(abs(r.value - x.value) for r in solve_all_branches(TrinomialProblem(n, t))) < 1e-25)
