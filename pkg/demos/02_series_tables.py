"""
Exact series coefficients
=========================

Coefficients of x(t) and of y_j(t) = x^j dx/dt are exact rationals (in
fact integers for y_j). Printing them next to their prime factorizations
reproduces the published tables.
"""

from trinomia import H_spec, TruncatedSeries, factorize, x_series, y_series
from trinomia.verify import regenerate_table

# x(t) for n = 2: the Catalan numbers
print("n=2 x(t):", x_series(2, 1, 10).coeffs)

# y(t) for n = 3 as a hypergeometric function of 27/4 t^2
print(H_spec(3, 0))
y = y_series(3, 0, 12)
for e in range(0, 13, 2):
    print(f"  t^{e:<3d} {y[e]!s:>8}  {factorize(int(y[e]))}")

# the identity x^n - x + t = 0 holds coefficient by coefficient
x = x_series(4, 1, 30)
t = TruncatedSeries.monomial(1, 30)
print("x^4 - x + t through t^30 is zero:", (x**4 - x + t).is_zero())

# regenerate the n = 4 table and compare with the stored fixtures
text, report = regenerate_table(4)
print(text)
print("table check:", report.status, report.details["checked"], "items")
