"""
Identities between the x and y series
=====================================

A handful of exact identities tie the series together. Each check returns
a report; a deliberately corrupted coefficient makes it fail and reports
where.
"""

from trinomia import verify as V

# powers: x^j is itself hypergeometric, and so is x^j y
print(V.check_powers(4, 3, 40))

# applying (1/y) d/dt to 1/y, n-1 times, leaves the constant -n!
for n in range(2, 6):
    rep = V.check_derivative_chain(n, 40)
    print(f"n={n}: constant {rep.details['constant']}")

# the y series as Gaussian moments of exp(zbar (z+t)^n)
print(V.check_moment_expansion(3, 12))

# products of streams; the second form also reports misprinted readings
rep = V.check_stream_product(3, 1, 2, 20, form="xy")
for reading, outcome in rep.details["readings"].items():
    print(f"  {outcome:12s} {reading}")

# sabotage: bump one coefficient and the check points at it
bad = V.check_root_identity(3, 40, perturb=7)
print(bad.status, bad.witness)
