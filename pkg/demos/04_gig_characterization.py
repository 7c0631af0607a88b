#!/usr/bin/env python3
"""A computable characterization of GIG laws.

For i.i.d. positive increments with smooth density f, the conditional law
of X_2 given Z_2 = z and that of X_3 given (Z_3, Z_2) = (z, u) coincide for
all (z, u) exactly when f is a symmetric GIG density.  The sup gap between
the two conditionals is therefore a discrepancy functional that vanishes
only on the GIG family; smooth control laws stay bounded away from zero.
"""

from scipy import stats as spstats

from gigwalk import GigParams, LogGrid, characterization_discrepancy, gig_pdf

GRID = LogGrid.make()
ZU = [(1.5, 2.0), (2.0, 1.5), (1.0, 1.0)]

laws = []
for lam, a in [(0.7, 1.2), (1.0, 1.0), (2.0, 0.5)]:
    params = GigParams.symmetric(lam, a)
    laws.append((f"GIG({lam}, {a}, {a})",
                 lambda t, p=params: gig_pdf(p, t)))
laws.append(("lognormal(0, 0.5)", lambda t: spstats.lognorm.pdf(t, 0.5)))
laws.append(("gamma(2, 1)", lambda t: spstats.gamma.pdf(t, 2.0)))
laws.append(("invgauss(1)", lambda t: spstats.invgauss.pdf(t, 1.0)))

header = f"{'law':>20}" + "".join(f"  (z,u)=({z},{u})" for z, u in ZU)
print(header)
print("-" * len(header))
for name, pdf in laws:
    row = f"{name:>20}"
    for z, u in ZU:
        row += f"  {characterization_discrepancy(pdf, z, u, GRID):>12.3e}"
    print(row)

print()
print("GIG rows sit at quadrature precision (< 1e-7); lognormal and gamma")
print("separate by orders of magnitude (> 1e-3).  The last row is the")
print("punchline: the unit-mean inverse Gaussian density is x^(-3/2)")
print("exp(-(x + 1/x)/2) up to constants, i.e. a symmetric GIG with shape")
print("-1/2 in disguise, and the discrepancy functional detects that.")
