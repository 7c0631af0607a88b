#!/usr/bin/env python3
"""Diffusion scaling limit of the lower corner.

Run the walk with delta = 1/n and GIG(lambda, sqrt n, sqrt n) increments:
as n grows, Z_{floor(nt)} converges in law to the exponential Brownian
functional e^{B_t} int_0^t e^{-2 B_s} ds with drift lambda.  The limiting
process is a diffusion whose generator has diffusion coefficient z^2 and an
explicit Bessel-ratio drift; both are recovered empirically from the scaled
chain.
"""


from gigwalk import (generator_drift_check, my_generator_coefficients,
                     scaling_limit_test)

SEED = 301

print("=" * 68)
print("1. Marginal law at fixed t: walk vs Brownian-functional simulator")
print("=" * 68)
print(f"{'lam':>5} {'t':>5} {'n':>5} {'KS':>9} {'thresh':>8}")
for lam in (0.0, 1.0):
    for t in (0.5, 1.0):
        res = scaling_limit_test(lam, 200, t, 20000, 1e-4, SEED)
        print(f"{lam:>5} {t:>5} {200:>5} {res.ks.statistic:>9.4f} "
              f"{res.threshold:>8.3f}  {'PASS' if res.passed else 'FAIL'}")
ctrl = scaling_limit_test(1.0, 10, 0.5, 20000, 1e-3, SEED)
print(f"{1.0:>5} {0.5:>5} {10:>5} {ctrl.ks.statistic:>9.4f} "
      f"{ctrl.threshold:>8.3f}  (pre-asymptotic control)")

print()
print("=" * 68)
print("2. Empirical generator of the scaled chain near a level z")
print("=" * 68)
print(f"{'lam':>5} {'z':>4} {'drift emp':>11} {'drift ref':>11} "
      f"{'diff emp':>10} {'diff ref':>10}")
for lam, z in [(0.5, 1.0), (1.0, 2.0)]:
    res = generator_drift_check(lam, z, 500, 4 * 10**6, SEED)
    print(f"{lam:>5} {z:>4} {res.drift_estimate:>11.4f} "
          f"{res.drift_reference:>11.4f} {res.diffusion_estimate:>10.4f} "
          f"{res.diffusion_reference:>10.4f}")

print()
print("closed-form drift b(z) = (1/2 + lam) z + K_(1-lam)(1/z)/K_lam(1/z):")
for lam, z in [(0.5, 1.0), (1.0, 2.0), (0.0, 0.5)]:
    drift, diff = my_generator_coefficients(lam, z)
    print(f"  b({z}; lam={lam}) = {drift:.6f},  diffusion = {diff:.2f}")
