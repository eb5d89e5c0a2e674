"""
Periodic-orbit censuses for the quadratic family
=================================================

At a = -2 the map x -> x^2 - 2 is conjugate to angle doubling, so the
period-p points sit at explicit cosines and must number exactly 2^p.
That gives a free exact oracle for the bracketing + Newton census, which
then keeps working at parameters where no formula exists.
"""

import math

import numpy as np

from henonshift.henon import HenonMap
from henonshift.orbits import (
    chebyshev_fixed_points,
    entropy_from_census,
    equidistribution_test,
    exceptional_bound,
    fixed_points_1d,
    periodic_orbits_2d,
)

print("solvable parameter a = -2")
for p in (4, 8, 12):
    oracle = chebyshev_fixed_points(p)
    found = fixed_points_1d(-2.0, p)
    gap = np.max(np.abs(np.sort(found) - np.sort(oracle)))
    print(f"  p={p:2d}  census {len(found):5d}  oracle {len(oracle):5d}"
          f"  max|census-oracle| = {gap:.2e}")

# entropy from the growth rate of the counts
counts = [(p, len(fixed_points_1d(-2.0, p))) for p in range(1, 11)]
est = entropy_from_census(counts)
print(f"  entropy fit {est.slope:.6f}  (log 2 = {math.log(2):.6f})")

# away from the solvable point the census is the only way to count;
# near-tangent root pairs are closer than 1e-3 here and still resolved
roots = fixed_points_1d(-1.9, 8)
gaps = np.diff(np.sort(roots))
print(f"\na = -1.9, p = 8: {len(roots)} points, min root gap {gaps.min():.2e}")

# period-14 points against the arcsine law (the maximizing measure)
x = chebyshev_fixed_points(14)
rep = equidistribution_test(x, reference="arcsine", statistic="KS")
mass = float(np.mean((x >= 1.0) & (x <= 2.0)))
print(f"period 14: KS distance to arcsine {rep.distance:.2e}, "
      f"mass of [1,2] = {mass:.5f} (exact 1/3 = {1/3:.5f})")

# a small dissipative perturbation keeps the horseshoe: counts persist
m = HenonMap(a=-2.0 + 1e-3, b=1e-6, perturbation="classical")
print("\nperturbed map a = -2 + 1e-3, b = 1e-6")
for p in (2, 4, 6):
    census = periodic_orbits_2d(m, p, grid=(1024, 4), refine_check=True)
    print(f"  p={p}  count {census.count_fix:3d}  stable under refinement:"
          f" {census.stable}")

# how many parameters can host a low-period sink: the counting bound
# loses to 2^p almost immediately
for p in (50, 200, 1000):
    b = exceptional_bound(p, 1000)
    print(f"  exceptional bound p={p:4d}: log(bound/2^p) = {b.log_ratio:9.2f}")
