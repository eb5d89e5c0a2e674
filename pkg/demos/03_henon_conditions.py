"""
Condition checks on the Henon-like family
==========================================

The dissipative theory wants sampled certificates: uniform bounds on the
tangent map over the reference region, expansion along pushed vectors,
hyperbolic times along orbits, and a well-defined most-contracted
direction.  Each check reports margins, not just booleans.
"""

import math

import numpy as np

from henonshift.henon import (
    HenonMap,
    check_G6,
    check_expansion_G4,
    h_times_check,
    iterate,
    lyapunov,
    most_contracted_direction,
    region_sample_U,
    tangent_cocycle,
)
from henonshift.params import Params

params = Params(M=100)
m = HenonMap(a=-2.0 + 1e-4, b=params.b, perturbation="classical")

# norm bounds over a sampled neighborhood of the invariant region
sample = region_sample_U(m, params, 4000, seed=7)
g6 = check_G6(m, sample, params)
print(f"norm bound:  sup|Tf| = {g6.sup_Tf:.4f}, sup|T^2 f| = {g6.sup_T2f:.4f},"
      f" bound {g6.bound:.1f}, ok = {g6.ok}")

# expansion + cone invariance on horizontal vectors near the right end,
# where |2x| comfortably beats the required rate e^c
xs = np.linspace(1.7, 1.99, 40)
g4 = check_expansion_G4(
    m, [((x, 0.0), (1.0, 0.0)) for x in xs], n_s=2, params=params
)
print(f"expansion:   pass fraction {g4.pass_fraction:.2f},"
      f" worst margin {g4.worst_margin:.3f}")

# hyperbolic times along the orbit of the expanding fixed point x = -1
tp = tangent_cocycle(m, (-1.0, 0.0), (1.0, 0.0), 40)
hyp = [n for n in range(1, 41) if h_times_check(tp, n, params)]
print(f"hyperbolic times at the fixed point: {len(hyp)}/40")

# ... and from a point whose early iterates visit the contracting middle
tp2 = tangent_cocycle(m, (1.8, 0.0), (1.0, 0.0), 12)
hyp2 = [n for n in range(1, 13) if h_times_check(tp2, n, params)]
print(f"hyperbolic times from x0 = 1.8:      {hyp2}")

# the most-contracted direction of Tf^k: at b = 0 it is the kernel line
m0 = HenonMap(a=-2.0, b=0.0)
e1, gap = most_contracted_direction(m0, (0.4, 0.0), 1)
print(f"contracted direction at x=0.4: {np.round(e1, 6)} "
      f"(kernel of [[2x, 1], [0, 0]]), singular gap {gap:.3f}")

# Lyapunov exponents: the chaotic benchmark and the degenerate line
mh = HenonMap(a=-1.4, b=0.3, perturbation="classical")
l1, l2 = lyapunov(mh, (0.0, 0.0), 300_000)
print(f"\nclassical attractor: l1 = {l1:.4f}, l2 = {l2:.4f},"
      f" sum = {l1 + l2:.6f} = log b = {math.log(0.3):.6f}")
l1c, l2c = lyapunov(m0, (0.13817, 0.0), 200_000)
print(f"a = -2 line:         l1 = {l1c:.4f} (log 2 = {math.log(2):.4f}),"
      f" l2 = {l2c}")

# orbits that leave the trapping region report their escape time
seg = iterate(HenonMap(a=3.0, b=0.0), (3.0, 0.0), 50)
print(f"escape bookkeeping: escaped={seg.escaped} at step {seg.escape_time}")
