"""AB flow end to end: series, bounds, radius, singular time and trajectories.

The horizontal AB flow has an exactly known complex singularity at t = i*pi/2
for particles starting at stagnation points, so every estimate below can be
compared against a closed answer.

    python3 demos/ab_flow_walkthrough.py
"""

import math
import time

import numpy as np

from lagrangia import ab_singular_time, ab_trajectory, compute_series, evaluate_map, radius_estimate
from lagrangia.bounds import bound_table

S = 40

t0 = time.perf_counter()
series = compute_series("ab", S)
print(f"built {S} orders in {time.perf_counter() - t0:.2f} s, gamma = {series.gamma!r}")

norms = series.weighted_norms()
print("\norder  weighted norm")
for s in (1, 2, 3, 5, 10, 20, 40):
    print(f"{s:5d}  {norms[s - 1]:.6e}")

print("\nguaranteed convergence time per bound")
for r in bound_table(series.gamma, norms[0]):
    print(f"  {r.kind:<14} T_c = {r.T_critical:.6f}  t = {r.t_guaranteed:.6f}")

print("\nradius of convergence in t (exact value pi/2 = 1.570796)")
for method in ("ratio", "root-test"):
    est = radius_estimate(norms, method)
    print(f"  {method:<10} {est.value:.6f}  (orders {est.orders_used[0]}..{est.orders_used[-1]})")

t_star = ab_singular_time(0.0, 1.0)
print(f"\nsingular time at a stagnation point: {t_star.real!r} + {t_star.imag!r}i")
for psi in (0.25, 0.5, 0.75):
    ts = ab_singular_time(psi, 1.0)
    print(f"  psi = {psi:.2f}: |t_star| = {abs(ts):.6f}")

print("\nseries vs ODE (t = 2.0 lies beyond the radius pi/2)")
a = (math.pi / 4, math.pi / 4, 0.0)
for t in (0.3, 1.2, 2.0):
    x_s = evaluate_map(series, a, t).position
    x_o = ab_trajectory(a, t).position
    print(f"  t = {t}: |difference| = {np.abs(x_s - x_o).max():.2e}")
