"""Euler-Poisson series: planar exactness and a genuinely 2D potential.

A potential that depends on one coordinate only gives a displacement that is
exactly linear in the time variable, so every coefficient past the first
vanishes. A two-mode potential instead produces the familiar 3/7 second-order
coefficient and a nonzero transverse part from third order on.

    python3 demos/zeldovich_exactness.py
"""

from lagrangia import ep_compute_series, ep_mass_residual, radius_estimate
from lagrangia.euler import transverse_rhs
from lagrangia.spectral import norm

planar = ep_compute_series("one-d", 10)
print("planar potential, weighted norm per order:")
print("  " + " ".join(f"{v:.1e}" for v in planar.weighted_norms()))

two = ep_compute_series("two-mode", 20)
print(f"\ntwo-mode potential, gamma = {two.gamma!r}")
for s in (2, 3, 4):
    print(f"  order {s}: weighted norm {two.weighted_norms()[s - 1]:.6e}, transverse source {norm(transverse_rhs(s, two)):.3e}")

tau = 0.05 / two.gamma
print(f"\nmass residual at tau = {tau:.4f}")
for S in (4, 6, 8, 10):
    print(f"  S = {S:2d}: {ep_mass_residual(two, S, tau).mass_residual:.3e}")

est = radius_estimate(two.weighted_norms())
print(f"\nestimated radius in tau: {est.value:.4f} (orders {est.orders_used[0]}..{est.orders_used[-1]})")
