"""Invariant residuals of truncated Taylor-Green maps.

Truncating the series after order S leaves a Jacobian defect whose time
polynomial starts at order S+1 and a Cauchy-invariant defect starting at
order S. The residual at a fixed time therefore shrinks geometrically as S
grows; this script prints the per-order defect sizes and the residuals.

    python3 demos/taylor_green_residuals.py
"""

from lagrangia import compute_series
from lagrangia.euler import defect_coefficients, residuals
from lagrangia.spectral import norm

S_MAX = 10
series = compute_series("taylor-green", S_MAX)
g = series.gamma
t = 0.1 / g
print(f"gamma = {g!r}, evaluation time t = {t:.6f}")

S = 6
print(f"\ndefect coefficient norms for S = {S} (divided by gamma**n)")
print("   n      cauchy    jacobian")
C = defect_coefficients(series, S, "cauchy")
J = defect_coefficients(series, S, "jacobian")
for n in range(S + 3):
    print(f"{n:4d}  {norm(C[n]) / g ** max(n, 1):10.2e}  {norm(J[n]) / g ** max(n, 1):10.2e}")

print("\n   S      cauchy    jacobian")
for S in range(2, S_MAX + 1, 2):
    r = residuals(series, S, t)
    print(f"{S:4d}  {r.cauchy_residual:10.2e}  {r.jacobian_residual:10.2e}")
