"""Guaranteed-analyticity times from cubic majorant inequalities, and radius estimates.

The weighted coefficient norms ``c_s`` of a Lagrangian Taylor series feed a
generating function ``zeta(t) = sum_s c_s t^s``.  It obeys an inequality
of the form ``q3 zeta^3 + q2 zeta^2 - zeta + T >= 0`` with ``T = gamma t``;
as long as the cubic keeps a positive root below its stationary point,
``zeta`` stays bounded by that root.  The largest such ``T`` is the
critical dimensionless time.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass
from typing import Sequence

import numpy as np

SQRT2 = math.sqrt(2.0)
BISECTION_TOL = 1e-12

# (q3, q2) of the cubic for each bound family
CUBICS = {
    "l1": (1.0 / 6.0, 1.0 / SQRT2),
    "gevrey": (1.0 / 6.0, 1.0 / SQRT2),
    "normed-space": (6.0, 12.0),
}
BOUND_KINDS = ("l1", "l1-improved", "normed-space", "ab-2d", "gevrey")


def _cubic(q3: float, q2: float, T: float, z: float) -> float:
    return ((q3 * z + q2) * z - 1.0) * z + T


def stationary_point(q3: float, q2: float) -> float:
    """Positive zero of ``3 q3 z^2 + 2 q2 z - 1``."""
    if q3 < 0 or q2 <= 0:
        raise ValueError("need q3 >= 0 and q2 > 0")
    if q3 == 0:
        return 1.0 / (2.0 * q2)
    # stable form of (-q2 + sqrt(q2^2 + 3 q3)) / (3 q3)
    return 1.0 / (q2 + math.sqrt(q2 * q2 + 3.0 * q3))


def cubic_critical_T(q3: float, q2: float) -> float:
    """Largest ``T`` for which ``q3 z^3 + q2 z^2 - z + T`` still has a positive root."""
    z = stationary_point(q3, q2)
    return z - q2 * z * z - q3 * z**3


def _bisect(f, lo: float, hi: float, tol: float = BISECTION_TOL) -> float:
    flo = f(lo)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def cubic_bound_root(q3: float, q2: float, T: float) -> float | None:
    """Smallest nonnegative root of ``q3 z^3 + q2 z^2 - z + T``.

    Returns ``None`` once ``T`` exceeds the critical value, where the two
    positive roots have merged and left the real axis.

    Examples
    --------
    >>> cubic_bound_root(1/6, 2**-0.5, 0.0)
    0.0
    """
    if T < 0:
        raise ValueError("T must be nonnegative")
    if T == 0:
        return 0.0
    z_ext = stationary_point(q3, q2)
    f = lambda z: _cubic(q3, q2, T, z)  # noqa: E731
    if f(z_ext) > 0:
        return None
    return _bisect(f, 0.0, z_ext)


def cubic_upper_root(q3: float, q2: float, T: float) -> float | None:
    """The second positive root (above the stationary point), if it exists."""
    if T < 0:
        raise ValueError("T must be nonnegative")
    z_ext = stationary_point(q3, q2)
    f = lambda z: _cubic(q3, q2, T, z)  # noqa: E731
    if f(z_ext) > 0:
        return None
    if q3 == 0 and q2 == 0:
        return None
    hi = 2.0 * z_ext + 1.0
    while f(hi) <= 0:
        hi *= 2.0
    return _bisect(f, z_ext, hi)


def l1_discriminant(T: float) -> float:
    """Discriminant of ``z^3/6 + z^2/sqrt(2) - z + T`` up to a positive factor."""
    return -0.75 * T * T - (5.0 / SQRT2) * T + 7.0 / 6.0


@dataclass(frozen=True)
class BoundReport:
    kind: str
    T_critical: float
    zeta_root: float | None
    t_guaranteed: float
    sigma: float | None = None

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _solve_quadratic_time(a: float, target: float) -> float:
    """Positive root of ``a T^2 + T = target`` (``a < 0``), nearest to zero."""
    disc = 1.0 + 4.0 * a * target
    return 2.0 * target / (1.0 + math.sqrt(disc))


def critical_T(kind: str) -> float:
    """Critical dimensionless time for one bound family."""
    if kind in ("l1", "gevrey", "normed-space"):
        return cubic_critical_T(*CUBICS[kind])
    if kind == "l1-improved":
        # the refined majorant gives (1/2 - 1/sqrt2) T^2 + T <= T_c(l1)
        return _solve_quadratic_time(0.5 - 1.0 / SQRT2, cubic_critical_T(*CUBICS["l1"]))
    if kind == "ab-2d":
        # two-dimensional bound with AB data: (1/4 - 1/sqrt2) T^2 + T <= 1/(2 sqrt2)
        return _solve_quadratic_time(0.25 - 1.0 / SQRT2, 1.0 / (2.0 * SQRT2))
    raise ValueError(f"unknown bound kind {kind!r}; choose from {BOUND_KINDS}")


def critical_time(kind: str, scale: float, T: float | None = None, sigma: float | None = None) -> BoundReport:
    """Critical time of a bound family for data with the given scale.

    ``scale`` is the vorticity norm ``gamma`` (its Gevrey version for
    ``"gevrey"``, the velocity-gradient norm for ``"normed-space"``).
    ``zeta_root`` is the bound on the generating function at dimensionless
    time ``T`` (default: half the critical time).
    """
    if not scale > 0:
        raise ValueError("scale must be positive")
    Tc = critical_T(kind)
    if T is None:
        T = 0.5 * Tc
    q3, q2 = CUBICS.get(kind, CUBICS["l1"])
    root = cubic_bound_root(q3, q2, T) if T <= Tc else None
    return BoundReport(kind, Tc, root, Tc / scale, sigma if kind == "gevrey" else None)


def bound_table(scale: float, grad_scale: float | None = None) -> list[BoundReport]:
    """Reports for the fixed-constant bounds.

    ``grad_scale`` is the velocity-gradient norm used by ``"normed-space"``;
    it defaults to ``scale``.
    """
    grad_scale = scale if grad_scale is None else grad_scale
    return [critical_time(k, grad_scale if k == "normed-space" else scale) for k in ("l1", "l1-improved", "ab-2d", "normed-space")]


def partial_sums(norms: Sequence[float], t: float) -> np.ndarray:
    """``sum_{s <= S} c_s t^s`` for every ``S``."""
    c = np.asarray(norms, float)
    powers = t ** np.arange(1, len(c) + 1)
    return np.cumsum(c * powers)


def bound_holds(norms: Sequence[float], gamma: float, t: float, slack: float = 1e-9) -> bool:
    """Whether every partial sum of the generating function lies below the l1 root."""
    T = gamma * t
    root = cubic_bound_root(*CUBICS["l1"], T)
    if root is None:
        return False
    return bool(np.all(partial_sums(norms, t) <= root + slack))


# ---------------------------------------------------------------------------
# Radius of convergence


RADIUS_METHODS = ("ratio", "domb-sykes", "root-test")


@dataclass(frozen=True)
class RadiusEstimate:
    method: str
    value: float
    orders_used: tuple[int, int]
    confidence: float
    stride: int = 1

    @property
    def flagged(self) -> bool:
        """Set when alternate orders were skipped because of a parity pattern."""
        return self.stride != 1

    def to_dict(self) -> dict:
        d = asdict(self)
        d["orders_used"] = list(self.orders_used)
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _fit(x: np.ndarray, y: np.ndarray) -> tuple[float, float, float]:
    A = np.vstack([np.ones_like(x), x]).T
    coef, *_ = np.linalg.lstsq(A, y, rcond=None)
    resid = float(np.sqrt(np.mean((A @ coef - y) ** 2)))
    return float(coef[0]), float(coef[1]), resid


def radius_estimate(norms: Sequence[float], method: str = "ratio", tail: float = 0.5) -> RadiusEstimate:
    """Radius of convergence of ``sum_s c_s t^s`` from ``c_1 .. c_S``.

    ``"ratio"``/``"domb-sykes"`` fits ``c_s / c_{s-1}`` linearly in ``1/s``
    and inverts the intercept; ``"root-test"`` fits ``log c_s`` linearly in
    ``s``.  Only the last ``tail`` fraction of orders enters the fit.  When
    every other norm vanishes the fit runs on the nonzero stride-2
    subsequence and the result is flagged.
    """
    if method not in RADIUS_METHODS:
        raise ValueError(f"unknown method {method!r}; choose from {RADIUS_METHODS}")
    c = np.asarray(norms, float)
    orders = np.arange(1, len(c) + 1)
    nz = c > 0
    if nz.sum() < 6:
        raise ValueError("at least 6 nonzero norms are required")
    stride = 1
    if nz.sum() < len(c) and (np.all(nz[::2]) and not np.any(nz[1::2]) or np.all(nz[1::2]) and not np.any(nz[::2])):
        stride = 2
    elif not np.all(nz[np.argmax(nz):]):
        raise ValueError("norm sequence has isolated zeros; cannot estimate a radius")
    keep = nz
    s, v = orders[keep], c[keep]
    start = int(len(s) * (1.0 - tail))
    start = min(start, len(s) - 4)
    s, v = s[start:], v[start:]
    if method == "root-test":
        a, b, resid = _fit(s.astype(float), np.log(v))
        value = math.exp(-b)
    else:
        ratios = v[1:] / v[:-1]
        a, b, resid = _fit(1.0 / s[1:].astype(float), ratios)
        limit = a if a > 0 else ratios[-1]
        # successive kept orders differ by the stride
        value = limit ** (-1.0 / stride)
    if not (math.isfinite(value) and value > 0):
        raise ArithmeticError("radius fit did not produce a positive finite value")
    return RadiusEstimate(method, float(value), (int(s[0]), int(s[-1])), resid, stride)
