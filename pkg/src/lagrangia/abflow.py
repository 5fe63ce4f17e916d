"""The integrable AB flow: closed forms, complex singular time and a trajectory oracle.

The horizontal part of the flow conserves the stream function
``psi = sin x1 cos x2``; with ``w = sin^2 x1`` the trajectory equation
becomes separable, and the time to reach the nearest complex singularity
is an elliptic-type integral.  This module evaluates that integral by
quadrature and integrates trajectories with an adaptive Runge-Kutta
scheme, independently of the Taylor-series machinery.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.integrate

from .euler import TrajectorySample
from .presets import ab_velocity_field, vector_field
from .spectral import SpectralField

SQRT2 = math.sqrt(2.0)


class StepUnderflow(ArithmeticError):
    """The adaptive integrator could not meet the tolerance with a representable step."""


@dataclass(frozen=True)
class ABState:
    """Stream value and ``w = sin^2 x1`` of a label, with the sign of ``cos x1``."""

    psi: float
    w: float
    cos_sign: int = 1

    @classmethod
    def of(cls, a) -> "ABState":
        a = np.asarray(a, float)
        return cls(float(ab_stream(a)), float(np.sin(a[0]) ** 2), 1 if np.cos(a[0]) >= 0 else -1)


def ab_velocity(x, vertical: bool = True) -> np.ndarray:
    """``(-sin x1 sin x2, -cos x1 cos x2, sqrt2 sin x1 cos x2)``; accepts ``(..., 3)`` arrays."""
    x = np.asarray(x, float)
    s1, c1, s2, c2 = np.sin(x[..., 0]), np.cos(x[..., 0]), np.sin(x[..., 1]), np.cos(x[..., 1])
    v3 = SQRT2 * s1 * c2 if vertical else np.zeros_like(s1)
    return np.stack([-s1 * s2, -c1 * c2, v3], axis=-1)


def ab_stream(x) -> np.ndarray | float:
    """Stream function ``sin x1 cos x2`` of the horizontal motion."""
    x = np.asarray(x, float)
    return np.sin(x[..., 0]) * np.cos(x[..., 1])


def ab_exact_taylor(s: int) -> SpectralField:
    """Closed-form first and second Taylor coefficients of the horizontal AB map."""
    if s == 1:
        return ab_velocity_field(vertical=False)
    if s == 2:
        return vector_field(
            [[(0.25, [("sin", 0, 2)])], [(-0.25, [("sin", 1, 2)])], []],
            dimension=2,
        )
    raise ValueError("closed forms are available for orders 1 and 2 only")


# ---------------------------------------------------------------------------
# Singular time


def _real_leg_integrand(theta, psi2):
    return 2.0 / np.sqrt(psi2 + (1.0 - psi2) * np.sin(theta) ** 2)


def _imag_leg_integrand(theta, psi2):
    return 2.0 / np.sqrt(1.0 - psi2 * np.cos(theta) ** 2)


def _gauss(f, lo: float, hi: float, nodes: int) -> float:
    x, w = np.polynomial.legendre.leggauss(nodes)
    mid, rad = 0.5 * (hi + lo), 0.5 * (hi - lo)
    return float(rad * np.sum(w * f(mid + rad * x)))


def ab_singular_time(psi: float, w0: float = 1.0, method: str = "quad", nodes: int = 64) -> complex:
    """Complex time at which the trajectory through ``(psi, w0)`` becomes singular.

    Twice the result is the integral of ``dw / sqrt(w (1-w) (w - psi^2))``
    from ``w0`` to 1 plus ``i`` times the integral of
    ``dw / sqrt(w (w-1) (w - psi^2))`` from 1 to infinity.  The substitutions
    ``w = psi^2 + (1 - psi^2) sin^2 theta`` and ``w = sec^2 theta`` make
    both integrands smooth.

    Parameters
    ----------
    psi : float
        Stream-function value, ``|psi| <= 1``.
    w0 : float
        Starting value of ``sin^2 x1``, in ``[psi^2, 1]``.
    method : {"quad", "gauss"}
        Adaptive Gauss-Kronrod (absolute tolerance 1e-10) or fixed
        Gauss-Legendre with ``nodes`` points per leg.
    """
    psi2 = float(psi) ** 2
    if psi2 > 1.0:
        raise ValueError("|psi| must not exceed 1")
    if not (psi2 - 1e-15 <= w0 <= 1.0 + 1e-15):
        raise ValueError(f"w0 must lie in [psi^2, 1] = [{psi2}, 1]")
    w0 = min(max(w0, psi2), 1.0)
    if psi2 == 1.0:
        return complex(0.0, math.inf)
    if w0 == 0.0:
        raise ValueError("the real-axis integral diverges at w0 = psi = 0 (stagnation line)")
    theta0 = math.asin(math.sqrt((w0 - psi2) / (1.0 - psi2)))
    legs = [(_real_leg_integrand, theta0, 0.5 * math.pi), (_imag_leg_integrand, 0.0, 0.5 * math.pi)]
    values = []
    for f, lo, hi in legs:
        if hi - lo <= 0:
            values.append(0.0)
        elif method == "quad":
            val, _ = scipy.integrate.quad(f, lo, hi, args=(psi2,), epsabs=1e-10, epsrel=1e-12, limit=200)
            values.append(val)
        elif method == "gauss":
            values.append(_gauss(lambda th: f(th, psi2), lo, hi, nodes))
        else:
            raise ValueError(f"unknown quadrature method {method!r}")
    return complex(values[0], values[1]) / 2.0


# ---------------------------------------------------------------------------
# Trajectory oracle


def _rk4(f, y, h):
    k1 = f(y)
    k2 = f(y + 0.5 * h * k1)
    k3 = f(y + 0.5 * h * k2)
    k4 = f(y + h * k3)
    return y + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)


def ab_trajectory_path(a, times, tol: float = 1e-10, vertical: bool = False) -> list[TrajectorySample]:
    """Positions at increasing ``times`` by step-doubling classical RK4.

    Each step is compared with two half steps; the local error estimate
    ``|y_half - y_full| / 15`` must stay below ``tol`` and the accepted
    value carries the Richardson correction.

    Raises
    ------
    StepUnderflow
        If the step shrinks below rounding level relative to the time.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    a = np.asarray(a, float)
    if a.shape == (2,):
        a = np.append(a, 0.0)
    times = [float(t) for t in times]
    f = lambda y: ab_velocity(y, vertical)  # noqa: E731
    y = a.copy()
    t = 0.0
    h = 1e-2
    out = []
    for target in times:
        direction = 1.0 if target >= t else -1.0
        while abs(target - t) > 0:
            step = direction * min(abs(h), abs(target - t))
            full = _rk4(f, y, step)
            half = _rk4(f, _rk4(f, y, 0.5 * step), 0.5 * step)
            err = float(np.max(np.abs(half - full))) / 15.0
            if err <= tol:
                t = target if abs(target - t) <= abs(step) else t + step
                y = half + (half - full) / 15.0
            fac = 4.0 if err == 0 else min(4.0, max(0.1, 0.9 * (tol / err) ** 0.2))
            h = abs(step) * fac if err > tol else max(abs(h), abs(step) * fac)
            if abs(h) < 1e-14 * max(1.0, abs(t)):
                raise StepUnderflow(f"step size underflow at t={t!r} from label {tuple(a)}")
        out.append(TrajectorySample(tuple(a), target, y.copy(), f(y), "ode"))
    return out


def ab_trajectory(a, t: float, tol: float = 1e-10, vertical: bool = False) -> TrajectorySample:
    """Position of the AB particle labelled ``a`` at time ``t``."""
    return ab_trajectory_path(a, [t], tol, vertical)[0]
