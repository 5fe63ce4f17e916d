"""Lagrangian Taylor coefficients for a potential Euler-Poisson (cold self-gravitating) flow.

The first coefficient is the gradient of a scalar potential.  Higher
orders follow the same transverse recurrence as the incompressible case
with zero initial vorticity, while the longitudinal part comes from mass
conservation combined with the Poisson equation.  That changes the
quadratic and cubic terms only through order-dependent weights
:func:`w2` and :func:`w3`; setting both to one recovers the incompressible
recurrence exactly.
"""

from __future__ import annotations

import numpy as np

from . import presets
from .euler import (
    TaylorSeries,
    _Engine,
    _cross,
    _degree_bound,
    _pcof,
    _contract,
    _mode_arrays,
    _scatter,
    _literal_box,
    defect_tail,
    evaluate_map,
    literal_cubic,
    ResidualReport,
    SeedError,
)
from .spectral import SpectralField, laplacian, norm, norm_record, spectral_derivative

WEIGHT_MODES = ("physical", "unit")


def _denominator(s: int) -> float:
    return s * s + (s - 3) / 2.0


def w2(n: int, s: int) -> float:
    """Weight of the quadratic term pairing orders ``n`` and ``s - n``.

    Lies in ``[1/2, 1)`` for ``1 <= n <= s - 1``.
    """
    if not 1 <= n <= s - 1:
        raise ValueError(f"need 1 <= n <= s - 1, got n={n}, s={s}")
    return (n * n + (s - n) ** 2 + (s - 3) / 2.0) / _denominator(s)


def w3(n1: int, n2: int, n3: int, s: int) -> float:
    """Weight of the cubic term with orders ``n1 + n2 + n3 = s``; lies in ``[1/3, 1)``."""
    if n1 + n2 + n3 != s or min(n1, n2, n3) < 1:
        raise ValueError(f"need positive orders summing to s, got {(n1, n2, n3)} and s={s}")
    return (n1 * n1 + n2 * n2 + n3 * n3 + (s - 3) / 2.0) / _denominator(s)


def ep_seed(potential: SpectralField) -> SpectralField:
    """First coefficient ``grad(phi)`` of the potential flow."""
    if not isinstance(potential, SpectralField) or potential.rank != 0:
        raise SeedError("the initial potential must be a scalar field")
    return spectral_derivative(potential, "grad")


class PoissonEngine(_Engine):
    """Grid evaluation of the weighted Euler-Poisson right-hand sides."""

    def __init__(self, coefficients, degree_bound, cap=None, weights: str = "physical"):
        if weights not in WEIGHT_MODES:
            raise ValueError(f"weights must be one of {WEIGHT_MODES}")
        super().__init__(coefficients, degree_bound, cap)
        self.weights = weights
        self._pcache: dict[int, np.ndarray] = {}

    def _cofactor_sum(self, k: int) -> np.ndarray:
        # sum_{a+b=k} pcof(G_a, G_b), both orders >= 1
        if k not in self._pcache:
            acc = 0.0
            for a in range(1, k // 2 + 1):
                term = _pcof(self.grad(a), self.grad(k - a))
                acc = acc + (term if 2 * a == k else 2.0 * term)
            self._pcache[k] = acc
        return self._pcache[k]

    def rhs_grids(self, s):
        unit = self.weights == "unit"
        curl = np.zeros((3,) + self.shape)
        div = np.zeros(self.shape)
        for n in range(1, s):
            Ga, Gb = self.grad(s - n), self.grad(n)
            if 2 * n > s:
                # pairs (n, s-n) folded as in the incompressible transverse sum
                w = (s - 2 * n) / s
                for k in range(3):
                    curl = curl - w * _cross(Ga[:, k], Gb[:, k])
            q = 1.0 if unit else w2(n, s)
            if not 0.0 < q <= 1.0:
                raise ArithmeticError(f"quadratic weight {q} out of (0, 1] at n={n}, s={s}")
            for i in range(3):
                for j in range(i + 1, 3):
                    div = div + q * (Ga[j, i] * Gb[i, j] - Ga[i, i] * Gb[j, j])
        if self.dimension == 3 and s >= 3:
            if unit:
                acc = sum(_contract(self._cofactor_sum(s - m), self.grad(m)) for m in range(1, s - 1))
                div = div - acc / 6.0
            else:
                plain = 0.0
                square = 0.0
                for m in range(1, s - 1):
                    c = _contract(self._cofactor_sum(s - m), self.grad(m))
                    plain = plain + c
                    square = square + (m * m) * c
                # bounds of the cubic weights: (s^2/3 + (s-3)/2) / D_s >= 1/3 and < 1
                lo = (s * s / 3.0 + (s - 3) / 2.0) / _denominator(s)
                if not 0.0 < lo <= 1.0:
                    raise ArithmeticError(f"cubic weights out of (0, 1] at s={s}")
                div = div - (3.0 * square + (s - 3) / 2.0 * plain) / (6.0 * _denominator(s))
        return curl, div


def literal_longitudinal_poisson(fields, s: int, weights: str = "physical") -> SpectralField:
    """Mode-sum form of the weighted longitudinal data (slow; for checks)."""
    unit = weights == "unit"
    triple = fields[0].dimension == 3
    half = _literal_box(fields, s, triple)
    out = np.zeros(tuple(2 * h + 1 for h in half), complex)
    for n in range(1, s):
        Pr, A = _mode_arrays(fields[s - n - 1])
        Pq, B = _mode_arrays(fields[n - 1])
        if len(Pr) == 0 or len(Pq) == 0:
            continue
        r = np.repeat(Pr, len(Pq), axis=0)
        q = np.tile(Pq, (len(Pr), 1))
        Ar = np.repeat(A, len(Pq), axis=0)
        Bq = np.tile(B, (len(Pr), 1))
        acc = np.zeros(len(r), complex)
        for i in range(3):
            for j in range(i + 1, 3):
                acc += (r[:, i] * q[:, j] - r[:, j] * q[:, i]) * Ar[:, i] * Bq[:, j]
        wt = 1.0 if unit else w2(n, s)
        _scatter(out, half, r + q, -1j * wt * acc)
    if triple:
        weight = (lambda *_: 1.0) if unit else w3
        out = out + literal_cubic(fields, s, weight)
    return SpectralField(out, fields[0].dimension)


def ep_compute_series(potential, S: int, cap: int | None = None, weights: str = "physical") -> TaylorSeries:
    """Taylor coefficients ``xi_1 .. xi_S`` of the potential Euler-Poisson flow.

    Parameters
    ----------
    potential : SpectralField or str
        Scalar initial potential or a preset name (``"two-mode"``, ``"one-d"``).
    S : int
        Highest order, at least 1.
    cap : int, optional
        Mode cap applied after every order.
    weights : {"physical", "unit"}
        ``"unit"`` replaces both weight families by one; used to check
        that the recurrence then coincides with the incompressible one.
    """
    if S < 1:
        raise ValueError("S must be at least 1")
    if weights not in WEIGHT_MODES:
        raise ValueError(f"weights must be one of {WEIGHT_MODES}")
    if isinstance(potential, str):
        potential = presets.potential_preset(potential)
    xi1 = ep_seed(potential).truncate(cap)
    gamma = norm(laplacian(potential), "l1")
    coeffs = [xi1]
    if xi1.is_zero():
        coeffs += [SpectralField.zeros(rank=1, dimension=xi1.dimension)] * (S - 1)
    else:
        engine = PoissonEngine(coeffs, _degree_bound(xi1.half, S, cap, xi1.dimension), cap, weights)
        for s in range(2, S + 1):
            engine.step(s)
        coeffs = engine.coefficients
    return TaylorSeries(
        problem="euler-poisson",
        coefficients=tuple(coeffs),
        norms=tuple(norm_record(c) for c in coeffs),
        gamma=float(gamma),
        truncated=any(c.truncated for c in coeffs),
        vorticity=None,
        cap=cap,
        weights=weights,
        meta={"potential": potential},
    )


ep_evaluate_map = evaluate_map


def ep_mass_residual(series: TaylorSeries, S: int, t: float) -> ResidualReport:
    """Tails of the mass/Poisson defect and of the (vorticity-free) Cauchy defect.

    Both defects are polynomials in the time variable whose low-order
    coefficients vanish by construction; the reported numbers are the l1
    norms of the remaining terms at ``t``.
    """
    if series.problem != "euler-poisson":
        raise ValueError("mass residual applies to Euler-Poisson series only")
    if t == 0:
        return ResidualReport(S, 0.0, cauchy_residual=0.0, mass_residual=0.0, problem=series.problem)
    return ResidualReport(
        S,
        float(t),
        cauchy_residual=defect_tail(series, S, "cauchy", t),
        mass_residual=defect_tail(series, S, "mass", t),
        problem=series.problem,
    )
