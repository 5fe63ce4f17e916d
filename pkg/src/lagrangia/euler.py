"""Time-Taylor coefficients of the Lagrangian displacement for incompressible Euler flow.

The displacement ``xi(a, t) = x(a, t) - a`` is expanded as
``sum_s xi_s(a) t**s``.  Given ``xi_1 .. xi_{s-1}``, the Cauchy invariants
fix the curl of ``xi_s`` and volume conservation fixes its divergence;
both are quadratic or cubic in the gradients of lower orders.  The
coefficient is then rebuilt from its transverse and longitudinal Fourier
data.

Products of gradient fields are formed on a physical grid sized so that
every product is resolved exactly (see :mod:`lagrangia.spectral`).  A
``literal=True`` path evaluates the same right-hand sides as explicit sums
over Fourier modes; it is slow and exists for cross-validation.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field, replace
from typing import Callable, Mapping, Sequence

import numpy as np
import scipy.fft

from . import presets
from .spectral import (
    SpectralError,
    SpectralField,
    NormRecord,
    evaluate_at,
    fft_workers,
    from_grid,
    grid_shape,
    helmholtz_combine,
    norm,
    norm_record,
    spectral_derivative,
    to_grid,
)

SEED_TOL = 1e-12


class SeedError(SpectralError):
    """Initial data rejected (not divergence-free, nonzero mean, wrong rank)."""


@dataclass(frozen=True, eq=False)
class TaylorSeries:
    """Taylor coefficients ``xi_1 .. xi_S`` plus per-order norms.

    ``coefficients[0]`` is ``xi_1``.  ``gamma`` is the l1 Fourier norm of
    the initial vorticity for Euler runs and of ``laplacian(phi)`` for
    Euler-Poisson runs; it sets the dimensionless time ``T = gamma * t``.
    """

    problem: str
    coefficients: tuple[SpectralField, ...]
    norms: tuple[NormRecord, ...]
    gamma: float
    truncated: bool = False
    vorticity: SpectralField | None = None
    cap: int | None = None
    weights: str = "physical"
    meta: Mapping = field(default_factory=dict)

    @classmethod
    def from_coefficients(cls, coefficients, problem: str = "euler", **kwargs) -> "TaylorSeries":
        """Wrap given coefficients ``xi_1 ..`` without running any recurrence."""
        coefficients = tuple(coefficients)
        if not coefficients:
            raise ValueError("at least one coefficient is required")
        kwargs.setdefault("gamma", norm(coefficients[0], "weighted"))
        return cls(
            problem=problem,
            coefficients=coefficients,
            norms=tuple(norm_record(c) for c in coefficients),
            truncated=any(c.truncated for c in coefficients),
            **kwargs,
        )

    @property
    def order(self) -> int:
        return len(self.coefficients)

    @property
    def dimension(self) -> int:
        return self.coefficients[0].dimension

    def coefficient(self, s: int) -> SpectralField:
        """The order-``s`` coefficient (1-based)."""
        if not 1 <= s <= self.order:
            raise IndexError(f"order {s} not in 1..{self.order}")
        return self.coefficients[s - 1]

    def weighted_norms(self) -> np.ndarray:
        return np.array([n.weighted for n in self.norms])

    def l1_norms(self) -> np.ndarray:
        return np.array([n.l1 for n in self.norms])

    def head(self, S: int) -> "TaylorSeries":
        """The series truncated after order ``S``."""
        if not 1 <= S <= self.order:
            raise ValueError(f"cannot truncate a series of order {self.order} to {S}")
        return replace(self, coefficients=self.coefficients[:S], norms=self.norms[:S])

    def extended(self, xi: SpectralField) -> "TaylorSeries":
        return replace(
            self,
            coefficients=self.coefficients + (xi,),
            norms=self.norms + (norm_record(xi),),
            truncated=self.truncated or xi.truncated,
        )


@dataclass(frozen=True)
class TrajectorySample:
    label: tuple[float, float, float]
    time: float
    position: np.ndarray
    velocity: np.ndarray
    source: str = "taylor"


@dataclass(frozen=True)
class ResidualReport:
    order_S: int
    time_t: float
    cauchy_residual: float | None = None
    jacobian_residual: float | None = None
    mass_residual: float | None = None
    problem: str = "euler"


# ---------------------------------------------------------------------------
# Seeding


def _require_mean_free(f: SpectralField, what: str) -> None:
    if np.sqrt(np.sum(np.abs(f.mean()) ** 2)) > SEED_TOL:
        raise SeedError(f"{what} must have zero spatial mean")


def _divergence_size(f: SpectralField) -> float:
    return float(np.max(spectral_derivative(f, "div").modulus(), initial=0.0))


def seed(initial) -> tuple[SpectralField, SpectralField]:
    """First Taylor coefficient and initial vorticity from initial data.

    ``initial`` is a velocity field, a mapping with one of the keys
    ``"velocity"`` / ``"vorticity"``, or a preset name.  Returns
    ``(xi_1, omega_init)``.
    """
    if isinstance(initial, str):
        initial = {"velocity": presets.euler_preset(initial)}
    elif isinstance(initial, SpectralField):
        initial = {"velocity": initial}
    if not isinstance(initial, Mapping) or len(initial) != 1:
        raise SeedError("initial data must name exactly one of 'velocity' or 'vorticity'")
    (kind, f), = initial.items()
    if not isinstance(f, SpectralField) or f.rank != 1:
        raise SeedError(f"{kind} must be a vector field")
    _require_mean_free(f, kind)
    if kind == "velocity":
        if _divergence_size(f) > SEED_TOL:
            raise SeedError("initial velocity is not divergence-free")
        return f, spectral_derivative(f, "curl")
    if kind == "vorticity":
        if _divergence_size(f) > SEED_TOL:
            raise SeedError("initial vorticity has nonzero divergence")
        r_perp = f * (-1j)
        r_par = SpectralField.zeros(rank=0, dimension=f.dimension)
        return helmholtz_combine(r_perp, r_par), f
    raise SeedError(f"unknown initial data kind {kind!r}")


# ---------------------------------------------------------------------------
# Grid engine


def _gradient_samples(f: SpectralField, shape) -> np.ndarray:
    # complex samples only for fields without conjugate symmetry (single-mode checks)
    return to_grid(spectral_derivative(f, "grad"), shape, real=f.is_hermitian(1e-13))


def _pair_degree(halves: Sequence[np.ndarray], s: int) -> np.ndarray:
    """Per-axis bound on the box of products of orders summing to ``s``."""
    best = np.zeros(3, int)
    for m in range(1, s):
        best = np.maximum(best, halves[m] + halves[s - m])
    return best


def _triple_degree(halves: Sequence[np.ndarray], s: int) -> np.ndarray:
    best = np.zeros(3, int)
    for a in range(1, s - 1):
        for b in range(1, s - a):
            best = np.maximum(best, halves[a] + halves[b] + halves[s - a - b])
    return best


def _cross(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    return np.stack([u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]])


class _Engine:
    """Shared bookkeeping: coefficients, gradient samples and the product grid."""

    def __init__(self, coefficients: Sequence[SpectralField], degree_bound, cap: int | None):
        self.coefficients = list(coefficients)
        self.dimension = self.coefficients[0].dimension
        self.cap = cap
        self.shape = grid_shape(degree_bound)
        self.capacity = np.array([(n - 1) // 2 for n in self.shape])
        self.samples: dict[int, np.ndarray] = {}

    def halves(self) -> list[np.ndarray]:
        return [np.zeros(3, int)] + [np.array(c.half) for c in self.coefficients]

    def grad(self, m: int) -> np.ndarray:
        if m not in self.samples:
            self.samples[m] = _gradient_samples(self.coefficients[m - 1], self.shape)
        return self.samples[m]

    def rhs_degree(self, s: int) -> np.ndarray:
        h = self.halves()
        deg = _pair_degree(h, s)
        if self.dimension == 3:
            deg = np.maximum(deg, _triple_degree(h, s))
        if np.any(deg > self.capacity):
            raise SpectralError("product grid too small for this order")
        return deg

    def rhs_grids(self, s: int) -> tuple[np.ndarray, np.ndarray]:
        raise NotImplementedError

    def fourier_data(self, s: int) -> tuple[SpectralField, SpectralField]:
        """Transverse ``p x xi_p`` and longitudinal ``p . xi_p`` data of order ``s``."""
        if s < 2:
            raise ValueError("right-hand sides are defined for s >= 2; order 1 is the seed")
        if len(self.coefficients) < s - 1:
            raise ValueError(f"orders 1..{s - 1} are required for order {s}")
        deg = self.rhs_degree(s)
        curl, div = self.rhs_grids(s)
        truncated = any(c.truncated for c in self.coefficients[: s - 1])
        curl_f = from_grid(curl, deg, self.dimension, truncated)
        div_f = from_grid(div, deg, self.dimension, truncated)
        return curl_f * (-1j), div_f * (-1j)

    def step(self, s: int) -> SpectralField:
        r_perp, r_par = self.fourier_data(s)
        xi = helmholtz_combine(r_perp, r_par).truncate(self.cap)
        if len(self.coefficients) == s - 1:
            self.coefficients.append(xi)
        return xi


class EulerEngine(_Engine):
    """Right-hand sides of the incompressible recurrences in physical space."""

    def __init__(self, coefficients, degree_bound, cap=None):
        super().__init__(coefficients, degree_bound, cap)
        self._cross_cache: dict[int, np.ndarray] = {}

    def _column_cross(self, k: int) -> np.ndarray:
        # sum_{m+n=k} grad(xi_m[1]) x grad(xi_n[2])
        if k not in self._cross_cache:
            acc = 0.0
            for m in range(1, k):
                acc = acc + _cross(self.grad(m)[:, 1], self.grad(k - m)[:, 2])
            self._cross_cache[k] = acc
        return self._cross_cache[k]

    def rhs_grids(self, s):
        curl = np.zeros((3,) + self.shape)
        div = np.zeros(self.shape)
        for m in range(1, s):
            Gm, Gn = self.grad(m), self.grad(s - m)
            if 2 * m < s:
                w = (2 * m - s) / s
                # term m and term s-m coincide; the overall factor -1/2 cancels the pairing
                for k in range(3):
                    curl = curl - w * _cross(Gm[:, k], Gn[:, k])
            for i in range(3):
                for j in range(i + 1, 3):
                    div = div + Gm[j, i] * Gn[i, j] - Gm[i, i] * Gn[j, j]
        if self.dimension == 3:
            for l in range(1, s - 1):
                div = div - np.einsum("i...,i...->...", self.grad(l)[:, 0], self._column_cross(s - l))
        return curl, div


# ---------------------------------------------------------------------------
# Literal Fourier sums (debug path)


def _mode_arrays(f: SpectralField) -> tuple[np.ndarray, np.ndarray]:
    modes = f.modes()
    if not modes:
        return np.zeros((0, 3)), np.zeros((0,) + f.rank_shape, complex)
    return np.array([p for p, _ in modes], float), np.stack([c for _, c in modes])


def _scatter(out: np.ndarray, half, P: np.ndarray, values: np.ndarray) -> None:
    idx = tuple(P[:, ax].astype(int) + half[ax] for ax in range(3))
    if values.ndim == 1:
        np.add.at(out, idx, values)
    else:
        for c in range(values.shape[1]):
            np.add.at(out[c], idx, values[:, c])


def _literal_box(fields: Sequence[SpectralField], s: int, triple: bool) -> tuple:
    halves = [np.zeros(3, int)] + [np.array(f.half) for f in fields]
    deg = _pair_degree(halves, s)
    if triple:
        deg = np.maximum(deg, _triple_degree(halves, s))
    return tuple(int(v) for v in deg)


def literal_transverse(fields: Sequence[SpectralField], s: int, weight: Callable[[int, int], float]) -> SpectralField:
    """``-(i/2) sum_m w(m) sum_r (A.B) (r x q)`` with ``A = xi_m(r)``, ``B = xi_{s-m}(q)``."""
    half = _literal_box(fields, s, False)
    out = np.zeros((3,) + tuple(2 * h + 1 for h in half), complex)
    for m in range(1, s):
        Pr, A = _mode_arrays(fields[m - 1])
        Pq, B = _mode_arrays(fields[s - m - 1])
        if len(Pr) == 0 or len(Pq) == 0:
            continue
        r = np.repeat(Pr, len(Pq), axis=0)
        q = np.tile(Pq, (len(Pr), 1))
        AB = np.einsum("ai,bi->ab", A, B).ravel()
        vals = -0.5j * weight(m, s) * AB[:, None] * np.cross(r, q)
        _scatter(out, half, r + q, vals)
    return SpectralField(out, fields[0].dimension)


def literal_cubic(fields: Sequence[SpectralField], s: int, weight: Callable[[int, int, int, int], float]) -> np.ndarray:
    """``(1/6) sum w [r1, r2, r3][A, B, C]`` over ordered order-triples; returns the padded array."""
    half = _literal_box(fields, s, True)
    out = np.zeros(tuple(2 * h + 1 for h in half), complex)
    for n1 in range(1, s - 1):
        for n2 in range(1, s - n1):
            n3 = s - n1 - n2
            P1, A = _mode_arrays(fields[n1 - 1])
            P2, B = _mode_arrays(fields[n2 - 1])
            P3, C = _mode_arrays(fields[n3 - 1])
            if min(len(P1), len(P2), len(P3)) == 0:
                continue
            rr = np.einsum("ai,bj,ck,ijk->abc", P1, P2, P3, _EPS)
            cc = np.einsum("ai,bj,ck,ijk->abc", A, B, C, _EPS)
            vals = (weight(n1, n2, n3, s) / 6.0) * (rr * cc)
            p = P1[:, None, None, :] + P2[None, :, None, :] + P3[None, None, :, :]
            _scatter(out, half, p.reshape(-1, 3), vals.ravel())
    return out


_EPS = np.zeros((3, 3, 3))
_EPS[0, 1, 2] = _EPS[1, 2, 0] = _EPS[2, 0, 1] = 1.0
_EPS[0, 2, 1] = _EPS[2, 1, 0] = _EPS[1, 0, 2] = -1.0


def _euler_transverse_weight(m: int, s: int) -> float:
    return (2 * m - s) / s


def literal_longitudinal_euler(fields: Sequence[SpectralField], s: int) -> SpectralField:
    """Symmetrised mode sum: ``-(i/2) sum (r x q).(A x B) + (1/6) sum [r1,r2,r3][A,B,C]``."""
    triple = fields[0].dimension == 3
    half = _literal_box(fields, s, triple)
    out = np.zeros(tuple(2 * h + 1 for h in half), complex)
    for m in range(1, s):
        Pr, A = _mode_arrays(fields[m - 1])
        Pq, B = _mode_arrays(fields[s - m - 1])
        if len(Pr) == 0 or len(Pq) == 0:
            continue
        r = np.repeat(Pr, len(Pq), axis=0)
        q = np.tile(Pq, (len(Pr), 1))
        AxB = np.cross(np.repeat(A, len(Pq), axis=0), np.tile(B, (len(Pr), 1)))
        vals = -0.5j * np.einsum("ai,ai->a", np.cross(r, q), AxB)
        _scatter(out, half, r + q, vals)
    if triple:
        out = out + literal_cubic(fields, s, lambda *_: 1.0)
    return SpectralField(out, fields[0].dimension)


# ---------------------------------------------------------------------------
# Public recurrence API


def _series_engine(series: TaylorSeries, s: int) -> _Engine:
    if s < 2:
        raise ValueError("right-hand sides are defined for s >= 2; order 1 is the seed")
    if series.order < s - 1:
        raise ValueError(f"orders 1..{s - 1} are required for order {s}")
    coeffs = series.coefficients[: s - 1]
    halves = [np.zeros(3, int)] + [np.array(c.half) for c in coeffs]
    deg = _pair_degree(halves, s)
    if coeffs[0].dimension == 3:
        deg = np.maximum(deg, _triple_degree(halves, s))
    if series.problem == "euler-poisson":
        from .poisson import PoissonEngine

        return PoissonEngine(coeffs, deg, series.cap, weights=series.weights)
    return EulerEngine(coeffs, deg, series.cap)


def transverse_rhs(s: int, series: TaylorSeries, literal: bool = False) -> SpectralField:
    """Transverse Fourier data ``p x xi_s`` implied by orders ``1 .. s-1``."""
    if literal:
        _series_engine(series, s)  # argument checks
        return literal_transverse(series.coefficients[: s - 1], s, _euler_transverse_weight)
    return _series_engine(series, s).fourier_data(s)[0]


def longitudinal_rhs(s: int, series: TaylorSeries, literal: bool = False) -> SpectralField:
    """Longitudinal Fourier data ``p . xi_s`` implied by orders ``1 .. s-1``."""
    if literal:
        _series_engine(series, s)
        if series.problem == "euler-poisson":
            from .poisson import literal_longitudinal_poisson

            return literal_longitudinal_poisson(series.coefficients[: s - 1], s, series.weights)
        return literal_longitudinal_euler(series.coefficients[: s - 1], s)
    return _series_engine(series, s).fourier_data(s)[1]


def next_coefficient(s: int, series: TaylorSeries) -> SpectralField:
    """The order-``s`` coefficient from its transverse and longitudinal data."""
    return _series_engine(series, s).step(s)


def _degree_bound(seed_half, S: int, cap: int | None, dimension: int) -> np.ndarray:
    bound = np.array(seed_half) * S
    if cap is not None:
        bound = np.minimum(bound, (3 if dimension == 3 else 2) * cap)
    return bound


def series_from_seed(
    xi1: SpectralField,
    S: int,
    cap: int | None = None,
    vorticity: SpectralField | None = None,
    gamma: float | None = None,
) -> TaylorSeries:
    """Run the incompressible recurrences from a given first coefficient.

    No incompressibility check is made on ``xi1``; :func:`compute_series`
    is the validated entry point.
    """
    if S < 1:
        raise ValueError("S must be at least 1")
    xi1 = xi1.truncate(cap)
    if vorticity is None:
        vorticity = SpectralField.zeros(rank=1, dimension=xi1.dimension)
    if gamma is None:
        gamma = norm(vorticity, "l1")
    coeffs = [xi1]
    if xi1.is_zero():
        coeffs += [SpectralField.zeros(rank=1, dimension=xi1.dimension)] * (S - 1)
    else:
        engine = EulerEngine(coeffs, _degree_bound(xi1.half, S, cap, xi1.dimension), cap)
        for s in range(2, S + 1):
            engine.step(s)
        coeffs = engine.coefficients
    return TaylorSeries(
        problem="euler",
        coefficients=tuple(coeffs),
        norms=tuple(norm_record(c) for c in coeffs),
        gamma=float(gamma),
        truncated=any(c.truncated for c in coeffs),
        vorticity=vorticity,
        cap=cap,
    )


def compute_series(initial, S: int, cap: int | None = None) -> TaylorSeries:
    """Taylor coefficients ``xi_1 .. xi_S`` for incompressible Euler flow.

    Parameters
    ----------
    initial : SpectralField, mapping or str
        Initial velocity, ``{"vorticity": field}`` or a preset name
        (``"ab"``, ``"ab3"``, ``"taylor-green"``).
    S : int
        Highest order, at least 1.
    cap : int, optional
        Drop modes with ``|p|_inf > cap`` after every order.
    """
    if S < 1:
        raise ValueError("S must be at least 1")
    xi1, omega = seed(initial)
    return series_from_seed(xi1, S, cap, vorticity=omega, gamma=norm(omega, "l1"))


def evaluate_map(series: TaylorSeries, a, t: float, S: int | None = None) -> TrajectorySample:
    """Position ``a + sum_s xi_s(a) t^s`` and velocity by Horner evaluation."""
    S = series.order if S is None else S
    a = np.asarray(a, dtype=float)
    if a.shape[-1] == 2:
        a = np.append(a, 0.0)
    values = [evaluate_at(series.coefficient(s), a) for s in range(1, S + 1)]
    disp = np.zeros(3)
    vel = np.zeros(3)
    for s in range(S, 0, -1):
        disp = (disp + values[s - 1]) * t
    for s in range(S, 0, -1):
        vel = vel * t + s * values[s - 1]
    return TrajectorySample(tuple(a), float(t), a + disp, vel, "taylor")


# ---------------------------------------------------------------------------
# Invariant defects


def _pcof(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Polarised cofactor ``P[j, i] = eps_jmn eps_ikl A[m, k] B[n, l]``."""
    nxt = ((1, 2), (2, 0), (0, 1))
    rows = []
    for j in range(3):
        m, n = nxt[j]
        row = []
        for i in range(3):
            k, l = nxt[i]
            row.append(
                A[m, k] * B[n, l] - A[m, l] * B[n, k] - A[n, k] * B[m, l] + A[n, l] * B[m, k]
            )
        rows.append(np.broadcast_arrays(*row))
    return np.array(rows)


def _contract(P: np.ndarray, C: np.ndarray) -> np.ndarray:
    return np.einsum("ji...,ji...->...", P, C)


def _identity_grid() -> np.ndarray:
    return np.eye(3).reshape(3, 3, 1, 1, 1)


def cofactor_series_grids(F: Sequence[np.ndarray], lam: Sequence[float], nmax: int) -> list[np.ndarray]:
    """``out[n] = sum_{k+c=n} < P_k, lam_c F_c >`` with ``P_k = sum_{a+b=k} pcof(F_a, F_b)``.

    ``F[0]`` is the identity; ``F[s]`` are gradient samples.  Used for the
    Jacobian (``lam = 1/6``) and for the Euler-Poisson mass equation.
    """
    S = len(F) - 1
    shape = np.broadcast_shapes(*[f.shape for f in F])[2:]
    out = [np.zeros(shape) for _ in range(nmax + 1)]
    for k in range(0, 2 * S + 1):
        if k > nmax:
            break
        P = 0.0
        for a in range(max(0, k - S), k // 2 + 1):
            b = k - a
            term = _pcof(F[a], F[b])
            P = P + (term if a == b else 2.0 * term)
        for c in range(0, S + 1):
            if k + c > nmax or lam[c] == 0:
                continue
            out[k + c] += lam[c] * _contract(P, F[c])
    return out


def _gradient_grids(series: TaylorSeries, S: int, mult: int) -> tuple[list[np.ndarray], tuple]:
    H = np.zeros(3, int)
    for c in series.coefficients[:S]:
        H = np.maximum(H, c.half)
    deg = tuple(int(v) for v in mult * H)
    shape = grid_shape(deg)
    F = [_identity_grid()] + [_gradient_samples(series.coefficient(s), shape) for s in range(1, S + 1)]
    return F, deg


@functools.lru_cache(maxsize=2)
def _defect_grids(series: TaylorSeries, S: int, kind: str) -> tuple[tuple[np.ndarray, ...], tuple]:
    if not 1 <= S <= series.order:
        raise ValueError(f"S must lie in 1..{series.order}")
    if kind == "cauchy":
        F, deg = _gradient_grids(series, S, 2)
        shape = F[1].shape[2:]
        out = [np.zeros((3,) + shape) for _ in range(2 * S)]
        for b in range(0, S):
            Gb = F[b + 1]
            for c in range(0, S + 1):
                Fc = np.broadcast_to(F[c], (3, 3) + shape)
                acc = sum(_cross(Gb[:, k], Fc[:, k]) for k in range(3))
                out[b + c] += (b + 1) * acc
        if series.vorticity is not None and not series.vorticity.is_zero():
            out[0] -= to_grid(series.vorticity, shape, real=True)
        return tuple(out), deg
    mult = 3 if series.dimension == 3 else 2
    F, deg = _gradient_grids(series, S, mult)
    nmax = mult * S
    if kind == "jacobian":
        lam = [1.0 / 6.0] * (S + 1)
        out = cofactor_series_grids(F, lam, nmax)
        out[0] = out[0] - 1.0
    elif kind == "mass":
        lam = [c * c + c / 2.0 - 0.5 for c in range(S + 1)]
        out = cofactor_series_grids(F, lam, nmax)
        out[0] = out[0] + 3.0
    else:
        raise ValueError(f"unknown defect kind {kind!r}")
    return tuple(out), deg


def defect_coefficients(series: TaylorSeries, S: int, kind: str) -> list[SpectralField]:
    """Time-polynomial coefficients of an invariant defect of the truncated map.

    ``kind`` is ``"cauchy"`` (``sum_k grad(xdot_k) x grad(x_k) - omega``),
    ``"jacobian"`` (``det grad x - 1``) or, for Euler-Poisson series,
    ``"mass"``.  Entry ``n`` multiplies ``t**n``.
    """
    grids, deg = _defect_grids(series, S, kind)
    return [from_grid(g, deg, series.dimension) for g in grids]


def defect_tail(series: TaylorSeries, S: int, kind: str, t: float) -> float:
    """l1 norm of the defect at time ``t``, summing only the non-vanishing orders.

    Orders that vanish identically by construction (``n < S`` for the
    Cauchy defect, ``n <= S`` otherwise) are left out, so the result is the
    truncation tail free of cancellation error.
    """
    grids, deg = _defect_grids(series, S, kind)
    first = S if kind == "cauchy" else S + 1
    if first >= len(grids):
        return 0.0
    tail = 0.0
    for n in range(len(grids) - 1, first - 1, -1):
        tail = tail * t + grids[n]
    return spectral_l1(np.asarray(tail) * t**first, deg)


def spectral_l1(values: np.ndarray, half) -> float:
    """l1 norm of the Fourier coefficients of grid samples, without pruning small modes."""
    spec = scipy.fft.fftn(values, axes=(-3, -2, -1), norm="forward", workers=fft_workers())
    idx = np.ix_(*[np.arange(-h, h + 1) % n for h, n in zip(half, values.shape[-3:])])
    c = spec[(Ellipsis,) + idx]
    m = np.abs(c) ** 2
    for _ in range(c.ndim - 3):
        m = m.sum(axis=0)
    return float(np.sqrt(m).sum())


def exactness_orders(kind: str, S: int) -> range:
    """Orders of the defect polynomial that vanish for a series truncated at ``S``."""
    return range(0, S) if kind == "cauchy" else range(0, S + 1)


def cauchy_residual(series: TaylorSeries, S: int, t: float) -> ResidualReport:
    r = 0.0 if t == 0 else defect_tail(series, S, "cauchy", t)
    return ResidualReport(S, float(t), cauchy_residual=r, problem=series.problem)


def jacobian_residual(series: TaylorSeries, S: int, t: float) -> ResidualReport:
    r = 0.0 if t == 0 else defect_tail(series, S, "jacobian", t)
    return ResidualReport(S, float(t), jacobian_residual=r, problem=series.problem)


def residuals(series: TaylorSeries, S: int, t: float) -> ResidualReport:
    """Both invariant residuals at time ``t`` for the series truncated at ``S``."""
    c = cauchy_residual(series, S, t).cauchy_residual
    j = jacobian_residual(series, S, t).jacobian_residual
    return ResidualReport(S, float(t), cauchy_residual=c, jacobian_residual=j, problem=series.problem)
