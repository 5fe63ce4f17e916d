"""Sparse truncated Fourier representation of 2*pi-periodic fields.

A :class:`SpectralField` stores the Fourier coefficients of a scalar,
vector or rank-2 tensor field on a centred box of wavevectors
``-K_i <= p_i <= K_i``.  Coefficients with modulus below :data:`PRUNE_TOL`
are zeroed and the box is shrunk to the smallest one holding the support,
so that the field behaves as a sparse trigonometric polynomial.

Two routes are offered for products of fields:

* ``method="direct"`` sums over all pairs of stored modes.  It is exact
  up to the rounding of the individual products.
* ``method="fft"`` samples both factors on a physical grid large enough
  for the product to be resolved without aliasing, multiplies pointwise
  and transforms back.  For trigonometric polynomials this reproduces the
  direct sums to rounding level and is far cheaper once supports grow.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from typing import Iterable, Mapping, NamedTuple, Sequence

import numpy as np
import scipy.fft

PRUNE_TOL = 1e-15
IMAG_TOL = 1e-10

_LEVI_CIVITA = np.zeros((3, 3, 3))
_LEVI_CIVITA[0, 1, 2] = _LEVI_CIVITA[1, 2, 0] = _LEVI_CIVITA[2, 0, 1] = 1.0
_LEVI_CIVITA[0, 2, 1] = _LEVI_CIVITA[2, 1, 0] = _LEVI_CIVITA[1, 0, 2] = -1.0


class SpectralError(ValueError):
    """Raised when a field violates the preconditions of an operation."""


class ZeroMeanError(SpectralError):
    """The p = 0 coefficient is nonzero where a mean-free field is required."""


class WaveVector(NamedTuple):
    p1: int
    p2: int
    p3: int = 0

    @property
    def norm2(self) -> int:
        return self.p1 * self.p1 + self.p2 * self.p2 + self.p3 * self.p3

    def __neg__(self) -> "WaveVector":
        return WaveVector(-self.p1, -self.p2, -self.p3)


@dataclass(frozen=True)
class NormRecord:
    """Norms of one Taylor coefficient."""

    l1: float
    weighted: float
    gevrey_sigma: float | None = None
    gevrey_value: float | None = None


def fft_workers() -> int:
    """Worker count for the FFT backend, capped by ``LAGRANGIA_THREADS``."""
    value = os.environ.get("LAGRANGIA_THREADS")
    if value:
        return max(1, int(value))
    return os.cpu_count() or 1


class SpectralField:
    """Immutable trigonometric polynomial with scalar, vector or tensor values.

    Parameters
    ----------
    coeffs : array_like
        Complex array of shape ``rank_shape + (2*K1+1, 2*K2+1, 2*K3+1)``
        where ``rank_shape`` is ``()``, ``(3,)`` or ``(3, 3)``.  The entry
        at spatial index ``K + p`` holds the coefficient of ``exp(i p.a)``.
    dimension : int
        2 or 3.  Two-dimensional fields must have ``K3 == 0``.
    truncated : bool
        Set when a mode cap has dropped nonzero coefficients somewhere
        upstream of this field.
    """

    __slots__ = ("coeffs", "dimension", "truncated")

    def __init__(self, coeffs, dimension: int = 3, truncated: bool = False, *, prune: bool = True):
        c = np.array(coeffs, dtype=complex)
        if c.ndim < 3 or c.ndim > 5:
            raise SpectralError(f"coefficient array has unsupported ndim {c.ndim}")
        if c.shape[:-3] not in ((), (3,), (3, 3)):
            raise SpectralError(f"unsupported component shape {c.shape[:-3]}")
        if any(n % 2 == 0 for n in c.shape[-3:]):
            raise SpectralError("spatial box extents must be odd")
        if dimension not in (2, 3):
            raise SpectralError("dimension must be 2 or 3")
        if dimension == 2 and c.shape[-1] != 1:
            raise SpectralError("2D fields must not carry modes with p3 != 0")
        if not np.all(np.isfinite(c)):
            raise SpectralError("non-finite coefficients")
        if prune:
            c = _prune(c)
        c.flags.writeable = False
        self.coeffs = c
        self.dimension = dimension
        self.truncated = bool(truncated)

    # -- construction -----------------------------------------------------

    @classmethod
    def zeros(cls, rank: int = 1, dimension: int = 3) -> "SpectralField":
        return cls(np.zeros(_rank_shape(rank) + (1, 1, 1), complex), dimension)

    @classmethod
    def from_modes(
        cls,
        modes: Mapping[Sequence[int], object],
        dimension: int = 3,
        rank: int | None = None,
        hermitian: bool = False,
    ) -> "SpectralField":
        """Build a field from ``{wavevector: coefficient}``.

        With ``hermitian=True`` the conjugate mirror ``-p`` of every given
        ``p != 0`` is synthesised; the caller lists one representative per pair.
        """
        items = [(tuple(int(v) for v in p), np.asarray(c, dtype=complex)) for p, c in modes.items()]
        items = [(p + (0,) * (3 - len(p)), c) for p, c in items]
        if rank is None:
            rank = items[0][1].ndim if items else 1
        cshape = _rank_shape(rank)
        if hermitian:
            given = {p for p, _ in items}
            mirrored = {}
            for p, c in items:
                mirrored[p] = mirrored.get(p, 0) + c
                if any(p):
                    q = tuple(-v for v in p)
                    if q in given:
                        raise SpectralError(f"mode {p} and its mirror both given for a hermitian field")
                    mirrored[q] = mirrored.get(q, 0) + np.conj(c)
                elif np.any(np.abs(np.imag(c)) > PRUNE_TOL):
                    raise SpectralError("mean mode of a hermitian field must be real")
            items = list(mirrored.items())
        half = [0, 0, 0]
        for p, _ in items:
            half = [max(h, abs(v)) for h, v in zip(half, p)]
        if dimension == 2 and half[2] != 0:
            raise SpectralError("2D fields must not carry modes with p3 != 0")
        arr = np.zeros(cshape + tuple(2 * h + 1 for h in half), complex)
        for p, c in items:
            c = np.broadcast_to(c, cshape)
            idx = tuple(v + h for v, h in zip(p, half))
            arr[(Ellipsis,) + idx] += c
        return cls(arr, dimension)

    # -- introspection ----------------------------------------------------

    @property
    def rank(self) -> int:
        return self.coeffs.ndim - 3

    @property
    def rank_shape(self) -> tuple:
        return self.coeffs.shape[:-3]

    @property
    def half(self) -> tuple[int, int, int]:
        return tuple((n - 1) // 2 for n in self.coeffs.shape[-3:])

    @property
    def degree(self) -> int:
        """Largest ``|p|_inf`` in the support."""
        return max(self.half)

    def is_zero(self) -> bool:
        return not np.any(self.coeffs)

    def nnz(self) -> int:
        return int(np.count_nonzero(self.modulus()))

    def modulus(self) -> np.ndarray:
        """Euclidean modulus of the coefficient at every box position."""
        m = np.abs(self.coeffs) ** 2
        for _ in range(self.rank):
            m = m.sum(axis=0)
        return np.sqrt(m)

    def wavevectors(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Broadcastable integer grids ``p1, p2, p3`` matching the box."""
        return _wavevector_grids(self.half)

    def mean(self):
        K = self.half
        return self.coeffs[(Ellipsis,) + K]

    def coefficient(self, p: Sequence[int]):
        p = tuple(p) + (0,) * (3 - len(p))
        K = self.half
        if any(abs(v) > h for v, h in zip(p, K)):
            return np.zeros(self.rank_shape, complex)
        return self.coeffs[(Ellipsis,) + tuple(v + h for v, h in zip(p, K))].copy()

    def modes(self) -> list[tuple[WaveVector, np.ndarray]]:
        """Nonzero modes sorted by wavevector."""
        p1, p2, p3 = np.nonzero(self.modulus())
        K = self.half
        out = [
            (WaveVector(int(a - K[0]), int(b - K[1]), int(c - K[2])), self.coeffs[..., a, b, c].copy())
            for a, b, c in zip(p1, p2, p3)
        ]
        out.sort(key=lambda item: tuple(item[0]))
        return out

    def is_hermitian(self, tol: float = 1e-14) -> bool:
        mirror = np.conj(self.coeffs[..., ::-1, ::-1, ::-1])
        return bool(np.all(np.abs(self.coeffs - mirror) <= tol))

    def __repr__(self) -> str:
        return (
            f"SpectralField(rank={self.rank}, dimension={self.dimension}, "
            f"half={self.half}, nnz={self.nnz()}, truncated={self.truncated})"
        )

    # -- box manipulation ----------------------------------------------------

    def padded(self, half: Sequence[int]) -> np.ndarray:
        """Coefficient array embedded in a larger centred box (not pruned)."""
        return _pad(self.coeffs, tuple(half))

    def truncate(self, cap: int | None) -> "SpectralField":
        """Drop modes with ``|p|_inf > cap``; flag the result if any were nonzero."""
        if cap is None or self.degree <= cap:
            return self
        K = self.half
        sl = tuple(slice(max(h - cap, 0), h + min(h, cap) + 1) for h in K)
        kept = self.coeffs[(Ellipsis,) + sl]
        dropped = np.abs(self.coeffs).sum() - np.abs(kept).sum() > 0
        return SpectralField(kept, self.dimension, self.truncated or bool(dropped))

    def component(self, *index: int) -> "SpectralField":
        return SpectralField(self.coeffs[index], self.dimension, self.truncated)

    def with_coeffs(self, coeffs) -> "SpectralField":
        return SpectralField(coeffs, self.dimension, self.truncated)

    # -- arithmetic ----------------------------------------------------------

    def _binary(self, other: "SpectralField", sign: float) -> "SpectralField":
        if not isinstance(other, SpectralField):
            return NotImplemented
        if other.dimension != self.dimension:
            raise SpectralError("dimension mismatch")
        if other.rank_shape != self.rank_shape:
            raise SpectralError("rank mismatch")
        half = tuple(max(a, b) for a, b in zip(self.half, other.half))
        return SpectralField(
            self.padded(half) + sign * other.padded(half),
            self.dimension,
            self.truncated or other.truncated,
        )

    def __add__(self, other):
        return self._binary(other, 1.0)

    def __sub__(self, other):
        return self._binary(other, -1.0)

    def __neg__(self):
        return SpectralField(-self.coeffs, self.dimension, self.truncated, prune=False)

    def __mul__(self, scalar):
        if isinstance(scalar, SpectralField):
            return NotImplemented
        return SpectralField(self.coeffs * scalar, self.dimension, self.truncated)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return SpectralField(self.coeffs / scalar, self.dimension, self.truncated)

    # -- serialisation -----------------------------------------------------

    def to_dict(self) -> dict:
        """JSON-ready dict listing one representative per conjugate pair."""
        if not self.is_hermitian(tol=1e-12):
            modes = self.modes()
            hermitian = False
        else:
            modes = [(p, c) for p, c in self.modes() if tuple(p) >= (0, 0, 0)]
            hermitian = True
        entries = []
        for p, c in modes:
            if self.rank == 0:
                entries.append({"p": list(p), "re": float(c.real), "im": float(c.imag)})
            else:
                entries.append({"p": list(p), "re": c.real.tolist(), "im": c.imag.tolist()})
        return {"dimension": self.dimension, "hermitian": hermitian, "modes": entries}

    @classmethod
    def from_dict(cls, doc: Mapping) -> "SpectralField":
        try:
            dimension = int(doc.get("dimension", 3))
            entries = doc["modes"]
        except (KeyError, AttributeError, TypeError) as exc:
            raise SpectralError(f"malformed field document: {exc}") from None
        hermitian = bool(doc.get("hermitian", False))
        modes = {}
        rank = None
        for e in entries:
            re = np.asarray(e["re"], dtype=float)
            im = np.asarray(e.get("im", np.zeros_like(re)), dtype=float)
            if re.shape != im.shape:
                raise SpectralError("re/im shape mismatch")
            r = re.ndim
            if rank is None:
                rank = r
            elif rank != r:
                raise SpectralError("mixed component shapes in one field")
            p = tuple(int(v) for v in e["p"])
            if len(p) not in (2, 3):
                raise SpectralError(f"bad wavevector {e['p']}")
            p = p + (0,) * (3 - len(p))
            if p in modes:
                raise SpectralError(f"duplicate mode {p}")
            modes[p] = re + 1j * im
        field = cls.from_modes(modes, dimension, rank if rank is not None else 1, hermitian=hermitian)
        if not hermitian and not field.is_hermitian(tol=1e-12):
            raise SpectralError("field without hermitian flag is not hermitian-symmetric")
        return field

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_json(cls, text: str) -> "SpectralField":
        return cls.from_dict(json.loads(text))


def _rank_shape(rank: int) -> tuple:
    return {0: (), 1: (3,), 2: (3, 3)}[rank]


def _wavevector_grids(half):
    return tuple(
        np.arange(-h, h + 1).reshape([-1 if i == ax else 1 for i in range(3)])
        for ax, h in enumerate(half)
    )


def _pad(c: np.ndarray, half: tuple) -> np.ndarray:
    K = tuple((n - 1) // 2 for n in c.shape[-3:])
    if K == half:
        return np.array(c)
    if any(k > h for k, h in zip(K, half)):
        raise SpectralError("cannot pad into a smaller box")
    out = np.zeros(c.shape[:-3] + tuple(2 * h + 1 for h in half), complex)
    sl = tuple(slice(h - k, h + k + 1) for h, k in zip(half, K))
    out[(Ellipsis,) + sl] = c
    return out


def _prune(c: np.ndarray) -> np.ndarray:
    m = np.abs(c) ** 2
    for _ in range(c.ndim - 3):
        m = m.sum(axis=0)
    live = m >= PRUNE_TOL**2
    c = np.where(live, c, 0.0)
    if not live.any():
        return np.zeros(c.shape[:-3] + (1, 1, 1), complex)
    half = []
    for ax in range(3):
        other = tuple(i for i in range(3) if i != ax)
        idx = np.nonzero(live.any(axis=other))[0]
        K = (live.shape[ax] - 1) // 2
        half.append(int(max(abs(idx[0] - K), abs(idx[-1] - K))))
    K = tuple((n - 1) // 2 for n in live.shape)
    sl = tuple(slice(k - h, k + h + 1) for k, h in zip(K, half))
    return np.ascontiguousarray(c[(Ellipsis,) + sl])


def _check_dims(*fields: SpectralField) -> int:
    dims = {f.dimension for f in fields}
    if len(dims) != 1:
        raise SpectralError("dimension mismatch")
    return dims.pop()


def _any_truncated(*fields: SpectralField) -> bool:
    return any(f.truncated for f in fields)


# ---------------------------------------------------------------------------
# Physical-grid sampling


def grid_shape(degree: Sequence[int]) -> tuple[int, int, int]:
    """Smallest FFT-friendly grid resolving a polynomial of the given degree."""
    return tuple(1 if d == 0 else scipy.fft.next_fast_len(2 * d + 1) for d in degree)


def to_grid(field: SpectralField, shape: Sequence[int], real: bool | None = None) -> np.ndarray:
    """Sample ``field`` at ``a_j = 2*pi*j/n`` on a grid of the given shape.

    The grid must hold ``2*K + 1`` points per axis.  Hermitian fields give
    real samples unless ``real=False``.
    """
    shape = tuple(shape)
    K = field.half
    if any(n < 2 * k + 1 for n, k in zip(shape, K)):
        raise SpectralError(f"grid {shape} too small for box {K}")
    spec = np.zeros(field.rank_shape + shape, complex)
    idx = np.ix_(*[np.arange(-k, k + 1) % n for k, n in zip(K, shape)])
    spec[(Ellipsis,) + idx] = field.coeffs
    values = scipy.fft.ifftn(spec, axes=(-3, -2, -1), norm="forward", workers=fft_workers())
    if real is None:
        real = field.is_hermitian(tol=1e-13)
    return values.real.copy() if real else values


def from_grid(
    values: np.ndarray,
    half: Sequence[int],
    dimension: int = 3,
    truncated: bool = False,
) -> SpectralField:
    """Fourier coefficients with ``|p_i| <= half_i`` from grid samples.

    Real samples give an exactly hermitian-symmetric result.
    """
    shape = values.shape[-3:]
    half = tuple(int(h) for h in half)
    if any(n < 2 * h + 1 for n, h in zip(shape, half)):
        raise SpectralError(f"grid {shape} too small for box {half}")
    spec = scipy.fft.fftn(values, axes=(-3, -2, -1), norm="forward", workers=fft_workers())
    idx = np.ix_(*[np.arange(-h, h + 1) % n for h, n in zip(half, shape)])
    c = spec[(Ellipsis,) + idx]
    if np.isrealobj(values):
        c = 0.5 * (c + np.conj(c[..., ::-1, ::-1, ::-1]))
    return SpectralField(c, dimension, truncated)


# ---------------------------------------------------------------------------
# Products

PRODUCT_KINDS = ("scalar", "dot", "cross", "component")


def _pointwise(kind: str, f: np.ndarray, g: np.ndarray, f_rank: int, g_rank: int) -> np.ndarray:
    if kind == "scalar":
        if f_rank != 0 or g_rank != 0:
            raise SpectralError("scalar product needs two scalar fields")
        return f * g
    if kind == "dot":
        if f_rank != 1 or g_rank != 1:
            raise SpectralError("dot product needs two vector fields")
        return np.einsum("i...,i...->...", f, g)
    if kind == "cross":
        if f_rank != 1 or g_rank != 1:
            raise SpectralError("cross product needs two vector fields")
        return np.stack(
            [f[1] * g[2] - f[2] * g[1], f[2] * g[0] - f[0] * g[2], f[0] * g[1] - f[1] * g[0]]
        )
    if kind == "component":
        if f_rank == 0:
            f = f[(None,) * g_rank]
        elif g_rank == 0:
            g = g[(None,) * f_rank]
        elif f_rank != g_rank:
            raise SpectralError("component product needs matching ranks or one scalar factor")
        return f * g
    raise SpectralError(f"unknown product kind {kind!r}")


def _result_rank(kind: str, f_rank: int, g_rank: int) -> int:
    return {"scalar": 0, "dot": 0, "cross": 1}.get(kind, max(f_rank, g_rank))


def convolve(
    f: SpectralField,
    g: SpectralField,
    product_kind: str = "scalar",
    cap: int | None = None,
    method: str = "auto",
) -> SpectralField:
    """Fourier coefficients of the pointwise product of ``f`` and ``g``.

    ``product_kind`` selects how components combine: ``"scalar"``,
    ``"dot"``, ``"cross"`` or ``"component"`` (elementwise, a scalar factor
    broadcasts).  Modes beyond ``cap`` are dropped and flagged.
    """
    dimension = _check_dims(f, g)
    if product_kind not in PRODUCT_KINDS:
        raise SpectralError(f"unknown product kind {product_kind!r}")
    if method == "auto":
        method = "direct" if f.nnz() * g.nnz() <= 20000 else "fft"
    degree = tuple(a + b for a, b in zip(f.half, g.half))
    if max(degree) > 2**20:
        raise SpectralError("mode index range overflow")
    if method == "direct":
        out = _convolve_direct(f, g, product_kind)
    elif method == "fft":
        shape = grid_shape(degree)
        both_real = f.is_hermitian(1e-13) and g.is_hermitian(1e-13)
        fv = to_grid(f, shape, real=both_real)
        gv = to_grid(g, shape, real=both_real)
        out = from_grid(_pointwise(product_kind, fv, gv, f.rank, g.rank), degree, dimension)
    else:
        raise SpectralError(f"unknown convolution method {method!r}")
    out = SpectralField(out.coeffs, dimension, _any_truncated(f, g))
    return out.truncate(cap)


def _convolve_direct(f: SpectralField, g: SpectralField, kind: str) -> SpectralField:
    fm, gm = f.modes(), g.modes()
    rank = _result_rank(kind, f.rank, g.rank)
    half = tuple(a + b for a, b in zip(f.half, g.half))
    out = np.zeros(_rank_shape(rank) + tuple(2 * h + 1 for h in half), complex)
    if not fm or not gm:
        return SpectralField(out, f.dimension)
    fp = np.array([p for p, _ in fm])
    gp = np.array([p for p, _ in gm])
    fc = np.stack([c for _, c in fm], axis=-1)[..., :, None]
    gc = np.stack([c for _, c in gm], axis=-1)[..., None, :]
    prod = _pointwise(kind, fc, gc, f.rank, g.rank)
    ps = fp[:, None, :] + gp[None, :, :]
    idx = tuple(ps[..., ax].ravel() + half[ax] for ax in range(3))
    prod = prod.reshape(prod.shape[: rank] + (-1,))
    # deterministic accumulation: np.add.at visits pairs in row-major order
    for comp in np.ndindex(*prod.shape[:rank]):
        np.add.at(out[comp], idx, prod[comp])
    return SpectralField(out, f.dimension)


# ---------------------------------------------------------------------------
# Differential and zeroth-order multipliers


def spectral_derivative(f: SpectralField, kind: str) -> SpectralField:
    """Gradient, curl or divergence via multiplication by ``i p``.

    ``grad`` of a vector field is the tensor ``T[i, j] = d_i f_j``.
    """
    p = f.wavevectors()
    ip = [1j * np.broadcast_to(q, f.coeffs.shape[-3:]) for q in p]
    c = f.coeffs
    if kind == "grad":
        if f.rank == 0:
            out = np.stack([q * c for q in ip])
        elif f.rank == 1:
            out = np.stack([np.stack([q * c[j] for j in range(3)]) for q in ip])
        else:
            raise SpectralError("gradient of a tensor field is not supported")
    elif kind == "curl":
        if f.rank != 1:
            raise SpectralError("curl needs a vector field")
        out = np.stack(
            [ip[1] * c[2] - ip[2] * c[1], ip[2] * c[0] - ip[0] * c[2], ip[0] * c[1] - ip[1] * c[0]]
        )
    elif kind == "div":
        if f.rank == 1:
            out = ip[0] * c[0] + ip[1] * c[1] + ip[2] * c[2]
        elif f.rank == 2:
            out = sum(ip[i] * c[i] for i in range(3))
        else:
            raise SpectralError("divergence needs a vector or tensor field")
    else:
        raise SpectralError(f"unknown derivative kind {kind!r}")
    return SpectralField(out, f.dimension, f.truncated)


def laplacian(f: SpectralField) -> SpectralField:
    p1, p2, p3 = f.wavevectors()
    return f.with_coeffs(-(p1**2 + p2**2 + p3**2) * f.coeffs)


def _inverse_p2(f: SpectralField) -> np.ndarray:
    p1, p2, p3 = f.wavevectors()
    p2sum = (p1**2 + p2**2 + p3**2).astype(float)
    with np.errstate(divide="ignore"):
        inv = np.where(p2sum > 0, 1.0 / np.where(p2sum > 0, p2sum, 1.0), 0.0)
    return inv


def inv_laplacian(f: SpectralField) -> SpectralField:
    """Unique mean-free periodic solution ``u`` of ``laplacian(u) = f``."""
    if np.any(f.mean() != 0):
        raise ZeroMeanError("inverse Laplacian needs a field with zero mean")
    return f.with_coeffs(-_inverse_p2(f) * f.coeffs)


def helmholtz_combine(r_perp: SpectralField, r_par: SpectralField) -> SpectralField:
    """Vector field with prescribed ``p x c_p`` and ``p . c_p`` data.

    Per mode ``p != 0`` returns ``(-p x r_perp + r_par p) / |p|^2``; the
    mean mode is set to zero.
    """
    dimension = _check_dims(r_perp, r_par)
    if r_perp.rank != 1 or r_par.rank != 0:
        raise SpectralError("helmholtz_combine needs vector transverse and scalar longitudinal data")
    half = tuple(max(a, b) for a, b in zip(r_perp.half, r_par.half))
    R = r_perp.padded(half)
    s = r_par.padded(half)
    p = [np.broadcast_to(q, R.shape[-3:]).astype(float) for q in _wavevector_grids(half)]
    p2 = p[0] ** 2 + p[1] ** 2 + p[2] ** 2
    inv = np.where(p2 > 0, 1.0 / np.where(p2 > 0, p2, 1.0), 0.0)
    pxR = np.stack([p[1] * R[2] - p[2] * R[1], p[2] * R[0] - p[0] * R[2], p[0] * R[1] - p[1] * R[0]])
    out = (-pxR + s * np.stack(p)) * inv
    return SpectralField(out, dimension, _any_truncated(r_perp, r_par))


def fcz_apply(i: int, j: int, f: SpectralField) -> SpectralField:
    """Fourier multiplier ``p_i p_j / |p|^2`` (axes are 0-based)."""
    if not (0 <= i < 3 and 0 <= j < 3):
        raise SpectralError("axis index out of range")
    p = f.wavevectors()
    return f.with_coeffs(p[i] * p[j] * _inverse_p2(f) * f.coeffs)


# ---------------------------------------------------------------------------
# Norms and evaluation


def norm(f: SpectralField, kind: str = "l1", sigma: float | None = None) -> float:
    """Weighted l1 sum of coefficient moduli.

    ``kind`` is ``"l1"`` (weight 1), ``"weighted"`` (weight ``|p|``) or
    ``"gevrey"`` (weight ``exp(sigma |p|)``).
    """
    m = f.modulus()
    if kind == "l1":
        if sigma is not None:
            raise SpectralError("sigma only applies to the gevrey norm")
        return float(m.sum())
    p1, p2, p3 = f.wavevectors()
    pn = np.sqrt(p1**2 + p2**2 + p3**2)
    if kind == "weighted":
        return float((pn * m).sum())
    if kind == "gevrey":
        if sigma is None:
            raise SpectralError("gevrey norm requires sigma")
        if sigma < 0:
            raise SpectralError("sigma must be nonnegative")
        return float((np.exp(sigma * pn) * m).sum())
    raise SpectralError(f"unknown norm kind {kind!r}")


def norm_record(f: SpectralField, sigma: float | None = None) -> NormRecord:
    g = norm(f, "gevrey", sigma) if sigma is not None else None
    return NormRecord(norm(f, "l1"), norm(f, "weighted"), sigma, g)


def evaluate_at(f: SpectralField, a, real: bool = True) -> np.ndarray:
    """Direct sum ``sum_p c_p exp(i p.a)`` at one or several points.

    ``a`` has shape ``(3,)`` or ``(..., 3)``.  With ``real=True`` an
    imaginary residue above ``IMAG_TOL`` raises :class:`SpectralError`.
    """
    a = np.asarray(a, dtype=float)
    if a.shape[-1] == 2:
        a = np.concatenate([a, np.zeros(a.shape[:-1] + (1,))], axis=-1)
    modes = f.modes()
    out_shape = a.shape[:-1] + f.rank_shape
    if not modes:
        return np.zeros(out_shape)
    P = np.array([p for p, _ in modes], dtype=float)
    C = np.stack([c for _, c in modes])
    phase = np.exp(1j * (a @ P.T))
    val = np.tensordot(phase, C, axes=(-1, 0)).reshape(out_shape)
    if not real:
        return val
    if np.any(np.abs(val.imag) > IMAG_TOL):
        raise SpectralError("imaginary residue above tolerance: field is not hermitian")
    return val.real


def wavevector_list(f: SpectralField) -> list[WaveVector]:
    return [p for p, _ in f.modes()]


def fields_close(f: SpectralField, g: SpectralField, tol: float) -> bool:
    """Coefficientwise comparison with absolute tolerance."""
    if f.rank_shape != g.rank_shape:
        return False
    half = tuple(max(a, b) for a, b in zip(f.half, g.half))
    return bool(np.max(np.abs(f.padded(half) - g.padded(half)), initial=0.0) <= tol)


def max_difference(f: SpectralField, g: SpectralField) -> float:
    half = tuple(max(a, b) for a, b in zip(f.half, g.half))
    return float(np.max(np.abs(f.padded(half) - g.padded(half)), initial=0.0))


def trig_field(terms: Iterable[tuple[Sequence[int], object]], dimension: int = 3, rank: int = 1) -> SpectralField:
    """Sum of ``c exp(i p.a)`` terms; repeated wavevectors accumulate."""
    acc: dict = {}
    for p, c in terms:
        p = tuple(int(v) for v in p) + (0,) * (3 - len(p))
        acc[p] = acc.get(p, 0) + np.asarray(c, dtype=complex)
    return SpectralField.from_modes(acc, dimension, rank)
