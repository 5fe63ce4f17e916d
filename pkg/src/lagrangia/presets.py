"""Named initial conditions built from products of sines and cosines."""

from __future__ import annotations

import itertools

import numpy as np

from .spectral import SpectralError, SpectralField, trig_field

SQRT2 = np.sqrt(2.0)


def trig_monomial(factors, amplitude=1.0):
    """Exponential expansion of ``amplitude * prod f(k * a_axis)``.

    ``factors`` is a sequence of ``(name, axis, k)`` with ``name`` in
    ``{"sin", "cos"}`` and 0-based ``axis``.  Returns a list of
    ``(wavevector, coefficient)`` terms.
    """
    terms = [((0, 0, 0), complex(amplitude))]
    for name, axis, k in factors:
        if name == "cos":
            parts = [(k, 0.5), (-k, 0.5)]
        elif name == "sin":
            parts = [(k, -0.5j), (-k, 0.5j)]
        else:
            raise ValueError(f"unknown factor {name!r}")
        new = []
        for (p, c), (kk, w) in itertools.product(terms, parts):
            q = list(p)
            q[axis] += kk
            new.append((tuple(q), c * w))
        terms = new
    return terms


def vector_field(components, dimension=3) -> SpectralField:
    """Vector field from per-component lists of ``(amplitude, factors)``."""
    terms = []
    for j, comp in enumerate(components):
        for amplitude, factors in comp:
            for p, c in trig_monomial(factors, amplitude):
                e = np.zeros(3, complex)
                e[j] = c
                terms.append((p, e))
    return trig_field(terms, dimension=dimension, rank=1)


def scalar_field(parts, dimension=3) -> SpectralField:
    terms = []
    for amplitude, factors in parts:
        terms.extend(trig_monomial(factors, amplitude))
    return trig_field(terms, dimension=dimension, rank=0)


def ab_velocity_field(vertical: bool = False) -> SpectralField:
    """Horizontal AB flow ``(-sin a1 sin a2, -cos a1 cos a2, 0)``.

    With ``vertical=True`` the third component ``sqrt(2) sin a1 cos a2``
    is included, giving the full steady Beltrami flow.
    """
    comps = [
        [(-1.0, [("sin", 0, 1), ("sin", 1, 1)])],
        [(-1.0, [("cos", 0, 1), ("cos", 1, 1)])],
        [(SQRT2, [("sin", 0, 1), ("cos", 1, 1)])] if vertical else [],
    ]
    return vector_field(comps, dimension=2)


def taylor_green_velocity() -> SpectralField:
    comps = [
        [(1.0, [("sin", 0, 1), ("cos", 1, 1), ("cos", 2, 1)])],
        [(-1.0, [("cos", 0, 1), ("sin", 1, 1), ("cos", 2, 1)])],
        [],
    ]
    return vector_field(comps, dimension=3)


def two_mode_potential() -> SpectralField:
    """``cos a1 + cos(a1 + a2)``: the smallest genuinely 2D potential used in checks."""
    return SpectralField.from_modes(
        {(1, 0, 0): 0.5, (-1, 0, 0): 0.5, (1, 1, 0): 0.5, (-1, -1, 0): 0.5},
        dimension=2,
        rank=0,
    )


def one_d_potential() -> SpectralField:
    """``cos a1 + 0.3 sin 2 a1``: depends on a single coordinate."""
    return scalar_field([(1.0, [("cos", 0, 1)]), (0.3, [("sin", 0, 2)])], dimension=2)


EULER_PRESETS = {
    "ab": lambda: ab_velocity_field(vertical=False),
    "ab3": lambda: ab_velocity_field(vertical=True),
    "taylor-green": taylor_green_velocity,
}

POTENTIAL_PRESETS = {
    "two-mode": two_mode_potential,
    "one-d": one_d_potential,
}


def euler_preset(name: str) -> SpectralField:
    try:
        return EULER_PRESETS[name]()
    except KeyError:
        raise SpectralError(f"unknown preset {name!r}; choose from {sorted(EULER_PRESETS)}") from None


def potential_preset(name: str) -> SpectralField:
    try:
        return POTENTIAL_PRESETS[name]()
    except KeyError:
        raise SpectralError(f"unknown potential preset {name!r}; choose from {sorted(POTENTIAL_PRESETS)}") from None
