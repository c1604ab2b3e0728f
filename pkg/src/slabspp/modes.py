"""Spatial mode profiles and the residue entering the slab Green tensor.

The TM vector-potential profile of a converged mode has one exponential in
each cladding and two counter-decaying partials inside the film.  All field
quantities downstream (quantization weights, magnetic field means, the
resonant part of the Green tensor) are built from the same two-component
bracket ``(b_x(z), b_z(z))``; the full profile just multiplies it by the
in-plane phase ``exp(i*k_spp*x)``.

``normalization`` evaluates, in closed form, the unconjugated pairing of the
profile with its transverse-flipped self, weighted by the local
permittivity.  This is the quantity whose reciprocal scales the pole
contribution of the Green tensor; it stays meaningful (complex) in the
presence of loss and gain, unlike an |u|^2 norm.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np

from .dispersion import ModeSolution, SlabGeometry

__all__ = [
    "DegenerateResidue",
    "profile_bracket",
    "mode_profile",
    "normalization",
    "GreenCoefficient",
    "green_coefficient",
    "green_tensor",
]


class DegenerateResidue(Exception):
    """Pole strength of the Green tensor is numerically undefined."""


def _check_geom(sol: ModeSolution, geom: SlabGeometry) -> None:
    if geom.d != sol.geom.d:
        raise ValueError(
            f"geometry mismatch: solution was found for d={sol.geom.d!r}, "
            f"got d={geom.d!r}"
        )


def profile_bracket(sol: ModeSolution, z: float) -> np.ndarray:
    """Two-component (x, z) profile bracket at depth z, without exp(ikx).

    Tangential component and the magnetic-type combination are continuous
    across both interfaces by construction.
    """
    k = sol.k_spp
    nu0 = sol.nu0
    num = sol.num
    pm = sol.parity.pm
    d = sol.geom.d
    if z < 0.0:
        e = cmath.exp(nu0 * z)
        return np.array([e, (-1j * k / nu0) * e])
    if z <= d:
        a = sol.amplitude
        e1 = cmath.exp(-num * z)
        e2 = cmath.exp(num * (z - d))
        bx = a * (e1 + pm * e2)
        bz = a * (1j * k / num) * (e1 - pm * e2)
        return np.array([bx, bz])
    e = cmath.exp(-nu0 * (z - d))
    return np.array([pm * e, pm * (1j * k / nu0) * e])


def mode_profile(sol: ModeSolution, x: float, z: float) -> np.ndarray:
    """Vector-potential profile (A_x, A_z) at the point (x, z)."""
    return cmath.exp(1j * sol.k_spp * x) * profile_bracket(sol, z)


def normalization(sol: ModeSolution, geom: SlabGeometry) -> complex:
    """Closed-form permittivity-weighted self-pairing of the profile.

    Integrates eps(z) * (b_x^2 - b_z^2) over the whole z axis (no complex
    conjugation -- the pairing flips the sign of the transverse component
    instead, which reduces to the usual energy-like norm when all media are
    lossless).
    """
    _check_geom(sol, geom)
    k = sol.k_spp
    nu0 = sol.nu0
    num = sol.num
    pm = sol.parity.pm
    d = geom.d
    a2 = sol.amplitude * sol.amplitude
    eps_d = sol.media.eps_d
    eps_m = sol.media.eps_m
    cladding = (eps_d / nu0) * (1.0 + k * k / (nu0 * nu0))
    direct = (1.0 + k * k / (num * num)) * (1.0 - cmath.exp(-2.0 * num * d)) / num
    cross = 2.0 * pm * d * (1.0 - k * k / (num * num)) * cmath.exp(-num * d)
    return cladding + eps_m * a2 * (direct + cross)


@dataclass(frozen=True)
class GreenCoefficient:
    """Pole strength of the resonant Green-tensor term.

    ``d_value`` multiplies ``exp(i*k_spp*|x - x'|)`` times the outer product
    of the profile brackets; ``n_prime`` is the normalization it came from.
    """

    d_value: complex
    n_prime: complex


def green_coefficient(sol: ModeSolution, geom: SlabGeometry) -> GreenCoefficient:
    """Residue coefficient of the bound-mode pole.

    Equals ``-eps_m / (4 * N' * k_spp)`` where N' is :func:`normalization`;
    raises :class:`DegenerateResidue` if the denominator underflows (a mode
    sitting exactly on a normalization zero, e.g. at a parity degeneracy).
    """
    _check_geom(sol, geom)
    n_prime = normalization(sol, geom)
    denom = 4.0 * n_prime * sol.k_spp
    if abs(denom) < 1e-30:
        raise DegenerateResidue(
            f"normalization * k_spp underflow ({denom!r}); "
            "pole strength undefined"
        )
    return GreenCoefficient(d_value=-sol.media.eps_m / denom, n_prime=n_prime)


def green_tensor(sol: ModeSolution, geom: SlabGeometry,
                 r: tuple[float, float],
                 r_prime: tuple[float, float]) -> np.ndarray:
    """Resonant (bound-mode) part of the Green tensor between two points.

    ``r`` and ``r_prime`` are ``(x, z)`` pairs; the result is the 2x2 block
    over the (x, z) components.  Symmetric under simultaneous swap and
    transpose (reciprocity).
    """
    coeff = green_coefficient(sol, geom)
    x, z = r
    xp, zp = r_prime
    phase = cmath.exp(1j * sol.k_spp * abs(x - xp))
    return (-1j * coeff.d_value * phase) * np.outer(
        profile_bracket(sol, z), profile_bracket(sol, zp))
