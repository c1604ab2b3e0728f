"""Material response of the slab system.

The structure is a metal film of thickness ``d`` occupying ``0 < z < d``,
embedded between two identical dielectric half spaces.  All fields carry the
time factor ``exp(-i*omega*t)``, so a medium with ``Im(eps) > 0`` absorbs and
one with ``Im(eps) < 0`` amplifies.  The dielectric claddings are described by
a complex refractive index ``n = n_real + i*n_imag``; a negative ``n_imag``
models optical gain.
"""

from __future__ import annotations

from dataclasses import dataclass

from scipy.constants import c as C_LIGHT
from scipy.constants import epsilon_0 as EPS0
from scipy.constants import hbar as HBAR

__all__ = [
    "C_LIGHT",
    "EPS0",
    "HBAR",
    "GAIN",
    "LOSS",
    "NEUTRAL",
    "DrudeMetalSpec",
    "DielectricSpec",
    "MediumSet",
    "drude_epsilon",
    "dielectric_epsilon",
    "classify_medium",
    "make_medium_set",
]

# Medium regime labels (sign of Im(eps) under the exp(-i*omega*t) convention).
GAIN = "gain"
LOSS = "loss"
NEUTRAL = "neutral"


@dataclass(frozen=True)
class DrudeMetalSpec:
    """Drude metal parameters.

    Parameters
    ----------
    omega_p : float
        Plasma frequency in rad/s.
    gamma : float
        Collision rate in rad/s (non-negative).
    """

    omega_p: float
    gamma: float

    def __post_init__(self):
        if not self.omega_p > 0.0:
            raise ValueError(f"omega_p must be positive, got {self.omega_p!r}")
        if self.gamma < 0.0:
            raise ValueError(f"gamma must be non-negative, got {self.gamma!r}")


@dataclass(frozen=True)
class DielectricSpec:
    """Cladding refractive index ``n = n_real + i*n_imag``.

    ``n_imag < 0`` describes an amplifying (pumped) dielectric, ``n_imag > 0``
    an absorbing one.
    """

    n_real: float
    n_imag: float = 0.0

    def __post_init__(self):
        if not self.n_real > 0.0:
            raise ValueError(f"n_real must be positive, got {self.n_real!r}")


@dataclass(frozen=True)
class MediumSet:
    """Permittivities of the three-layer system at one frequency.

    Attributes
    ----------
    omega : float
        Angular frequency in rad/s.
    eps_d : complex
        Cladding permittivity (both half spaces are identical).
    eps_m : complex
        Slab (metal) permittivity.
    """

    omega: float
    eps_d: complex
    eps_m: complex

    def __post_init__(self):
        if not self.omega > 0.0:
            raise ValueError(f"omega must be positive, got {self.omega!r}")

    @property
    def k0(self) -> float:
        """Vacuum wavenumber omega/c in rad/m."""
        return self.omega / C_LIGHT


def drude_epsilon(spec: DrudeMetalSpec, omega: float) -> complex:
    """Drude permittivity ``1 - omega_p**2 / (omega**2 + i*gamma*omega)``.

    With ``gamma > 0`` the imaginary part is strictly positive (ohmic loss).
    """
    if not omega > 0.0:
        raise ValueError(f"omega must be positive, got {omega!r}")
    return 1.0 - spec.omega_p**2 / (omega * (omega + 1j * spec.gamma))


def dielectric_epsilon(spec: DielectricSpec) -> complex:
    """Cladding permittivity ``n**2``.

    Computed as the complex square ``n*n`` so that
    ``Im(eps_d) == 2*n_real*n_imag`` holds exactly in floating point.
    """
    n = complex(spec.n_real, spec.n_imag)
    return n * n


def classify_medium(eps: complex) -> str:
    """Classify a permittivity by the sign of its imaginary part.

    Returns ``"gain"`` for ``Im(eps) < 0``, ``"loss"`` for ``Im(eps) > 0`` and
    ``"neutral"`` for exactly zero.
    """
    im = complex(eps).imag
    if im < 0.0:
        return GAIN
    if im > 0.0:
        return LOSS
    return NEUTRAL


def make_medium_set(metal, dielectric, omega: float) -> MediumSet:
    """Bundle the permittivities of both media at ``omega``.

    ``metal`` may be a :class:`DrudeMetalSpec` or a fixed complex permittivity;
    ``dielectric`` may be a :class:`DielectricSpec` or a fixed complex
    permittivity.
    """
    if isinstance(metal, DrudeMetalSpec):
        eps_m = drude_epsilon(metal, omega)
    else:
        eps_m = complex(metal)
    if isinstance(dielectric, DielectricSpec):
        eps_d = dielectric_epsilon(dielectric)
    else:
        eps_d = complex(dielectric)
    if eps_m == 0 or eps_d == 0:
        raise ValueError("permittivities must be non-zero")
    return MediumSet(omega=omega, eps_d=eps_d, eps_m=eps_m)
