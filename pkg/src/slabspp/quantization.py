"""Quantization weights and commutation checks for propagating slab modes.

Launching the quantized mode along +x or -x with Langevin noise sources in
the lossy/amplifying media yields ladder operators whose commutators close
only if the noise-overlap weight (``beta_prime``) and the gain/loss overlap
weight (``gamma_prime``) agree.  Both reduce to the same pair of region
overlap integrals of |bracket|^2, evaluated here in closed form:

    T_cladding = (1 + |k|^2/|nu0|^2) / Re(nu0)            (both half spaces)
    T_film     = |A|^2 [ (1 + |k|^2/|num|^2) (1 - e^{-2 Re(num) d})/Re(num)
                         + pm (1 - |k|^2/|num|^2) 2 d e^{-Re(num) d}
                           * sin(Im(num) d)/(Im(num) d) ]

The film cross term is evaluated through sin(x)/x so it passes smoothly
through Im(num) -> 0 (real decay constants) without any regularization.

Sign conventions: the noise amplitudes carry |Im eps| (they are variances),
whereas the Green-function overlap identity carries signed Im eps.  Both
flavors are exposed; the commutation ratio uses magnitudes, the identity
check uses signed values.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .media import EPS0, HBAR, MediumSet
from .dispersion import ModeSolution, SlabGeometry
from .modes import green_coefficient, profile_bracket
from . import oracles

__all__ = [
    "SAME_DIRECTION",
    "CROSS_DIRECTION",
    "NoiseAmplitudes",
    "noise_amplitudes",
    "overlap_terms",
    "beta_prime",
    "gamma_prime",
    "ccr_check",
    "QuantCoefficients",
    "quant_coefficients",
    "CommutatorKernel",
    "commutator",
    "commutator_numeric",
    "green_identity_check",
]

SAME_DIRECTION = "same_direction"
CROSS_DIRECTION = "cross_direction"


def _check_geom(sol: ModeSolution, geom: SlabGeometry) -> None:
    if geom.d != sol.geom.d:
        raise ValueError(
            f"geometry mismatch: solution found for d={sol.geom.d!r}, "
            f"got d={geom.d!r}"
        )


def _check_media(sol: ModeSolution, media: MediumSet) -> None:
    m = sol.media
    if (media.omega, media.eps_d, media.eps_m) != (m.omega, m.eps_d, m.eps_m):
        raise ValueError("media mismatch: solution was found for a different "
                         "medium set")


@dataclass(frozen=True)
class NoiseAmplitudes:
    """Langevin noise strengths |alpha|^2-like weights, one per medium."""

    alpha_d: float
    alpha_m: float


def noise_amplitudes(media: MediumSet) -> NoiseAmplitudes:
    """Noise weight 2*hbar*omega^2*eps0*|Im eps| for each medium.

    Magnitudes by construction: the noise variance is insensitive to whether
    the medium absorbs or amplifies.
    """
    scale = 2.0 * HBAR * media.omega**2 * EPS0
    return NoiseAmplitudes(alpha_d=scale * abs(media.eps_d.imag),
                           alpha_m=scale * abs(media.eps_m.imag))


def _sinc(x: float) -> float:
    # sin(x)/x, series below 1e-3 where the direct quotient loses digits
    if abs(x) < 1e-3:
        x2 = x * x
        return 1.0 - x2 / 6.0 * (1.0 - x2 / 20.0)
    return math.sin(x) / x


def overlap_terms(sol: ModeSolution, geom: SlabGeometry) -> tuple[float, float]:
    """Region integrals of |bracket|^2: (both claddings, film).

    These are the only two geometric quantities entering beta_prime and
    gamma_prime; sharing a single code path makes their ratio exact.
    """
    _check_geom(sol, geom)
    k2 = abs(sol.k_spp) ** 2
    a0 = sol.nu0.real
    am = sol.num.real
    bm = sol.num.imag
    d = geom.d
    t_clad = (1.0 + k2 / abs(sol.nu0) ** 2) / a0
    amp2 = abs(sol.amplitude) ** 2
    direct = (1.0 + k2 / abs(sol.num) ** 2) * (-math.expm1(-2.0 * am * d)) / am
    cross = (sol.parity.pm * (1.0 - k2 / abs(sol.num) ** 2)
             * 2.0 * d * math.exp(-am * d) * _sinc(bm * d))
    t_film = amp2 * (direct + cross)
    return t_clad, t_film


def beta_prime(sol: ModeSolution, geom: SlabGeometry,
               amplitudes: NoiseAmplitudes) -> float:
    """Noise-overlap weight: integral of |alpha(z)| |bracket(z)|^2 over z.

    Real and strictly positive for any bound mode with at least one
    non-transparent medium.
    """
    t_clad, t_film = overlap_terms(sol, geom)
    return amplitudes.alpha_d * t_clad + amplitudes.alpha_m * t_film


def gamma_prime(sol: ModeSolution, geom: SlabGeometry, media: MediumSet,
                printed_labels: bool = False,
                magnitudes: bool = False) -> float:
    """Gain/loss overlap weight: integral of Im eps(z) |bracket(z)|^2.

    By default the cladding term carries Im(eps_d) and the film term
    Im(eps_m), i.e. each medium weights its own region.  ``printed_labels``
    swaps the two weights (a historical variant, retained for comparison;
    the two coincide when Im eps_d == Im eps_m).  ``magnitudes`` uses
    |Im eps| instead of the signed values, which is the flavor entering the
    commutation closure in amplifying systems.
    """
    _check_media(sol, media)
    t_clad, t_film = overlap_terms(sol, geom)
    w_d = media.eps_d.imag
    w_m = media.eps_m.imag
    if magnitudes:
        w_d = abs(w_d)
        w_m = abs(w_m)
    if printed_labels:
        w_d, w_m = w_m, w_d
    return w_d * t_clad + w_m * t_film


def ccr_check(sol: ModeSolution, geom: SlabGeometry, media: MediumSet,
              printed_labels: bool = False) -> float:
    """Equal-point commutator of the launched mode operator.

    Returns beta_prime / (2 hbar eps0 omega^2 gamma_prime) with the
    magnitude flavor of gamma_prime; exactly 1 when the two weights are
    assembled consistently, regardless of loss or gain.
    """
    beta = beta_prime(sol, geom, noise_amplitudes(media))
    gamma = gamma_prime(sol, geom, media, printed_labels=printed_labels,
                        magnitudes=True)
    return beta / (2.0 * HBAR * EPS0 * media.omega**2 * gamma)


@dataclass(frozen=True)
class QuantCoefficients:
    """Quantization weight bundle for one mode."""

    beta_prime: float
    gamma_prime: float
    ccr_ratio: float


def quant_coefficients(sol: ModeSolution, geom: SlabGeometry,
                       media: MediumSet,
                       printed_labels: bool = False) -> QuantCoefficients:
    beta = beta_prime(sol, geom, noise_amplitudes(media))
    gamma = gamma_prime(sol, geom, media, printed_labels=printed_labels,
                        magnitudes=True)
    ratio = beta / (2.0 * HBAR * EPS0 * media.omega**2 * gamma)
    return QuantCoefficients(beta_prime=beta, gamma_prime=gamma,
                             ccr_ratio=ratio)


# ---------------------------------------------------------------------------
# spatial ladder-operator commutators
# ---------------------------------------------------------------------------

def commutator(kind: str, x: float, x_prime: float,
               sol: ModeSolution) -> complex:
    """Closed-form spatial commutator kernel (delta(omega-omega') factored out).

    ``same_direction``:  [a_+(x), a_+^dag(x')] for co-propagating operators,
    equal to exp(i Re(k) (x-x') - Im(k)|x-x'|); unity at coincident points.

    ``cross_direction``: [a_+(x), a_-^dag(x')], nonzero only for x > x'
    (the only sources both operators share), equal to
    (2 Im(k)/Re(k)) e^{-Im(k)(x-x')} sin(Re(k)(x-x')).
    """
    k = sol.k_spp
    delta = x - x_prime
    if kind == SAME_DIRECTION:
        return cmath.exp(complex(-k.imag * abs(delta), k.real * delta))
    if kind == CROSS_DIRECTION:
        if delta <= 0.0:
            return 0j
        return complex((2.0 * k.imag / k.real) * math.exp(-k.imag * delta)
                       * math.sin(k.real * delta))
    raise ValueError(f"unknown commutator kind {kind!r}")


@dataclass(frozen=True)
class CommutatorKernel:
    """Callable wrapper pairing a kernel kind with a solved mode."""

    kind: str
    sol: ModeSolution

    def __call__(self, x: float, x_prime: float) -> complex:
        return commutator(self.kind, x, x_prime, self.sol)


def commutator_numeric(kind: str, x: float, x_prime: float,
                       sol: ModeSolution) -> complex:
    """Commutator from the defining source integrals, by quadrature.

    The z integral of the noise-weighted |bracket|^2 and the x integral over
    the shared source region are both evaluated numerically (the semi-infinite
    x integral of an amplified mode is evaluated on the reflected ray, i.e.
    as the analytic continuation the closed form represents).  Used to
    cross-check :func:`commutator`.
    """
    amp = noise_amplitudes(sol.media)
    z_quad = oracles.weighted_abs2_quadrature(sol, amp.alpha_d, amp.alpha_m)
    beta = beta_prime(sol, sol.geom, amp)
    k = sol.k_spp
    two_ki = 2.0 * k.imag
    if kind == SAME_DIRECTION:
        m = min(x, x_prime)
        phase = cmath.exp(1j * k * (x - m)) * cmath.exp(
            -1j * k.conjugate() * (x_prime - m))
        x_quad = oracles.signed_tail_integral(k.imag)
        return (two_ki / beta) * z_quad * phase * x_quad
    if kind == CROSS_DIRECTION:
        if x <= x_prime:
            return 0j
        def integrand(xs):
            return (cmath.exp(1j * k * (x - xs))
                    * cmath.exp(-1j * k.conjugate() * (xs - x_prime)))
        # the source phase advances at 2 Re(k); chunk the interval so the
        # heavy cross-cycle cancellation cannot defeat the adaptive rule
        x_quad = oracles.complex_quad_chunked(integrand, x_prime, x,
                                              2.0 * k.real)
        return (two_ki / beta) * z_quad * x_quad
    raise ValueError(f"unknown commutator kind {kind!r}")


# ---------------------------------------------------------------------------
# Green-tensor overlap identity
# ---------------------------------------------------------------------------

def green_identity_check(sol: ModeSolution, geom: SlabGeometry,
                         media: MediumSet, samples=None) -> float:
    """Verify the medium-overlap identity of the resonant Green tensor.

    The integral of Im(eps(s)) G(r, s) G^*(s, r') over the source plane
    factorizes into gamma_prime (signed) times an exactly integrable
    x-profile.  This evaluates the left side by quadrature (z numerically,
    x semi-analytically with continuation for amplified modes) and the right
    side from the closed forms, returning the worst relative Frobenius
    deviation over the sample point pairs.
    """
    _check_geom(sol, geom)
    _check_media(sol, media)
    k = sol.k_spp
    kr, ki = k.real, k.imag
    coeff = green_coefficient(sol, geom)
    dsq = abs(coeff.d_value) ** 2
    gamma_closed = gamma_prime(sol, geom, media)
    gamma_quad = oracles.weighted_abs2_quadrature(
        sol, media.eps_d.imag, media.eps_m.imag)

    if samples is None:
        ell = 1.0 / max(abs(ki), abs(kr) / 20.0)
        zc = 0.4 / sol.nu0.real
        d = geom.d
        samples = [
            ((0.0, -zc), (0.0, 0.5 * d)),
            ((0.8 * ell, 0.5 * d), (0.0, d + zc)),
            ((0.3 * ell, d + 0.7 * zc), (1.7 * ell, -0.5 * zc)),
            ((0.2 * ell, 0.25 * d), (0.2 * ell, 0.75 * d)),
        ]

    worst = 0.0
    for (xa, za), (xb, zb) in samples:
        outer = np.outer(profile_bracket(sol, za),
                         np.conj(profile_bracket(sol, zb)))
        lhs = dsq * gamma_quad * _x_overlap_numeric(k, xa, xb) * outer
        delta = abs(xa - xb)
        braces = (cmath.exp(1j * k * delta) / k
                  + cmath.exp(-1j * k.conjugate() * delta) / k.conjugate())
        rhs = (dsq * gamma_closed * abs(k) ** 2 / (2.0 * kr * ki)
               * braces) * outer
        denom = np.linalg.norm(rhs)
        if denom == 0.0:
            raise ValueError("degenerate sample pair: closed form vanished")
        worst = max(worst, np.linalg.norm(lhs - rhs) / denom)
    return worst


def _x_overlap_numeric(k: complex, x: float, x_prime: float) -> complex:
    """Quadrature of exp(ik|x-s|) exp(-ik*|s-x'|) over the source line."""
    lo, hi = (x, x_prime) if x <= x_prime else (x_prime, x)

    def middle(s):
        return (cmath.exp(1j * k * abs(x - s))
                * cmath.exp(-1j * k.conjugate() * abs(s - x_prime)))

    tail = oracles.signed_tail_integral(k.imag)
    c_lo = cmath.exp(1j * k * (x - lo)) * cmath.exp(
        -1j * k.conjugate() * (x_prime - lo))
    c_hi = cmath.exp(1j * k * (hi - x)) * cmath.exp(
        -1j * k.conjugate() * (hi - x_prime))
    total = (c_lo + c_hi) * tail
    if hi > lo:
        total += oracles.complex_quad_chunked(middle, lo, hi, 2.0 * k.real)
    return total
