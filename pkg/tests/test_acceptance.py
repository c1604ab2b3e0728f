"""End-to-end acceptance checks.

One test per numbered criterion; each prints a single PASS/FAIL summary line
with the measured numbers.  Criteria 4 and 7 encode externally supplied
target values that the implemented physics does not reproduce (the targets
are internally consistent only with a very different metal response); those
tests fail honestly and print the measured-vs-target table.  The analysis
behind that conclusion lives in the project decision notes outside the
package.
"""

import math
import time

import numpy as np
import pytest

from slabspp import (
    ANTISYMMETRIC,
    CROSS_DIRECTION,
    PARITIES,
    SAME_DIRECTION,
    SYMMETRIC,
    DielectricSpec,
    DrudeMetalSpec,
    SlabGeometry,
    SppState,
    ccr_check,
    commutator,
    commutator_numeric,
    compare_states,
    green_identity_check,
    h_field_mean,
    make_medium_set,
    normalization,
    solve_dispersion,
)
from slabspp.oracles import (
    curl_consistency_error,
    normalization_quadrature,
    thick_film_degeneracy,
)

METAL = DrudeMetalSpec(14.02e15, 6.25e13)
GEOM = SlabGeometry(60e-9)
OMEGA = 4.8e15
N_REAL = 0.9726


def _media(kappa, n_real=N_REAL, omega=OMEGA):
    return make_medium_set(METAL, DielectricSpec(n_real, kappa), omega)


def _report(number, ok, detail):
    print(f"criterion {number}: {'PASS' if ok else 'FAIL'} -- {detail}")


def test_criterion_1_ccr_closure():
    t0 = time.monotonic()
    worst = 0.0
    for omega in (2e15, 3e15, 4e15, 4.8e15, 5.5e15):
        for kappa in (0.0, -0.063, -0.072, -0.08):
            media = _media(kappa, omega=omega)
            for parity in PARITIES:
                sol = solve_dispersion(parity, GEOM, media)
                worst = max(worst, abs(ccr_check(sol, GEOM, media) - 1.0))
    elapsed = time.monotonic() - t0
    ok = worst <= 1e-12 and elapsed < 1.0
    _report(1, ok, f"worst |ccr-1| = {worst:.3e} over 5x4x2 grid "
                   f"(tol 1e-12), {elapsed:.2f}s")
    assert worst <= 1e-12
    assert elapsed < 1.0


def test_criterion_2_commutator_oracle_equivalence():
    t0 = time.monotonic()
    rng = np.random.default_rng(20260814)
    worst = 0.0
    for kappa in (0.0, -0.08):  # one attenuated, one amplified mode
        sol = solve_dispersion(SYMMETRIC, GEOM, _media(kappa))
        ell = min(1.0 / abs(sol.k_spp.imag),
                  400.0 * math.pi / sol.k_spp.real)
        for _ in range(10):
            lo, hi = np.sort(rng.uniform(0.05, 1.45, size=2))
            x, xp = hi * ell, lo * ell
            for kind in (SAME_DIRECTION, CROSS_DIRECTION):
                closed = commutator(kind, x, xp, sol)
                numeric = commutator_numeric(kind, x, xp, sol)
                dev = abs(closed - numeric) / max(abs(closed), abs(numeric))
                worst = max(worst, dev)
    elapsed = time.monotonic() - t0
    ok = worst <= 1e-6 and elapsed < 30.0
    _report(2, ok, f"worst closed-vs-numeric deviation = {worst:.3e} "
                   f"(tol 1e-6), {elapsed:.1f}s")
    assert worst <= 1e-6
    assert elapsed < 30.0


def test_criterion_3_green_identity():
    t0 = time.monotonic()
    media = _media(-0.08)
    worst = 0.0
    for parity in PARITIES:
        sol = solve_dispersion(parity, GEOM, media)
        worst = max(worst, green_identity_check(sol, GEOM, media))
    elapsed = time.monotonic() - t0
    ok = worst < 1e-6 and elapsed < 10.0
    _report(3, ok, f"worst identity deviation = {worst:.3e} (tol 1e-6), "
                   f"{elapsed:.1f}s")
    assert worst < 1e-6
    assert elapsed < 10.0


# expected regimes and Im(k) targets (rad/m), keyed by cladding n_imag
_REGIME_PATTERN = {
    -0.063: ("attenuated", "attenuated"),
    -0.072: ("attenuated", "amplified"),
    -0.08: ("amplified", "amplified"),
}
_IM_K_TARGETS = {
    -0.063: (7.8029e7, 2.7617e6),
    -0.072: (2.5858e7, -1.96e6),
    -0.08: (-1.8673e7, -6.1217e6),
}
_CROSSING_KAPPA = -0.07747
_CROSSING_IM_K = -4.81e6


def _curve_crossing(n_real):
    """kappa where the two parity growth rates coincide, by bisection."""

    def split(kappa):
        media = _media(kappa, n_real)
        ks = solve_dispersion(SYMMETRIC, GEOM, media).k_spp
        ka = solve_dispersion(ANTISYMMETRIC, GEOM, media).k_spp
        return ks.imag - ka.imag, ks.imag

    grid = np.linspace(-1e-4, -0.1, 60)
    prev_kappa, (prev_diff, _) = grid[0], split(grid[0])
    for kappa in grid[1:]:
        diff, _ = split(kappa)
        if diff == 0.0 or (diff < 0) != (prev_diff < 0):
            lo, hi = prev_kappa, kappa
            for _ in range(60):
                mid = 0.5 * (lo + hi)
                dm, _ = split(mid)
                if (dm < 0) == (prev_diff < 0):
                    lo = mid
                else:
                    hi = mid
            mid = 0.5 * (lo + hi)
            return mid, split(mid)[1]
        prev_kappa, prev_diff = kappa, diff
    return None, None


def test_criterion_4_gain_crossing_targets():
    t0 = time.monotonic()
    lines = []
    any_ok = False
    best = None
    for n_real in (0.9726, 1.9726):
        pattern_ok = True
        for kappa, expected in _REGIME_PATTERN.items():
            media = _media(kappa, n_real)
            got = tuple(solve_dispersion(p, GEOM, media).regime
                        for p in PARITIES)
            pattern_ok &= got == expected
            lines.append(f"n={n_real} kappa={kappa}: regimes {got}, "
                         f"expected {expected}")
        quant_ok = True
        for kappa, (tgt_s, tgt_a) in _IM_K_TARGETS.items():
            media = _media(kappa, n_real)
            im_s = solve_dispersion(SYMMETRIC, GEOM, media).k_spp.imag
            im_a = solve_dispersion(ANTISYMMETRIC, GEOM, media).k_spp.imag
            quant_ok &= abs(im_s - tgt_s) <= 0.05 * abs(tgt_s)
            quant_ok &= abs(im_a - tgt_a) <= 0.05 * abs(tgt_a)
            lines.append(f"n={n_real} kappa={kappa}: Im k = "
                         f"({im_s:.4e}, {im_a:.4e}), target "
                         f"({tgt_s:.4e}, {tgt_a:.4e})")
        kappa_star, common_im = _curve_crossing(n_real)
        if kappa_star is None:
            crossing_ok = False
            lines.append(f"n={n_real}: no parity crossing found in "
                         "[-0.1, -1e-4]")
        else:
            crossing_ok = (
                abs(kappa_star - _CROSSING_KAPPA) <= 0.05 * abs(_CROSSING_KAPPA)
                and abs(common_im - _CROSSING_IM_K) <= 0.05 * abs(_CROSSING_IM_K))
            lines.append(f"n={n_real}: parity crossing at kappa = "
                         f"{kappa_star:.5f} (target {_CROSSING_KAPPA}), "
                         f"common Im k = {common_im:.4e} "
                         f"(target {_CROSSING_IM_K:.3e})")
        if pattern_ok and quant_ok and crossing_ok:
            any_ok = True
            best = n_real
    elapsed = time.monotonic() - t0
    detail = (f"reproducing n_d = {best}" if any_ok else
              "neither n_d reproduces the target pattern/values")
    _report(4, any_ok and elapsed < 5.0, detail + f", {elapsed:.1f}s")
    for line in lines:
        print("  " + line)
    assert any_ok, (
        "gain-crossing targets unreachable for both candidate n_d values; "
        "measured growth rates are 1-3 orders smaller than the targets "
        "(see the printed table and the recorded analysis)")
    assert elapsed < 5.0


def test_criterion_5_thick_film_degeneracy():
    t0 = time.monotonic()
    report = thick_film_degeneracy(METAL, DielectricSpec(1.9726, -0.081),
                                   OMEGA, d=2e-6)
    split = report["rel_split"]
    offset = max(report["rel_offset_symmetric"],
                 report["rel_offset_antisymmetric"])
    elapsed = time.monotonic() - t0
    ok = split < 1e-8 and offset < 1e-9 and elapsed < 1.0
    _report(5, ok, f"parity split {split:.3e} (tol 1e-8), single-interface "
                   f"offset {offset:.3e} (tol 1e-9), {elapsed:.2f}s")
    assert split < 1e-8
    assert offset < 1e-9
    assert elapsed < 1.0


def test_criterion_6_normalization_oracle():
    t0 = time.monotonic()
    rng = np.random.default_rng(1406)
    worst = 0.0
    for i in range(10):
        n_real = rng.uniform(0.9, 2.2)
        kappa = rng.uniform(-0.09, 0.09)
        omega = rng.uniform(2.5e15, 5.5e15)
        d = rng.uniform(40e-9, 120e-9)
        geom = SlabGeometry(d)
        media = _media(kappa, n_real, omega)
        sol = solve_dispersion(PARITIES[i % 2], geom, media)
        closed = normalization(sol, geom)
        quad = normalization_quadrature(sol)
        worst = max(worst, abs(closed - quad) / abs(quad))
    elapsed = time.monotonic() - t0
    ok = worst <= 1e-8 and elapsed < 5.0
    _report(6, ok, f"worst closed-vs-quadrature deviation = {worst:.3e} "
                   f"(tol 1e-8) on 10 random modes, {elapsed:.1f}s")
    assert worst <= 1e-8
    assert elapsed < 5.0


# expected: decay for both at -0.063 (symmetric faster), decay/growth split
# at -0.072, growth for both at -0.08 (symmetric faster)
_ENVELOPE_EXPECTATION = {
    -0.063: lambda im_s, im_a: im_s > im_a > 0,
    -0.072: lambda im_s, im_a: im_s > 0 > im_a,
    -0.08: lambda im_s, im_a: im_s < im_a < 0,
}


def test_criterion_7_field_propagation():
    t0 = time.monotonic()
    state = SppState(alpha_mag=math.sqrt(7.0), alpha_phase=1.5)
    worst_slope = 0.0
    envelope_ok = True
    lines = []
    for kappa in (-0.063, -0.072, -0.08):
        media = _media(kappa)
        ims = {}
        for parity in PARITIES:
            sol = solve_dispersion(parity, GEOM, media)
            samples = h_field_mean(sol, GEOM, state)
            slope = np.polyfit(samples.xs,
                               np.log(np.abs(samples.values[:, 0])), 1)[0]
            rel = abs(slope + sol.k_spp.imag) / abs(sol.k_spp.imag)
            worst_slope = max(worst_slope, rel)
            ims[parity.name] = sol.k_spp.imag
        this_ok = _ENVELOPE_EXPECTATION[kappa](ims["symmetric"],
                                               ims["antisymmetric"])
        envelope_ok &= this_ok
        lines.append(f"kappa={kappa}: Im k (sym, anti) = "
                     f"({ims['symmetric']:.4e}, {ims['antisymmetric']:.4e}), "
                     f"envelope ordering {'ok' if this_ok else 'MISMATCH'}")
    elapsed = time.monotonic() - t0
    ok = worst_slope <= 1e-3 and envelope_ok and elapsed < 1.0
    _report(7, ok, f"worst slope error {worst_slope:.3e} (tol 1e-3); "
                   f"envelope ordering {'ok' if envelope_ok else 'MISMATCH'}"
                   f", {elapsed:.2f}s")
    for line in lines:
        print("  " + line)
    assert worst_slope <= 1e-3
    assert envelope_ok, (
        "envelope ordering differs from the expected pattern at the "
        "first two media (both modes already amplify there); slope physics "
        "itself passes -- see the printed table and the recorded analysis")
    assert elapsed < 1.0


def test_criterion_8_curl_consistency():
    t0 = time.monotonic()
    worst = 0.0
    for parity in PARITIES:
        sol = solve_dispersion(parity, GEOM, _media(-0.08))
        zc = 1.0 / sol.nu0.real
        depths = np.concatenate([
            -np.linspace(0.05, 2.0, 20) * zc,
            np.linspace(0.03, 0.97, 20) * GEOM.d,  # stays off the midplane
            GEOM.d + np.linspace(0.05, 2.0, 20) * zc,
        ])
        worst = max(worst,
                    max(curl_consistency_error(sol, z) for z in depths))
    elapsed = time.monotonic() - t0
    ok = worst <= 1e-6 and elapsed < 1.0
    _report(8, ok, f"worst finite-difference mismatch = {worst:.3e} "
                   f"(tol 1e-6) at 20 depths per region, {elapsed:.2f}s")
    assert worst <= 1e-6
    assert elapsed < 1.0


def test_criterion_9_state_reduction_and_growth():
    t0 = time.monotonic()
    sol = solve_dispersion(SYMMETRIC, GEOM, _media(-0.08))
    coherent = SppState(alpha_mag=math.sqrt(7.0), alpha_phase=1.5)
    unsqueezed = SppState(alpha_mag=math.sqrt(7.0), alpha_phase=1.5,
                          xi_mag=0.0, xi_phase=0.7)
    squeezed = SppState(alpha_mag=math.sqrt(7.0), alpha_phase=1.5,
                        xi_mag=1.0, xi_phase=0.0)

    base = h_field_mean(sol, GEOM, coherent)
    zero = compare_states(sol, GEOM, coherent, unsqueezed)
    scale = np.abs(base.values).max()
    reduction = np.abs(zero.values).max() / scale

    diff = compare_states(sol, GEOM, coherent, squeezed)
    mags = np.abs(diff.values[:, 0])
    nonzero = mags[0] > 0
    growing = bool(np.all(np.diff(mags) > 0))
    elapsed = time.monotonic() - t0
    ok = reduction <= 1e-12 and nonzero and growing and elapsed < 1.0
    _report(9, ok, f"xi=0 reduction residual = {reduction:.3e} (tol 1e-12); "
                   f"squeezed-vs-coherent difference nonzero={nonzero}, "
                   f"growing={growing}, {elapsed:.2f}s")
    assert reduction <= 1e-12
    assert nonzero and growing
    assert elapsed < 1.0
