import cmath
import math

import numpy as np
import pytest

from slabspp import (
    ANTISYMMETRIC,
    SYMMETRIC,
    DielectricSpec,
    DrudeMetalSpec,
    NeutralModeSingularity,
    SlabGeometry,
    SppState,
    compare_states,
    default_grid,
    h_field_mean,
    h_field_operator_bracket,
    ladder_mean,
    langevin_mean,
    make_medium_set,
    solve_dispersion,
)

METAL = DrudeMetalSpec(14.02e15, 6.25e13)
GEOM = SlabGeometry(60e-9)

COHERENT = SppState(alpha_mag=math.sqrt(7.0), alpha_phase=1.5)
SQUEEZED = SppState(alpha_mag=math.sqrt(7.0), alpha_phase=1.5,
                    xi_mag=1.0, xi_phase=0.0)


def _amplified(parity=SYMMETRIC):
    media = make_medium_set(METAL, DielectricSpec(0.9726, -0.08), 4.8e15)
    return solve_dispersion(parity, GEOM, media)


def _attenuated():
    media = make_medium_set(METAL, DielectricSpec(0.9726, 0.0), 4.8e15)
    return solve_dispersion(SYMMETRIC, GEOM, media)


def test_ladder_mean_coherent():
    alpha = cmath.rect(math.sqrt(7.0), 1.5)
    assert ladder_mean(COHERENT) == pytest.approx(alpha, rel=1e-15)


def test_ladder_mean_squeezed_reduces_at_xi_zero():
    plain = SppState(alpha_mag=1.3, alpha_phase=0.4)
    assert ladder_mean(plain) == ladder_mean(
        SppState(alpha_mag=1.3, alpha_phase=0.4, xi_mag=0.0, xi_phase=0.9))


def test_ladder_mean_squeeze_conventions():
    alpha = cmath.rect(math.sqrt(7.0), 1.5)
    # default convention at xi_phase=0 contracts the displacement
    assert ladder_mean(SQUEEZED) == pytest.approx(math.exp(-1.0) * alpha,
                                                  rel=1e-13)
    mu, nu = math.cosh(1.0), math.sinh(1.0)
    textbook = ladder_mean(SQUEEZED, textbook_squeeze=True)
    assert textbook == pytest.approx(mu * alpha - nu * alpha.conjugate(),
                                     rel=1e-13)
    assert textbook != pytest.approx(ladder_mean(SQUEEZED), rel=1e-6)


def test_langevin_mean_propagates():
    sol = _amplified()
    a0 = 0.7 - 0.2j
    for x in (0.0, 2.5e-7, 1.0e-6):
        assert langevin_mean(sol, x, a0) == a0 * cmath.exp(
            1j * sol.k_spp * x)


def test_default_grid():
    sol = _amplified()
    xs, zs = default_grid(sol, GEOM)
    assert xs[0] == 0.0
    assert xs[-1] == pytest.approx(5.0 / abs(sol.k_spp.imag), rel=1e-15)
    assert len(xs) == 500
    assert list(zs) == [0.0, GEOM.d]


def test_field_envelope_rate_matches_mode():
    """log|<H>| must be a straight line with slope -Im(k)."""
    for sol in (_amplified(), _amplified(ANTISYMMETRIC), _attenuated()):
        samples = h_field_mean(sol, GEOM, COHERENT)
        logs = np.log(np.abs(samples.values[:, 0]))
        slope = np.polyfit(samples.xs, logs, 1)[0]
        assert slope == pytest.approx(-sol.k_spp.imag, rel=1e-6)


def test_field_grows_for_amplified_mode():
    sol = _amplified()
    samples = h_field_mean(sol, GEOM, COHERENT)
    mags = np.abs(samples.values[:, 0])
    assert np.all(np.diff(mags) > 0)
    meta = samples.meta
    assert meta["regime"] == "amplified"
    assert meta["parity"] == "symmetric"
    assert meta["textbook_squeeze"] is False


def test_field_decays_for_attenuated_mode():
    sol = _attenuated()
    samples = h_field_mean(sol, GEOM, COHERENT)
    mags = np.abs(samples.values[:, 0])
    assert np.all(np.diff(mags) < 0)


def test_field_shape_and_z_slices():
    sol = _amplified()
    grid = (np.linspace(0.0, 1e-6, 41), np.array([0.0, 3e-8, 6e-8]))
    samples = h_field_mean(sol, GEOM, COHERENT, grid=grid)
    assert samples.values.shape == (41, 3)
    # the two interface rows differ only by the bracket ratio, uniformly in x
    ratio = samples.values[:, 2] / samples.values[:, 0]
    expected = (h_field_operator_bracket(sol, GEOM, 6e-8)
                / h_field_operator_bracket(sol, GEOM, 0.0))
    assert np.allclose(ratio, expected, rtol=1e-12)


def test_symmetric_bracket_node_at_midplane():
    sol = _amplified()
    assert h_field_operator_bracket(sol, GEOM, 0.5 * GEOM.d) == 0j
    anti = _amplified(ANTISYMMETRIC)
    assert h_field_operator_bracket(anti, GEOM, 0.5 * GEOM.d) != 0j


def test_compare_states_is_pointwise_difference():
    sol = _amplified()
    grid = (np.linspace(0.0, 8e-7, 25), np.array([0.0]))
    diff = compare_states(sol, GEOM, COHERENT, SQUEEZED, grid=grid)
    a = h_field_mean(sol, GEOM, COHERENT, grid=grid)
    b = h_field_mean(sol, GEOM, SQUEEZED, grid=grid)
    assert np.array_equal(diff.values, a.values - b.values)


def test_compare_identical_states_is_zero():
    sol = _amplified()
    diff = compare_states(sol, GEOM, COHERENT, COHERENT)
    assert np.all(diff.values == 0)


def test_compare_grows_along_x_when_amplified():
    sol = _amplified()
    diff = compare_states(sol, GEOM, COHERENT, SQUEEZED)
    mags = np.abs(diff.values[:, 0])
    assert mags[0] > 0
    assert np.all(np.diff(mags) > 0)


def test_neutral_mode_rejected():
    eps_m = make_medium_set(METAL, DielectricSpec(0.9726, 0.0), 4.8e15).eps_m
    media = make_medium_set(complex(eps_m.real, 0.0),
                            DielectricSpec(0.9726, 0.0), 4.8e15)
    sol = solve_dispersion(SYMMETRIC, GEOM, media)
    assert sol.k_spp.imag == 0.0
    with pytest.raises(NeutralModeSingularity):
        h_field_mean(sol, GEOM, COHERENT)
    with pytest.raises(NeutralModeSingularity):
        default_grid(sol, GEOM)


def test_state_describe():
    assert "squeez" in SQUEEZED.describe().lower()
    assert "coherent" in COHERENT.describe().lower()
