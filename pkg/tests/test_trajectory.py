"""Parabolic trajectory geometry, phase law, and inverse design."""

import math

import numpy as np
import pytest

from beambend import (
    CarrierConfig,
    RxLocation,
    TrajectoryParams,
    UlaArray,
    active_window,
    caustic_x,
    design_from_rx,
    phase_profile,
)
from beambend.errors import PhysicsDomainError

CARRIER = CarrierConfig.from_wavelength(0.002)
ULA = UlaArray(n_elements=1000, spacing_m=0.001)

# reference parameters: beta=0.01 1/m, vertex (-0.08, 5)
REF = TrajectoryParams(beta=0.01, x0=-0.08, z0=5.0)

# high-precision quadratures of the phase law at the reference parameters
# (50-digit arithmetic, rounded to nearest float64)
PHI_AT_CROSSING = 53.407075111026479
PHI_AT_LEFT_EDGE = 72.641428261231372


def test_caustic_parabola_vertex_and_crossing():
    assert caustic_x(REF, 5.0) == -0.08
    assert REF.x0c == 0.16999999999999998  # -0.08 + 0.01 * 25 in float64
    assert caustic_x(REF, 0.0) == REF.x0c
    # symmetric about the vertex
    assert caustic_x(REF, 3.0) == caustic_x(REF, 7.0)


def test_rx_location_needs_positive_depth():
    with pytest.raises(PhysicsDomainError):
        RxLocation(0.0, 0.0)


def test_trajectory_params_need_positive_z0():
    with pytest.raises(PhysicsDomainError):
        TrajectoryParams(beta=0.01, x0=0.0, z0=-1.0)


def test_phase_profile_reference_values():
    # curvature term vanishes exactly at the crossing point
    got = phase_profile(REF, CARRIER, REF.x0c)
    assert got == pytest.approx(PHI_AT_CROSSING, rel=1e-14)
    assert got == pytest.approx(
        2.0 * REF.beta * CARRIER.wavenumber * REF.z0 * REF.x0c, rel=1e-15)
    assert phase_profile(REF, CARRIER, -0.5) == pytest.approx(
        PHI_AT_LEFT_EDGE, rel=1e-13)


def test_phase_profile_scalar_and_array_forms_agree():
    xs = np.linspace(-0.5, REF.x0c, 17)
    arr = phase_profile(REF, CARRIER, xs)
    scal = np.array([phase_profile(REF, CARRIER, float(x)) for x in xs])
    np.testing.assert_array_equal(arr, scal)


def test_phase_profile_domain_ends_at_crossing():
    with pytest.raises(PhysicsDomainError):
        phase_profile(REF, CARRIER, 0.18)
    with pytest.raises(PhysicsDomainError):
        phase_profile(REF, CARRIER, np.array([0.0, 0.18]))


def test_phase_profile_zero_curvature_is_flat():
    flat = TrajectoryParams(beta=0.0, x0=0.0, z0=1.0)
    np.testing.assert_array_equal(
        phase_profile(flat, CARRIER, np.linspace(-0.5, 0.5, 9)), 0.0)


def test_phase_profile_mirror_identity_bitwise():
    # the mirrored design evaluated at -x reproduces the original phases
    rng = np.random.default_rng(3)
    for _ in range(50):
        beta = rng.uniform(1e-3, 0.05)
        z0 = rng.uniform(0.5, 10.0)
        x0 = rng.uniform(-0.5, 0.5)
        p = TrajectoryParams(beta=beta, x0=x0, z0=z0)
        m = p.mirrored()
        assert m.beta == -beta and m.x0 == -x0 and m.z0 == z0
        x = np.linspace(p.x0c - 0.7, p.x0c, 11)
        np.testing.assert_array_equal(
            phase_profile(m, CARRIER, -x), phase_profile(p, CARRIER, x))


def test_phase_profile_slope_matches_tangent_ray_geometry():
    # d(phi)/dx = 2 beta k (z0 - sqrt(z0^2 + (x0 - x)/beta)): check against
    # a central difference away from the crossing singularity
    x = -0.2
    h = 1e-6
    num = (phase_profile(REF, CARRIER, x + h)
           - phase_profile(REF, CARRIER, x - h)) / (2.0 * h)
    s = math.sqrt(REF.z0 ** 2 + (REF.x0 - x) / REF.beta)
    want = 2.0 * REF.beta * CARRIER.wavenumber * (REF.z0 - s)
    assert num == pytest.approx(want, rel=1e-7)


def test_design_reaches_rx_and_crossing_exactly_on_round_numbers():
    p = design_from_rx(RxLocation(0.0, 8.0), 0.005, 0.0)
    assert p.z0 == 4.0 and p.x0 == -0.08
    p = design_from_rx(RxLocation(0.0, 8.0), 0.01, 0.25)
    assert p.z0 == 5.5625 and p.x0 == -0.0594140625


def test_design_round_trip_property():
    rng = np.random.default_rng(17)
    for _ in range(200):
        beta = rng.uniform(1e-4, 0.05)
        if rng.random() < 0.5:
            beta = -beta
        x0c = rng.uniform(-0.5, 0.5)
        z_rx = rng.uniform(0.5, 12.0)
        off = rng.uniform(1e-4, 0.6)
        x_rx = x0c - off if beta > 0 else x0c + off
        p = design_from_rx(RxLocation(x_rx, z_rx), beta, x0c)
        assert p.z0 > 0
        assert caustic_x(p, z_rx) == pytest.approx(x_rx, abs=1e-9)
        assert caustic_x(p, 0.0) == pytest.approx(x0c, abs=1e-9)


def test_design_rejects_zero_curvature_with_broadside_hint():
    with pytest.raises(PhysicsDomainError, match="broadside"):
        design_from_rx(RxLocation(0.0, 8.0), 0.0, 0.0)


def test_design_rejects_rx_with_no_forward_vertex():
    # rx on the far side of the crossing: the parabola would need z0 <= 0
    with pytest.raises(PhysicsDomainError):
        design_from_rx(RxLocation(0.4, 1.0), 0.005, 0.0)


def test_active_window_clamps_to_aperture():
    lo, hi = active_window(REF, ULA)
    assert lo == -0.5
    assert hi == REF.x0c

    # crossing beyond the aperture edge: the whole array is lit
    wide = TrajectoryParams(beta=0.01, x0=0.7, z0=1.0)
    lo, hi = active_window(wide, ULA)
    assert (lo, hi) == (-0.5, 0.5)


def test_active_window_mirror_and_flat_cases():
    lo, hi = active_window(REF.mirrored(), ULA)
    assert lo == -REF.x0c and hi == 0.5
    flat = TrajectoryParams(beta=0.0, x0=0.0, z0=1.0)
    assert active_window(flat, ULA) == (-0.5, 0.5)


def test_active_window_rejects_crossing_left_of_aperture():
    # crossing below the left aperture edge leaves no real-phase element
    far = TrajectoryParams(beta=0.01, x0=-0.9, z0=1.0)
    with pytest.raises(PhysicsDomainError):
        active_window(far, ULA)
