"""Field superposition kernel, observation grids, tracing, and exporters."""

import math

import numpy as np
import pytest

from beambend import (
    CarrierConfig,
    ObservationGrid,
    TrajectoryParams,
    UlaArray,
    active_window,
    broadside_excitation,
    build_excitation,
    element_field,
    field_at,
    field_map,
    field_points,
    fraunhofer_distance,
    phase_profile,
    trace_main_lobe,
    write_field_csv,
    write_field_pgm,
)
from beambend.errors import PhysicsDomainError
from beambend.propagation import PGM_DYNAMIC_RANGE_DB

CARRIER = CarrierConfig.from_wavelength(0.002)

# sqrt(2 Z0 P / 4 pi) for P = 1 mW, Z0 = 376.730313668 ohm
# (50-digit arithmetic, rounded to nearest float64)
E_ABS_1MW_1M = 0.24486423101960486


def small_scene():
    arr = UlaArray(n_elements=64, spacing_m=0.001)
    params = TrajectoryParams(beta=0.02, x0=-0.01, z0=1.0)
    exc = build_excitation(
        arr, lambda x: phase_profile(params, CARRIER, x),
        active_window(params, arr))
    return arr, exc


def test_single_element_amplitude_and_phase():
    arr = UlaArray(n_elements=1, spacing_m=0.001, element_power_w=1e-3)
    exc = broadside_excitation(arr)
    val = field_at(arr, exc, CARRIER, 0.0, 1.0)
    assert abs(val) == pytest.approx(E_ABS_1MW_1M, rel=1e-14)
    # spherical wave carries exp(-j k r)
    assert np.angle(val) == pytest.approx(
        math.remainder(-CARRIER.wavenumber * 1.0, 2.0 * math.pi), abs=1e-9)


def test_element_field_matches_field_at_for_one_element():
    arr = UlaArray(n_elements=1, spacing_m=0.001)
    exc = broadside_excitation(arr)
    direct = element_field(CARRIER, 0.0, exc.weights[0], 0.3, 2.0)
    assert direct == pytest.approx(field_at(arr, exc, CARRIER, 0.3, 2.0),
                                   rel=1e-15)


def test_inverse_distance_falloff():
    arr = UlaArray(n_elements=1, spacing_m=0.001)
    exc = broadside_excitation(arr)
    zs = np.array([1.0, 2.0, 4.0, 8.0, 64.0])
    vals = field_points(arr, exc, CARRIER, np.zeros_like(zs), zs)
    np.testing.assert_allclose(np.abs(vals) * zs, E_ABS_1MW_1M, rtol=1e-12)


def test_superposition_is_linear_in_weights():
    arr, exc = small_scene()
    rng = np.random.default_rng(5)
    xs = rng.uniform(-0.3, 0.3, size=40)
    zs = rng.uniform(0.1, 5.0, size=40)
    base = field_points(arr, exc, CARRIER, xs, zs)
    from beambend import ArrayExcitation
    scaled = ArrayExcitation(weights=exc.weights * 2.0, active=exc.active)
    np.testing.assert_allclose(
        field_points(arr, scaled, CARRIER, xs, zs), 2.0 * base, rtol=1e-15)


def test_field_points_rerun_is_bit_identical():
    arr, exc = small_scene()
    rng = np.random.default_rng(9)
    xs = rng.uniform(-0.4, 0.4, size=257)
    zs = rng.uniform(0.06, 9.0, size=257)
    a = field_points(arr, exc, CARRIER, xs, zs)
    b = field_points(arr, exc, CARRIER, xs, zs)
    assert np.array_equal(a, b)


def test_field_points_thread_count_invariant():
    arr, exc = small_scene()
    rng = np.random.default_rng(13)
    xs = rng.uniform(-0.4, 0.4, size=1001)
    zs = rng.uniform(0.06, 9.0, size=1001)
    one = field_points(arr, exc, CARRIER, xs, zs, threads=1)
    four = field_points(arr, exc, CARRIER, xs, zs, threads=4)
    assert np.array_equal(one, four)


def test_field_points_batch_split_invariant():
    # evaluating in one call or in two halves gives identical bits:
    # the reduction runs over elements, never across observation points
    arr, exc = small_scene()
    rng = np.random.default_rng(21)
    xs = rng.uniform(-0.4, 0.4, size=100)
    zs = rng.uniform(0.06, 9.0, size=100)
    whole = field_points(arr, exc, CARRIER, xs, zs)
    halves = np.concatenate([
        field_points(arr, exc, CARRIER, xs[:37], zs[:37]),
        field_points(arr, exc, CARRIER, xs[37:], zs[37:])])
    assert np.array_equal(whole, halves)


def test_field_at_rejects_observation_on_element():
    arr = UlaArray(n_elements=1, spacing_m=0.001)
    exc = broadside_excitation(arr)
    with pytest.raises(PhysicsDomainError):
        field_at(arr, exc, CARRIER, 0.0, 0.0)


def test_observation_grid_default_shape_and_bounds():
    g = ObservationGrid.default()
    assert (g.nx, g.nz) == (1001, 498)
    assert g.x_coords[0] == -1.0 and g.x_coords[-1] == 1.0
    assert g.z_coords[0] == 0.05 and g.z_coords[-1] == 9.99
    assert np.diff(g.x_coords).max() == pytest.approx(0.002, rel=1e-12)
    assert np.diff(g.z_coords).max() == pytest.approx(0.02, rel=1e-12)


def test_observation_grid_validates_extent():
    with pytest.raises(PhysicsDomainError):
        ObservationGrid(x_min=0.5, x_max=-0.5, nx=10, z_min=0.1, z_max=1.0, nz=10)
    with pytest.raises(PhysicsDomainError):
        ObservationGrid(x_min=-0.5, x_max=0.5, nx=1, z_min=0.1, z_max=1.0, nz=10)


def test_field_map_power_and_validity():
    arr = UlaArray(n_elements=64, spacing_m=0.001)
    exc = broadside_excitation(arr)
    # first grid row skims the element line closer than half a spacing
    grid = ObservationGrid(x_min=-0.0315, x_max=0.0315, nx=64,
                           z_min=0.0002, z_max=0.5, nz=3)
    fm = field_map(arr, exc, CARRIER, grid)
    assert fm.values.shape == (3, 64)
    assert not fm.valid[0].any()
    assert fm.valid[1:].all()
    assert np.all(fm.values[~fm.valid] == 0.0)
    from beambend.array import FREE_SPACE_IMPEDANCE
    want = (fm.values.real ** 2 + fm.values.imag ** 2) / (2 * FREE_SPACE_IMPEDANCE)
    np.testing.assert_array_equal(fm.power, want)
    # interior row matches the point kernel bit for bit
    row = field_points(arr, exc, CARRIER, grid.x_coords,
                       np.full(grid.nx, grid.z_coords[1]))
    assert np.array_equal(fm.values[1], row)


def test_fraunhofer_distances_exact():
    arr1000 = UlaArray(n_elements=1000, spacing_m=0.001)
    arr32 = UlaArray(n_elements=32, spacing_m=0.001)
    assert fraunhofer_distance(arr1000, CARRIER) == 1000.0
    assert fraunhofer_distance(arr32, CARRIER) == 1.024


def test_trace_main_lobe_finds_row_maxima():
    g = ObservationGrid(x_min=-1.0, x_max=1.0, nx=5, z_min=1.0, z_max=2.0, nz=2)
    power = np.array([[0.0, 1.0, 0.0, 0.0, 0.0],
                      [0.0, 0.5, 0.0, 2.0, 0.0]])
    from beambend.propagation import FieldMap
    fm = FieldMap(grid=g, values=np.zeros_like(power, dtype=complex),
                  power=power, valid=np.ones_like(power, dtype=bool))
    z, x = trace_main_lobe(fm)
    np.testing.assert_array_equal(z, [1.0, 2.0])
    np.testing.assert_array_equal(x, [-0.5, 0.5])


def test_trace_main_lobe_tie_breaks_toward_axis():
    g = ObservationGrid(x_min=-1.0, x_max=1.0, nx=5, z_min=1.0, z_max=2.0, nz=2)
    power = np.array([[3.0, 0.0, 0.0, 3.0, 3.0],
                      [0.0, 2.0, 0.0, 2.0, 0.0]])
    from beambend.propagation import FieldMap
    fm = FieldMap(grid=g, values=np.zeros_like(power, dtype=complex),
                  power=power, valid=np.ones_like(power, dtype=bool))
    _, x = trace_main_lobe(fm)
    assert x[0] == 0.5   # |0.5| < |-1.0|, ties break toward the smaller |x|
    assert x[1] == -0.5  # exact +/- tie resolves to the negative abscissa


def test_broadside_map_symmetric_with_axial_lobe():
    arr = UlaArray(n_elements=200, spacing_m=0.001)
    exc = broadside_excitation(arr)
    grid = ObservationGrid(x_min=-0.25, x_max=0.25, nx=251,
                           z_min=0.5, z_max=6.5, nz=13)
    fm = field_map(arr, exc, CARRIER, grid)
    # unphased symmetric aperture: power map even in x
    asym = np.abs(fm.power - fm.power[:, ::-1]).max() / fm.power.max()
    assert asym < 1e-12
    # near-zone ripples keep the row peak inside the aperture footprint;
    # past the collimation range it locks onto the axis
    z, x = trace_main_lobe(fm)
    assert np.max(np.abs(x)) <= arr.aperture_m / 2
    assert np.all(x[z >= 4.5] == 0.0)


def test_write_field_csv_layout_and_reproducibility(tmp_path):
    arr, exc = small_scene()
    grid = ObservationGrid(x_min=-0.1, x_max=0.1, nx=5,
                           z_min=0.2, z_max=0.6, nz=3)
    fm = field_map(arr, exc, CARRIER, grid)
    p1 = tmp_path / "a.csv"
    p2 = tmp_path / "b.csv"
    write_field_csv(fm, p1, header={"preset": "unit-test"})
    write_field_csv(fm, p2, header={"preset": "unit-test"})
    b1 = p1.read_bytes()
    assert b1 == p2.read_bytes()

    text = b1.decode("ascii").splitlines()
    comments = [l for l in text if l.startswith("# ")]
    assert any(l.startswith("# preset: unit-test") for l in comments)
    assert any(l.startswith("# invalid_samples: ") for l in comments)
    rows = [l for l in text if not l.startswith("#")]
    assert rows[0] == "x,z,re,im,power_density"
    assert len(rows) == 1 + 5 * 3
    # z-outer ordering: first data block holds the shallowest row
    first = rows[1].split(",")
    assert float(first[0]) == -0.1 and float(first[1]) == 0.2
    # numeric columns round-trip exactly through repr
    i, j = 1, 2
    vals = rows[1 + i * 5 + j].split(",")
    assert float(vals[2]) == fm.values[i, j].real
    assert float(vals[4]) == fm.power[i, j]


def test_write_field_pgm_format(tmp_path):
    arr, exc = small_scene()
    grid = ObservationGrid(x_min=-0.1, x_max=0.1, nx=7,
                           z_min=0.2, z_max=0.6, nz=4)
    fm = field_map(arr, exc, CARRIER, grid)
    path = tmp_path / "map.pgm"
    write_field_pgm(fm, path, header={"preset": "unit-test"})
    lines = path.read_text(encoding="ascii").splitlines()
    assert lines[0] == "P2"
    comments = [l for l in lines if l.startswith("#")]
    assert any("preset" in l for l in comments)
    body = [l for l in lines[1:] if not l.startswith("#")]
    assert body[0] == "7 4"
    assert body[1] == "65535"
    cells = " ".join(body[2:]).split()
    assert len(cells) == 7 * 4
    gray = np.array([int(c) for c in cells])
    assert gray.min() >= 0 and gray.max() <= 65535
    # peak power maps to full scale
    k = int(np.argmax(fm.power))
    assert gray[k] == 65535
    # dynamic range clamp: anything 60 dB under the peak is black
    floor = fm.power.max() * 10.0 ** (-PGM_DYNAMIC_RANGE_DB / 10.0)
    assert np.all(gray[(fm.power.ravel() <= floor)] == 0)


def test_write_field_pgm_line_width(tmp_path):
    arr, exc = small_scene()
    grid = ObservationGrid(x_min=-0.1, x_max=0.1, nx=40,
                           z_min=0.2, z_max=0.6, nz=2)
    fm = field_map(arr, exc, CARRIER, grid)
    path = tmp_path / "map.pgm"
    write_field_pgm(fm, path)
    body = [l for l in path.read_text("ascii").splitlines()
            if not l.startswith("#")][3:]
    assert all(len(l.split()) <= 16 for l in body)
