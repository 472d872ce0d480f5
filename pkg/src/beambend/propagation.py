"""Free-space propagation from the excited aperture to observation points.

Each active element radiates a spherical wave; the observed field is the
coherent sum

    E(x, z) = sum_n sqrt(2*Z0*G_n*U_n/(4*pi)) * w_n * exp(-j*k*r_n) / r_n

with r_n the element-to-observer distance and w_n the complex drive weight
(amplitude sqrt(P_n), phase from the trajectory design).  Power density is
|E|^2 / (2*Z0) in W/m^2.

Determinism contract: element contributions are accumulated in double
precision with numpy's pairwise reduction over ascending element index.
The reduction tree depends only on the active element count, never on how
observation points are batched or threaded, so identical inputs give
bit-identical fields at any thread count.  Parallelism partitions over
observation points only, in fixed-size blocks assembled by index.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .array import FREE_SPACE_IMPEDANCE, ArrayExcitation, CarrierConfig, UlaArray, element_positions, omnidirectional
from .errors import PhysicsDomainError

# Observation points per evaluation block, expressed as point-element pairs.
# Fixed (thread-count independent) so the block partition never changes.
_BLOCK_PAIR_TARGET = 4_000_000


@dataclass(frozen=True)
class ObservationGrid:
    """Uniform rectangular observation grid in the (x, z) plane, z > 0."""

    x_min: float
    x_max: float
    nx: int
    z_min: float
    z_max: float
    nz: int

    def __post_init__(self):
        if not (self.x_min < self.x_max and self.z_min < self.z_max):
            raise PhysicsDomainError("grid extents must satisfy min < max on both axes")
        if self.z_min <= 0:
            raise PhysicsDomainError(f"grid must sit strictly in front of the aperture, got z_min = {self.z_min!r}")
        if self.nx < 2 or self.nz < 2:
            raise PhysicsDomainError("grid needs at least 2 samples per axis")

    @classmethod
    def default(cls) -> "ObservationGrid":
        """Reference grid: x in [-1, 1] m by 2 mm, z in [0.05, 9.99] m by 20 mm."""
        return cls(x_min=-1.0, x_max=1.0, nx=1001, z_min=0.05, z_max=9.99, nz=498)

    @property
    def x_coords(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.nx)

    @property
    def z_coords(self) -> np.ndarray:
        return np.linspace(self.z_min, self.z_max, self.nz)


@dataclass(frozen=True, eq=False)
class FieldMap:
    """Sampled complex field and power density over an ObservationGrid.

    Arrays are (nz, nx), z varying along rows.  Samples closer than half an
    element pitch to an active element are flagged invalid (the 1/r model
    diverges there) and carry exactly zero field and power rather than NaN,
    so one bad sample never poisons downstream reductions.
    """

    grid: ObservationGrid
    values: np.ndarray
    power: np.ndarray
    valid: np.ndarray

    def __post_init__(self):
        shape = (self.grid.nz, self.grid.nx)
        if self.values.shape != shape or self.power.shape != shape or self.valid.shape != shape:
            raise PhysicsDomainError(f"field map arrays must have shape {shape}")


def radiation_coefficient(array: UlaArray) -> float:
    """Per-element spherical-wave amplitude sqrt(2*Z0*G/(4*pi)) (pattern factor aside)."""
    return math.sqrt(2.0 * FREE_SPACE_IMPEDANCE * array.element_gain / (4.0 * math.pi))


def element_field(carrier: CarrierConfig, element_x: float, weight: complex, x, z,
                  gain: float = 1.0, pattern=omnidirectional):
    """Spherical-wave field of one element with drive weight at points (x, z).

    The weight carries sqrt(P_n) * exp(j*phi); this routine applies the
    radiation constant sqrt(2*Z0*G*U/(4*pi)) and the exp(-j*k*r)/r kernel.
    """
    x = np.asarray(x, dtype=float)
    z = np.asarray(z, dtype=float)
    dx = x - element_x
    r = np.sqrt(dx * dx + z * z)
    if np.any(r == 0):
        raise PhysicsDomainError(f"observation point coincides with the element at x = {element_x:g} m")
    coef = math.sqrt(2.0 * FREE_SPACE_IMPEDANCE * gain / (4.0 * math.pi))
    out = coef * weight * np.exp(-1j * carrier.wavenumber * r) / r
    if pattern is not omnidirectional:
        out = out * np.sqrt(pattern(dx, z))
    return complex(out) if out.ndim == 0 else out


def _active_arrays(array: UlaArray, excitation: ArrayExcitation):
    if excitation.weights.shape != (array.n_elements,):
        raise PhysicsDomainError("excitation does not match the array element count")
    positions = element_positions(array)
    mask = excitation.active
    return positions[mask], excitation.weights[mask]


def _block_spans(n_points: int, n_active: int):
    block = max(1, _BLOCK_PAIR_TARGET // max(1, n_active))
    return [(lo, min(lo + block, n_points)) for lo in range(0, n_points, block)]


def _run_spans(spans, worker, threads):
    if threads is None:
        threads = os.cpu_count() or 1
    if threads > 1 and len(spans) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(lambda span: worker(*span), spans))
    else:
        for lo, hi in spans:
            worker(lo, hi)


def _field_points(array: UlaArray, excitation: ArrayExcitation, carrier: CarrierConfig,
                  xs: np.ndarray, zs: np.ndarray, threads=None):
    """Coherent field and nearest-element distance at flat point lists."""
    xpos, weights = _active_arrays(array, excitation)
    k = carrier.wavenumber
    coef = radiation_coefficient(array)
    pattern = array.element_pattern
    values = np.empty(xs.shape, dtype=complex)
    r_min = np.empty(xs.shape, dtype=float)

    def worker(lo, hi):
        dx = xs[lo:hi, None] - xpos[None, :]
        zz = zs[lo:hi, None]
        r = np.sqrt(dx * dx + zz * zz)
        with np.errstate(divide="ignore", invalid="ignore"):
            contrib = np.exp(-1j * k * r)
            contrib *= weights
            contrib /= r
            if pattern is not omnidirectional:
                contrib *= np.sqrt(pattern(dx, zz))
            values[lo:hi] = coef * contrib.sum(axis=1)
        r_min[lo:hi] = r.min(axis=1)

    _run_spans(_block_spans(xs.size, xpos.size), worker, threads)
    return values, r_min


def field_at(array: UlaArray, excitation: ArrayExcitation, carrier: CarrierConfig,
             x: float, z: float) -> complex:
    """Coherent field of the excited aperture at a single point (x, z)."""
    values, r_min = _field_points(array, excitation, carrier,
                                  np.array([float(x)]), np.array([float(z)]), threads=1)
    if r_min[0] == 0:
        raise PhysicsDomainError(f"observation point ({x:g}, {z:g}) m coincides with an active element")
    return complex(values[0])


def field_points(array: UlaArray, excitation: ArrayExcitation, carrier: CarrierConfig,
                 xs, zs, threads=None) -> np.ndarray:
    """Vectorized :func:`field_at` over flat coordinate arrays of equal length."""
    xs = np.ascontiguousarray(xs, dtype=float)
    zs = np.ascontiguousarray(zs, dtype=float)
    if xs.shape != zs.shape or xs.ndim != 1:
        raise PhysicsDomainError("xs and zs must be equal-length 1-D arrays")
    values, r_min = _field_points(array, excitation, carrier, xs, zs, threads)
    if np.any(r_min == 0):
        raise PhysicsDomainError("an observation point coincides with an active element")
    return values


def field_map(array: UlaArray, excitation: ArrayExcitation, carrier: CarrierConfig,
              grid: ObservationGrid, threads=None) -> FieldMap:
    """Sample the coherent field over a grid, flagging near-element samples.

    Points within spacing_m/2 of an active element are marked invalid and
    zeroed.  Output is bit-identical for a given input at any thread count;
    see the module docstring for the summation-order contract.
    """
    xx, zz = np.meshgrid(grid.x_coords, grid.z_coords)
    xs = np.ascontiguousarray(xx.ravel())
    zs = np.ascontiguousarray(zz.ravel())
    values, r_min = _field_points(array, excitation, carrier, xs, zs, threads)
    valid = r_min >= array.spacing_m / 2.0
    values[~valid] = 0
    power = (values.real ** 2 + values.imag ** 2) / (2.0 * FREE_SPACE_IMPEDANCE)
    shape = (grid.nz, grid.nx)
    return FieldMap(grid=grid, values=values.reshape(shape),
                    power=power.reshape(shape), valid=valid.reshape(shape))


def trace_main_lobe(fmap: FieldMap) -> tuple[np.ndarray, np.ndarray]:
    """Per z row, the x of maximum power density; ties break toward smaller |x|.

    Returns (z_coords, x_peaks), one entry per grid row.
    """
    x = fmap.grid.x_coords
    peaks = np.empty(fmap.grid.nz, dtype=float)
    # Order candidate columns by (|x|, x) once; the first argmax hit wins.
    order = np.lexsort((x, np.abs(x)))
    for i in range(fmap.grid.nz):
        row = fmap.power[i]
        peaks[i] = x[order[np.argmax(row[order])]]
    return fmap.grid.z_coords, peaks


def fraunhofer_distance(array: UlaArray, carrier: CarrierConfig) -> float:
    """Far-field (Fraunhofer) distance 2*L_x^2/lambda of the full aperture in metres."""
    aperture = array.aperture_m
    return 2.0 * aperture * aperture / carrier.wavelength_m


def _write_header_comments(handle, header):
    for key, value in (header or {}).items():
        handle.write(f"# {key}: {value}\n")


def write_field_csv(fmap: FieldMap, path, header=None) -> None:
    """Write a field map as CSV with columns x, z, re, im, power_density.

    Rows run z-outer (all x for the first z, then the next z), matching the
    PGM raster order.  Floats are written in shortest round-trip form, so a
    rerun with identical inputs reproduces the file byte for byte.
    """
    x = fmap.grid.x_coords
    z = fmap.grid.z_coords
    invalid = int(fmap.valid.size - np.count_nonzero(fmap.valid))
    with open(path, "w", encoding="ascii", newline="\n") as handle:
        _write_header_comments(handle, header)
        handle.write(f"# invalid_samples: {invalid}\n")
        handle.write("x,z,re,im,power_density\n")
        for i in range(fmap.grid.nz):
            zi = repr(float(z[i]))
            row_v = fmap.values[i]
            row_p = fmap.power[i]
            lines = [
                f"{float(x[j])!r},{zi},{float(row_v[j].real)!r},"
                f"{float(row_v[j].imag)!r},{float(row_p[j])!r}"
                for j in range(fmap.grid.nx)
            ]
            handle.write("\n".join(lines) + "\n")


# Dynamic range below the map maximum rendered into the PGM gray scale, dB.
PGM_DYNAMIC_RANGE_DB = 60.0
_PGM_MAX_GRAY = 65535


def write_field_pgm(fmap: FieldMap, path, header=None) -> None:
    """Render the power map as a plain (P2) 16-bit PGM heat map.

    Gray levels are log-scaled: the map maximum maps to 65535 and anything
    PGM_DYNAMIC_RANGE_DB or more below it (and every invalid or zero-power
    sample) maps to 0.  Raster order is row-major with z outer, one grid row
    per image row starting at z_min.
    """
    power = np.where(fmap.valid, fmap.power, 0.0)
    peak = float(power.max())
    gray = np.zeros(power.shape, dtype=int)
    if peak > 0:
        positive = power > 0
        db = np.full(power.shape, -np.inf)
        db[positive] = 10.0 * np.log10(power[positive] / peak)
        scaled = (db + PGM_DYNAMIC_RANGE_DB) / PGM_DYNAMIC_RANGE_DB
        gray = np.clip(np.rint(scaled * _PGM_MAX_GRAY), 0, _PGM_MAX_GRAY).astype(int)
    with open(path, "w", encoding="ascii", newline="\n") as handle:
        handle.write("P2\n")
        _write_header_comments(handle, header)
        handle.write(f"# dynamic_range_db: {PGM_DYNAMIC_RANGE_DB:g}\n")
        handle.write(f"{fmap.grid.nx} {fmap.grid.nz}\n")
        handle.write(f"{_PGM_MAX_GRAY}\n")
        for i in range(fmap.grid.nz):
            row = gray[i]
            for lo in range(0, row.size, 16):
                handle.write(" ".join(str(v) for v in row[lo:lo + 16]) + "\n")
