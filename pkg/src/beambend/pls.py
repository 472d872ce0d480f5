"""Physical-layer secrecy metrics built on the propagation model.

The receiver operates at a configured reference SNR.  An eavesdropper at a
different spot sees the same waveform scaled by the power-density ratio of
the two positions, so

    SNR_eve = SNR_rx * p_eve / p_rx
    S = log2(1 + SNR_rx) - log2(1 + SNR_eve)        (bits/s/Hz)

S is positive wherever the link to the receiver out-hears the tap and tops
out at S_max = log2(1 + SNR_rx) when the eavesdropper gets nothing.

Monte-Carlo coverage uses a counter-based RNG, SplitMix64 (Steele, Lea and
Flood's mixing constants).  The j-th draw of sample i is output j of a
SplitMix64 stream seeded with output i of a SplitMix64 stream seeded with
the 64-bit run seed.  Every draw is a pure function of (seed, i, j), so the
sample set is byte-reproducible across runs, platforms and worker counts;
the algorithm identity is part of the golden-output contract for coverage
CSV files.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .array import FREE_SPACE_IMPEDANCE, ArrayExcitation, CarrierConfig, UlaArray, broadside_excitation, build_excitation
from .errors import PhysicsDomainError
from .propagation import field_map, field_points, ObservationGrid, FieldMap
from .trajectory import RxLocation, TrajectoryParams, active_window, design_from_rx, phase_profile

LN2 = math.log(2.0)

# Observation points are kept above this height when sampling eavesdropper
# positions, matching the default grid floor.
DISK_Z_FLOOR = 0.05


# ---------------------------------------------------------------------------
# secrecy rate


def s_max(snr_rx_db: float) -> float:
    """Secrecy ceiling log2(1 + SNR_rx) in bits/s/Hz."""
    return math.log1p(10.0 ** (snr_rx_db / 10.0)) / LN2


def secrecy_rate(snr_rx_db: float, power_ratio):
    """Secrecy rate for an eavesdropper-to-receiver power-density ratio.

    Parameters
    ----------
    snr_rx_db : float
        Receiver reference SNR in dB.
    power_ratio : array_like
        p_eve / p_rx, non-negative.  Ratio 1 gives exactly 0; ratios above 1
        (eavesdropper better placed than the receiver) give negative rates.
    """
    ratio = np.asarray(power_ratio, dtype=float)
    if np.any(ratio < 0):
        raise PhysicsDomainError("power ratio must be non-negative")
    snr = 10.0 ** (snr_rx_db / 10.0)
    out = (np.log1p(snr) - np.log1p(snr * ratio)) / LN2
    return float(out) if out.ndim == 0 else out


# ---------------------------------------------------------------------------
# scenes


@dataclass(frozen=True, eq=False)
class SecrecyScene:
    """A transmit design, its intended receiver and the reference SNR."""

    carrier: CarrierConfig
    array: UlaArray
    excitation: ArrayExcitation
    rx: RxLocation
    snr_rx_db: float
    trajectory: TrajectoryParams | None = None

    @property
    def s_max(self) -> float:
        return s_max(self.snr_rx_db)


def bending_scene(carrier: CarrierConfig, array: UlaArray, rx: RxLocation,
                  beta: float, x0c: float, snr_rx_db: float,
                  normalize_total_power: bool = False) -> SecrecyScene:
    """Design a bending beam through rx with crossing x0c and wrap it in a scene."""
    params = design_from_rx(rx, beta, x0c)
    return _scene_from_params(carrier, array, rx, params, snr_rx_db, normalize_total_power)


def bending_scene_from_vertex(carrier: CarrierConfig, array: UlaArray, rx: RxLocation,
                              beta: float, x0: float, z0: float, snr_rx_db: float,
                              normalize_total_power: bool = False) -> SecrecyScene:
    """Scene for an explicitly parameterized caustic (curvature plus vertex)."""
    params = TrajectoryParams(beta=beta, x0=x0, z0=z0)
    return _scene_from_params(carrier, array, rx, params, snr_rx_db, normalize_total_power)


def _scene_from_params(carrier, array, rx, params, snr_rx_db, normalize_total_power):
    window = active_window(params, array)
    excitation = build_excitation(
        array, lambda x: phase_profile(params, carrier, x), window,
        normalize_total_power=normalize_total_power)
    return SecrecyScene(carrier=carrier, array=array, excitation=excitation,
                        rx=rx, snr_rx_db=snr_rx_db, trajectory=params)


def broadside_scene(carrier: CarrierConfig, array: UlaArray, rx: RxLocation,
                    snr_rx_db: float, n_active: int | None = None,
                    normalize_total_power: bool = False) -> SecrecyScene:
    """Phase-0 beamforming baseline over the centred n_active elements."""
    excitation = broadside_excitation(array, n_active, normalize_total_power)
    return SecrecyScene(carrier=carrier, array=array, excitation=excitation,
                        rx=rx, snr_rx_db=snr_rx_db, trajectory=None)


def power_density_at(scene: SecrecyScene, x, z, threads=None) -> np.ndarray:
    """Power density |E|^2/(2*Z0) in W/m^2 at flat coordinate arrays."""
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    zs = np.atleast_1d(np.asarray(z, dtype=float))
    values = field_points(scene.array, scene.excitation, scene.carrier, xs, zs, threads)
    return (values.real ** 2 + values.imag ** 2) / (2.0 * FREE_SPACE_IMPEDANCE)


def rx_power_density(scene: SecrecyScene, threads=None) -> float:
    """Power density delivered to the intended receiver."""
    return float(power_density_at(scene, scene.rx.x, scene.rx.z, threads)[0])


# ---------------------------------------------------------------------------
# line-of-sight sweep


@dataclass(frozen=True, eq=False)
class LosSweepResult:
    """Eavesdropper sweep along the transmitter-receiver line of sight."""

    z_eve: np.ndarray
    power_ratio: np.ndarray
    secrecy: np.ndarray
    snr_rx_db: float
    p_rx: float


def los_sweep(scene: SecrecyScene, z_samples, threads=None) -> LosSweepResult:
    """Sweep an eavesdropper along x = x_rx through depths z_samples.

    The sweep reports the eavesdropper-to-receiver power ratio and the
    secrecy rate at each depth.  A sample at exactly z_rx reproduces the
    receiver point, giving ratio 1 and secrecy 0 with no rounding residue.
    """
    z = np.asarray(z_samples, dtype=float)
    if z.ndim != 1 or z.size == 0:
        raise PhysicsDomainError("z_samples must be a non-empty 1-D array")
    if np.any(z <= 0):
        raise PhysicsDomainError("line-of-sight sweep depths must be strictly positive")
    p_rx = rx_power_density(scene, threads)
    p_eve = power_density_at(scene, np.full(z.shape, scene.rx.x), z, threads)
    ratio = p_eve / p_rx
    return LosSweepResult(z_eve=z, power_ratio=ratio,
                          secrecy=secrecy_rate(scene.snr_rx_db, ratio),
                          snr_rx_db=scene.snr_rx_db, p_rx=p_rx)


# ---------------------------------------------------------------------------
# curvature sweep


@dataclass(frozen=True, eq=False)
class BetaSweepResult:
    """Receiver power and secrecy profiles across a curvature grid.

    Curvatures with no valid design (beta = 0, vertex behind the aperture,
    empty window) stay in the grid as NaN rows with a note; they are gaps,
    not silently dropped points.
    """

    beta: np.ndarray
    p_rx_density: np.ndarray
    z_eve: np.ndarray | None
    secrecy: np.ndarray | None
    notes: list
    snr_rx_db: float


def beta_sweep(carrier: CarrierConfig, array: UlaArray, rx: RxLocation, x0c: float,
               beta_samples, z_samples=None, snr_rx_db: float = 10.0,
               threads=None) -> BetaSweepResult:
    """Redesign the beam for each curvature and profile power and secrecy.

    For every beta the caustic is re-designed through rx with the same
    crossing x0c, the window re-derived and the receiver power density
    recorded.  With z_samples given, the line-of-sight secrecy profile is
    evaluated per curvature into a (n_beta, n_z) matrix.
    """
    betas = np.asarray(beta_samples, dtype=float)
    if betas.ndim != 1 or betas.size == 0:
        raise PhysicsDomainError("beta_samples must be a non-empty 1-D array")
    z = None
    if z_samples is not None:
        z = np.asarray(z_samples, dtype=float)
        if np.any(z <= 0):
            raise PhysicsDomainError("line-of-sight sweep depths must be strictly positive")
    p_rx = np.full(betas.shape, np.nan)
    secrecy = np.full((betas.size, z.size), np.nan) if z is not None else None
    notes: list = [None] * betas.size
    for i, beta in enumerate(betas):
        try:
            scene = bending_scene(carrier, array, rx, float(beta), x0c, snr_rx_db)
        except PhysicsDomainError as err:
            notes[i] = str(err)
            continue
        if z is not None:
            sweep = los_sweep(scene, z, threads)
            p_rx[i] = sweep.p_rx
            secrecy[i] = sweep.secrecy
        else:
            p_rx[i] = rx_power_density(scene, threads)
    return BetaSweepResult(beta=betas, p_rx_density=p_rx, z_eve=z, secrecy=secrecy,
                           notes=notes, snr_rx_db=snr_rx_db)


# ---------------------------------------------------------------------------
# secrecy map


@dataclass(frozen=True, eq=False)
class SecrecyMapResult:
    """Secrecy rate over an observation grid, with the underlying field map."""

    fmap: FieldMap
    power_ratio: np.ndarray
    secrecy: np.ndarray
    p_rx: float
    snr_rx_db: float
    s_max: float


def secrecy_map(scene: SecrecyScene, grid: ObservationGrid, threads=None) -> SecrecyMapResult:
    """Map S over a grid of hypothetical eavesdropper positions.

    The reference power is evaluated at the exact receiver point, so when
    the receiver lies on a grid node the map is exactly zero there.
    Invalid (near-element) samples keep ratio 0, i.e. S = S_max, and stay
    flagged through fmap.valid.
    """
    fmap = field_map(scene.array, scene.excitation, scene.carrier, grid, threads)
    p_rx = rx_power_density(scene, threads)
    ratio = fmap.power / p_rx
    return SecrecyMapResult(fmap=fmap, power_ratio=ratio,
                            secrecy=secrecy_rate(scene.snr_rx_db, ratio),
                            p_rx=p_rx, snr_rx_db=scene.snr_rx_db,
                            s_max=s_max(scene.snr_rx_db))


# ---------------------------------------------------------------------------
# counter-based RNG (SplitMix64)

_SM64_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_SM64_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_SM64_MIX2 = np.uint64(0x94D049BB133111EB)
_U64_MASK = (1 << 64) - 1


def _sm64_mix(v: np.ndarray) -> np.ndarray:
    v = (v ^ (v >> np.uint64(30))) * _SM64_MIX1
    v = (v ^ (v >> np.uint64(27))) * _SM64_MIX2
    return v ^ (v >> np.uint64(31))


def splitmix64_stream(seed: int, start: int, count: int) -> np.ndarray:
    """Outputs start .. start+count-1 of the SplitMix64 stream for a 64-bit seed."""
    counters = np.arange(start + 1, start + count + 1, dtype=np.uint64)
    return _sm64_mix(np.uint64(seed & _U64_MASK) + counters * _SM64_GAMMA)


def _unit_doubles(u: np.ndarray) -> np.ndarray:
    """Map uint64 words to doubles in [0, 1) using the top 53 bits."""
    return (u >> np.uint64(11)).astype(float) * (2.0 ** -53)


# ---------------------------------------------------------------------------
# disk coverage


@dataclass(frozen=True)
class DiskEveModel:
    """Eavesdropper uniformly distributed on a disk around the receiver.

    Samples whose height falls at or below z_floor are redrawn from the
    sample's own substream (the disk is clipped to the physical half-space
    in front of the array); the number of redraws is reported so clipped
    geometries are visible in the output.
    """

    center: RxLocation
    radius_m: float
    sample_count: int = 10000
    seed: int = 0
    z_floor: float = DISK_Z_FLOOR

    def __post_init__(self):
        if not (math.isfinite(self.radius_m) and self.radius_m > 0):
            raise PhysicsDomainError(f"disk radius must be positive, got {self.radius_m!r}")
        if self.sample_count < 1:
            raise PhysicsDomainError("sample count must be at least 1")
        if not 0 <= self.seed <= _U64_MASK:
            raise PhysicsDomainError("seed must fit in 64 bits")
        if self.z_floor < 0:
            raise PhysicsDomainError("z floor must be non-negative")


_MAX_REDRAWS = 1024


def sample_disk(model: DiskEveModel) -> tuple[np.ndarray, np.ndarray, int]:
    """Draw the eavesdropper positions: uniform on the clipped disk.

    Polar inversion sampling, r = R*sqrt(u1) and theta = 2*pi*u2, keeps the
    density uniform over area; rejection against the z floor preserves it on
    the clipped disk.  Draw j of sample i depends only on (seed, i, j), so
    the full position set is independent of batching and thread count.
    """
    if model.center.z + model.radius_m <= model.z_floor:
        raise PhysicsDomainError(
            f"eavesdropper disk (center z = {model.center.z:g} m, radius "
            f"{model.radius_m:g} m) lies entirely at or below the z floor {model.z_floor:g} m")
    n = model.sample_count
    substream = splitmix64_stream(model.seed, 0, n)
    gamma = int(_SM64_GAMMA)
    xs = np.empty(n, dtype=float)
    zs = np.empty(n, dtype=float)
    pending = np.arange(n)
    resamples = 0
    for attempt in range(_MAX_REDRAWS):
        draw = substream[pending]
        u1 = _unit_doubles(_sm64_mix(draw + np.uint64(((2 * attempt + 1) * gamma) & _U64_MASK)))
        u2 = _unit_doubles(_sm64_mix(draw + np.uint64(((2 * attempt + 2) * gamma) & _U64_MASK)))
        r = model.radius_m * np.sqrt(u1)
        theta = 2.0 * math.pi * u2
        xs[pending] = model.center.x + r * np.cos(theta)
        zs[pending] = model.center.z + r * np.sin(theta)
        keep = zs[pending] > model.z_floor
        resamples += int(pending.size - np.count_nonzero(keep))
        pending = pending[~keep]
        if pending.size == 0:
            return xs, zs, resamples
    raise PhysicsDomainError(
        f"could not place eavesdroppers above the z floor after {_MAX_REDRAWS} "
        f"redraws; the disk is almost entirely clipped")


@dataclass(frozen=True)
class CoverageResult:
    """Monte-Carlo estimate of Pr[S > M * S_max] for one disk geometry."""

    radius_m: float
    thresholds: tuple
    probabilities: tuple
    standard_errors: tuple
    n_samples: int
    seed: int
    resample_count: int
    snr_rx_db: float
    s_max: float


def disk_coverage(scene: SecrecyScene, eve: DiskEveModel, thresholds,
                  threads=None) -> CoverageResult:
    """Estimate the probability that S stays above each threshold fraction.

    For each threshold M in `thresholds` the estimate is the fraction of
    eavesdropper positions with S > M * S_max, with the binomial standard
    error sqrt(p*(1-p)/n).  Field evaluation order is fixed, so results for
    a given seed are byte-stable across runs and thread counts.
    """
    thresholds = tuple(float(m) for m in thresholds)
    if not thresholds:
        raise PhysicsDomainError("at least one coverage threshold is required")
    if any(not 0 <= m <= 1 for m in thresholds):
        raise PhysicsDomainError("coverage thresholds are fractions of S_max in [0, 1]")
    xs, zs, resamples = sample_disk(eve)
    p_rx = rx_power_density(scene, threads)
    p_eve = power_density_at(scene, xs, zs, threads)
    secrecy = secrecy_rate(scene.snr_rx_db, p_eve / p_rx)
    ceiling = s_max(scene.snr_rx_db)
    n = eve.sample_count
    probabilities = []
    errors = []
    for m in thresholds:
        hits = int(np.count_nonzero(secrecy > m * ceiling))
        p = hits / n
        probabilities.append(p)
        errors.append(math.sqrt(p * (1.0 - p) / n))
    return CoverageResult(radius_m=eve.radius_m, thresholds=thresholds,
                          probabilities=tuple(probabilities),
                          standard_errors=tuple(errors),
                          n_samples=n, seed=eve.seed, resample_count=resamples,
                          snr_rx_db=scene.snr_rx_db, s_max=ceiling)


def coverage_vs_beta(carrier: CarrierConfig, array: UlaArray, rx: RxLocation, x0c: float,
                     beta_samples, radius_m: float, thresholds, snr_rx_db: float,
                     sample_count: int = 10000, seed: int = 0, threads=None) -> list:
    """Coverage across a curvature grid, one redesigned beam per beta.

    Every beta reuses the same seed, hence the same eavesdropper positions;
    curves over beta are paired comparisons, not independent estimates.
    Returns a list of (beta, CoverageResult or None, note) rows where
    invalid designs appear as gaps with a diagnostic note.
    """
    rows = []
    for beta in np.asarray(beta_samples, dtype=float):
        try:
            scene = bending_scene(carrier, array, rx, float(beta), x0c, snr_rx_db)
        except PhysicsDomainError as err:
            rows.append((float(beta), None, str(err)))
            continue
        eve = DiskEveModel(center=rx, radius_m=radius_m,
                           sample_count=sample_count, seed=seed)
        rows.append((float(beta), disk_coverage(scene, eve, thresholds, threads), None))
    return rows


# ---------------------------------------------------------------------------
# delimited output


def _write_comments(handle, header):
    for key, value in (header or {}).items():
        handle.write(f"# {key}: {value}\n")


def write_los_csv(result: LosSweepResult, path, header=None) -> None:
    """CSV columns: z_eve, power_ratio_db, secrecy_rate."""
    with open(path, "w", encoding="ascii", newline="\n") as handle:
        _write_comments(handle, header)
        handle.write(f"# snr_rx_db: {result.snr_rx_db:g}\n")
        handle.write("z_eve,power_ratio_db,secrecy_rate\n")
        with np.errstate(divide="ignore"):
            ratio_db = 10.0 * np.log10(result.power_ratio)
        for i in range(result.z_eve.size):
            handle.write(f"{float(result.z_eve[i])!r},{float(ratio_db[i])!r},"
                         f"{float(result.secrecy[i])!r}\n")


def write_secrecy_csv(result: SecrecyMapResult, path, header=None) -> None:
    """CSV of the secrecy map: x, z, power_ratio, secrecy_rate (z-outer rows)."""
    grid = result.fmap.grid
    x = grid.x_coords
    z = grid.z_coords
    with open(path, "w", encoding="ascii", newline="\n") as handle:
        _write_comments(handle, header)
        handle.write(f"# snr_rx_db: {result.snr_rx_db:g}\n")
        handle.write(f"# s_max: {result.s_max!r}\n")
        handle.write(f"# p_rx_density: {result.p_rx!r}\n")
        handle.write("x,z,power_ratio,secrecy_rate\n")
        for i in range(grid.nz):
            zi = repr(float(z[i]))
            lines = [
                f"{float(x[j])!r},{zi},{float(result.power_ratio[i, j])!r},"
                f"{float(result.secrecy[i, j])!r}"
                for j in range(grid.nx)
            ]
            handle.write("\n".join(lines) + "\n")


def write_beta_prx_csv(result: BetaSweepResult, path, header=None) -> None:
    """CSV columns: beta, p_rx_density.  Design gaps stay as NaN rows."""
    gaps = sum(1 for note in result.notes if note is not None)
    with open(path, "w", encoding="ascii", newline="\n") as handle:
        _write_comments(handle, header)
        handle.write(f"# design_gaps: {gaps}\n")
        for beta, note in zip(result.beta, result.notes):
            if note is not None:
                handle.write(f"# gap at beta = {float(beta)!r}: {note}\n")
        handle.write("beta,p_rx_density\n")
        for i in range(result.beta.size):
            handle.write(f"{float(result.beta[i])!r},{float(result.p_rx_density[i])!r}\n")


def write_beta_secrecy_csv(result: BetaSweepResult, path, header=None) -> None:
    """Long-form CSV of the secrecy matrix: beta, z_eve, secrecy_rate."""
    if result.secrecy is None:
        raise PhysicsDomainError("beta sweep was run without line-of-sight depths")
    with open(path, "w", encoding="ascii", newline="\n") as handle:
        _write_comments(handle, header)
        handle.write(f"# snr_rx_db: {result.snr_rx_db:g}\n")
        handle.write("beta,z_eve,secrecy_rate\n")
        for i in range(result.beta.size):
            bi = repr(float(result.beta[i]))
            for j in range(result.z_eve.size):
                handle.write(f"{bi},{float(result.z_eve[j])!r},"
                             f"{float(result.secrecy[i, j])!r}\n")


def write_coverage_csv(rows, path, header=None, sweep_column: str = "radius_m") -> None:
    """Long-form coverage CSV: sweep value, threshold, probability, stderr, n, seed.

    `rows` is a list of (sweep_value, CoverageResult or None, note); gap rows
    are recorded as comments so sweeps keep their full domain.
    """
    with open(path, "w", encoding="ascii", newline="\n") as handle:
        _write_comments(handle, header)
        for value, result, note in rows:
            if result is None:
                handle.write(f"# gap at {sweep_column} = {float(value)!r}: {note}\n")
        handle.write(f"{sweep_column},threshold,probability,stderr,n_samples,seed\n")
        for value, result, note in rows:
            if result is None:
                continue
            for m, p, se in zip(result.thresholds, result.probabilities,
                                result.standard_errors):
                handle.write(f"{float(value)!r},{float(m)!r},{float(p)!r},"
                             f"{float(se)!r},{result.n_samples},{result.seed}\n")
