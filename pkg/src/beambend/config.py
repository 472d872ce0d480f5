"""Run descriptions: JSON scene configs, defaults, and strict validation.

A scene config is a nested JSON object with sections carrier, array, beam,
rx, pls, grid, sweep and output.  Every key is validated; unknown keys are
errors rather than silently ignored, since a typoed parameter name that
falls back to a default is the worst kind of simulation bug.

Config errors (shape, type, range of the description itself) raise
ConfigError; physically impossible requests surface later as
PhysicsDomainError from the model layer.  The CLI maps the two to distinct
exit codes.
"""

from __future__ import annotations

import copy
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .array import CarrierConfig, UlaArray
from .errors import ConfigError
from .propagation import ObservationGrid
from .trajectory import RxLocation

DEFAULT_SEED = 24601

DEFAULTS = {
    "carrier": {"wavelength_m": 0.002},
    "array": {
        "n_elements": 1000,
        "spacing_m": 0.001,
        "element_power_w": 0.001,
        "element_gain": 1.0,
        "pattern": "omni",
    },
    "beam": {"mode": "bending", "beta": 0.005, "x0c": 0.0},
    "rx": {"x": 0.0, "z": 8.0},
    "pls": {
        "snr_db": [10.0],
        "thresholds": [0.5, 0.9, 0.99],
        "radii": [1.0],
        "samples": 10000,
        "seed": DEFAULT_SEED,
        "coverage_sweep": "radius",
    },
    "grid": {
        "x_min": -1.0,
        "x_max": 1.0,
        "nx": 1001,
        "z_min": 0.05,
        "z_max": 9.99,
        "nz": 498,
    },
    "sweep": {
        "beta": {"min": 0.001, "max": 0.02, "step": 0.0005},
        "z_eve": {"min": 0.25, "max": 10.0, "n": 391},
    },
    "output": {"dir": "out", "stem": "run"},
}

_SECTION_KEYS = {
    "carrier": {"wavelength_m", "frequency_hz"},
    "array": {"n_elements", "spacing_m", "element_power_w", "element_gain", "pattern"},
    "beam": {"mode", "beta", "x0c", "x0", "z0", "n_elements", "normalize_total_power"},
    "rx": {"x", "z"},
    "pls": {"snr_db", "thresholds", "radii", "samples", "seed", "coverage_sweep"},
    "grid": {"x_min", "x_max", "nx", "z_min", "z_max", "nz"},
    "sweep": {"beta", "z_eve"},
    "output": {"dir", "stem"},
}

_U64_MAX = (1 << 64) - 1


@dataclass
class SceneConfig:
    """Validated, fully defaulted run description."""

    carrier: dict
    array: dict
    beam: dict
    rx: dict
    pls: dict
    grid: dict
    sweep: dict
    output: dict
    preset: str | None = None

    def as_dict(self) -> dict:
        return {
            "carrier": copy.deepcopy(self.carrier),
            "array": copy.deepcopy(self.array),
            "beam": copy.deepcopy(self.beam),
            "rx": copy.deepcopy(self.rx),
            "pls": copy.deepcopy(self.pls),
            "grid": copy.deepcopy(self.grid),
            "sweep": copy.deepcopy(self.sweep),
            "output": copy.deepcopy(self.output),
        }


def _require_number(section: str, key: str, value, minimum=None, strict_min=False):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{section}.{key} must be a number, got {value!r}")
    if not math.isfinite(value):
        raise ConfigError(f"{section}.{key} must be finite, got {value!r}")
    if minimum is not None:
        if strict_min and not value > minimum:
            raise ConfigError(f"{section}.{key} must be > {minimum:g}, got {value!r}")
        if not strict_min and not value >= minimum:
            raise ConfigError(f"{section}.{key} must be >= {minimum:g}, got {value!r}")
    return float(value)


def _require_int(section: str, key: str, value, minimum=1):
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{section}.{key} must be an integer, got {value!r}")
    if value < minimum:
        raise ConfigError(f"{section}.{key} must be >= {minimum}, got {value}")
    return value


def _check_keys(section: str, mapping, allowed) -> None:
    if not isinstance(mapping, dict):
        raise ConfigError(f"section '{section}' must be an object")
    unknown = sorted(set(mapping) - set(allowed))
    if unknown:
        raise ConfigError(f"unknown key '{section}.{unknown[0]}'")


def _merge_section(name: str, base: dict, override: dict) -> dict:
    _check_keys(name, override, _SECTION_KEYS[name])
    merged = copy.deepcopy(base)
    if name == "carrier" and ("wavelength_m" in override or "frequency_hz" in override):
        merged = {}  # the supplied quantity becomes authoritative
    if name == "beam" and "mode" in override:
        merged = {}  # a new mode resets the mode-specific parameters
    merged.update(copy.deepcopy(override))
    return merged


def parse_config(raw: dict, preset: str | None = None) -> SceneConfig:
    """Validate a raw config dict, fill defaults, and return a SceneConfig."""
    if not isinstance(raw, dict):
        raise ConfigError("config root must be a JSON object")
    unknown = sorted(set(raw) - set(_SECTION_KEYS))
    if unknown:
        raise ConfigError(f"unknown section '{unknown[0]}'")
    sections = {name: _merge_section(name, DEFAULTS[name], raw.get(name, {}))
                for name in _SECTION_KEYS}
    cfg = SceneConfig(preset=preset, **sections)
    _validate(cfg)
    return cfg


def load_config(path) -> SceneConfig:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            raw = json.load(handle)
    except OSError as err:
        raise ConfigError(f"cannot read config file {path}: {err}") from err
    except json.JSONDecodeError as err:
        raise ConfigError(f"config file {path} is not valid JSON: {err}") from err
    return parse_config(raw)


def _validate(cfg: SceneConfig) -> None:
    carrier = cfg.carrier
    if "wavelength_m" in carrier and "frequency_hz" in carrier:
        raise ConfigError("carrier: give wavelength_m or frequency_hz, not both")
    if "wavelength_m" in carrier:
        _require_number("carrier", "wavelength_m", carrier["wavelength_m"], 0.0, True)
    elif "frequency_hz" in carrier:
        _require_number("carrier", "frequency_hz", carrier["frequency_hz"], 0.0, True)
    else:
        raise ConfigError("carrier: one of wavelength_m or frequency_hz is required")

    arr = cfg.array
    _require_int("array", "n_elements", arr["n_elements"], 1)
    _require_number("array", "spacing_m", arr["spacing_m"], 0.0, True)
    _require_number("array", "element_power_w", arr["element_power_w"], 0.0, True)
    _require_number("array", "element_gain", arr["element_gain"], 0.0, True)
    if arr["pattern"] != "omni":
        raise ConfigError(f"array.pattern: only 'omni' ships with the package, got {arr['pattern']!r}")

    beam = cfg.beam
    mode = beam.get("mode")
    if mode not in ("bending", "broadside"):
        raise ConfigError(f"beam.mode must be 'bending' or 'broadside', got {mode!r}")
    if mode == "bending":
        has_x0c = "x0c" in beam
        has_vertex = "x0" in beam or "z0" in beam
        if has_x0c and has_vertex:
            raise ConfigError("beam: give either x0c (receiver-targeted design) or x0+z0 (explicit vertex), not both")
        if not has_x0c and not ("x0" in beam and "z0" in beam):
            raise ConfigError("beam: bending mode needs x0c, or both x0 and z0")
        if "beta" in beam:
            _require_number("beam", "beta", beam["beta"])
        elif has_vertex:
            raise ConfigError("beam: an explicit vertex needs beta")
        for key in ("x0c", "x0"):
            if key in beam:
                _require_number("beam", key, beam[key])
        if "z0" in beam:
            _require_number("beam", "z0", beam["z0"], 0.0, True)
        if "n_elements" in beam:
            raise ConfigError("beam.n_elements applies to broadside mode only")
    else:
        for key in ("beta", "x0c", "x0", "z0"):
            if key in beam:
                raise ConfigError(f"beam.{key} applies to bending mode only")
        if "n_elements" in beam:
            _require_int("beam", "n_elements", beam["n_elements"], 1)
    if "normalize_total_power" in beam and not isinstance(beam["normalize_total_power"], bool):
        raise ConfigError("beam.normalize_total_power must be a boolean")

    _require_number("rx", "x", cfg.rx["x"])
    _require_number("rx", "z", cfg.rx["z"], 0.0, True)

    pls = cfg.pls
    for key in ("snr_db", "thresholds", "radii"):
        if not isinstance(pls[key], list) or not pls[key]:
            raise ConfigError(f"pls.{key} must be a non-empty list")
    for snr in pls["snr_db"]:
        _require_number("pls", "snr_db", snr)
    for m in pls["thresholds"]:
        m = _require_number("pls", "thresholds", m)
        if not 0 <= m <= 1:
            raise ConfigError(f"pls.thresholds entries are fractions of S_max in [0, 1], got {m!r}")
    for radius in pls["radii"]:
        _require_number("pls", "radii", radius, 0.0, True)
    _require_int("pls", "samples", pls["samples"], 1)
    seed = pls["seed"]
    if isinstance(seed, bool) or not isinstance(seed, int) or not 0 <= seed <= _U64_MAX:
        raise ConfigError(f"pls.seed must be an unsigned 64-bit integer, got {seed!r}")
    if pls["coverage_sweep"] not in ("radius", "beta"):
        raise ConfigError(f"pls.coverage_sweep must be 'radius' or 'beta', got {pls['coverage_sweep']!r}")

    grid = cfg.grid
    _require_number("grid", "x_min", grid["x_min"])
    _require_number("grid", "x_max", grid["x_max"])
    _require_number("grid", "z_min", grid["z_min"], 0.0, True)
    _require_number("grid", "z_max", grid["z_max"], 0.0, True)
    _require_int("grid", "nx", grid["nx"], 2)
    _require_int("grid", "nz", grid["nz"], 2)
    if not (grid["x_min"] < grid["x_max"] and grid["z_min"] < grid["z_max"]):
        raise ConfigError("grid extents must satisfy min < max on both axes")

    sweep = cfg.sweep
    beta = sweep.get("beta")
    if beta is not None:
        _check_keys("sweep.beta", beta, {"min", "max", "step"})
        for key in ("min", "max", "step"):
            if key not in beta:
                raise ConfigError(f"sweep.beta.{key} is required")
        _require_number("sweep.beta", "min", beta["min"])
        _require_number("sweep.beta", "max", beta["max"])
        _require_number("sweep.beta", "step", beta["step"], 0.0, True)
        if beta["max"] < beta["min"]:
            raise ConfigError("sweep.beta.max must be >= sweep.beta.min")
    z_eve = sweep.get("z_eve")
    if z_eve is not None:
        _check_keys("sweep.z_eve", z_eve, {"min", "max", "n"})
        for key in ("min", "max", "n"):
            if key not in z_eve:
                raise ConfigError(f"sweep.z_eve.{key} is required")
        _require_number("sweep.z_eve", "min", z_eve["min"], 0.0, True)
        _require_number("sweep.z_eve", "max", z_eve["max"], 0.0, True)
        _require_int("sweep.z_eve", "n", z_eve["n"], 1)
        if z_eve["max"] < z_eve["min"]:
            raise ConfigError("sweep.z_eve.max must be >= sweep.z_eve.min")

    out = cfg.output
    for key in ("dir", "stem"):
        if not isinstance(out[key], str) or not out[key]:
            raise ConfigError(f"output.{key} must be a non-empty string")


# ---------------------------------------------------------------------------
# builders


def carrier_from(cfg: SceneConfig) -> CarrierConfig:
    if "wavelength_m" in cfg.carrier:
        return CarrierConfig.from_wavelength(cfg.carrier["wavelength_m"])
    return CarrierConfig.from_frequency(cfg.carrier["frequency_hz"])


def array_from(cfg: SceneConfig) -> UlaArray:
    arr = cfg.array
    return UlaArray(n_elements=arr["n_elements"], spacing_m=arr["spacing_m"],
                    element_power_w=arr["element_power_w"],
                    element_gain=arr["element_gain"])


def rx_from(cfg: SceneConfig) -> RxLocation:
    return RxLocation(x=cfg.rx["x"], z=cfg.rx["z"])


def grid_from(cfg: SceneConfig) -> ObservationGrid:
    g = cfg.grid
    return ObservationGrid(x_min=g["x_min"], x_max=g["x_max"], nx=g["nx"],
                           z_min=g["z_min"], z_max=g["z_max"], nz=g["nz"])


def scene_from(cfg: SceneConfig, snr_db: float | None = None, beta: float | None = None):
    """Build the SecrecyScene a config describes.

    snr_db defaults to the first pls.snr_db entry; beta overrides the beam
    curvature (used by sweep commands that redesign per sample).
    """
    from . import pls as _pls

    carrier = carrier_from(cfg)
    array = array_from(cfg)
    rx = rx_from(cfg)
    snr = float(cfg.pls["snr_db"][0]) if snr_db is None else float(snr_db)
    beam = cfg.beam
    normalize = bool(beam.get("normalize_total_power", False))
    if beam["mode"] == "broadside":
        return _pls.broadside_scene(carrier, array, rx, snr,
                                    n_active=beam.get("n_elements"),
                                    normalize_total_power=normalize)
    if beta is None:
        beta = beam.get("beta")
        if beta is None:
            raise ConfigError("beam.beta is required for this command")
    if "x0c" in beam:
        return _pls.bending_scene(carrier, array, rx, float(beta), beam["x0c"], snr,
                                  normalize_total_power=normalize)
    return _pls.bending_scene_from_vertex(carrier, array, rx, float(beta),
                                          beam["x0"], beam["z0"], snr,
                                          normalize_total_power=normalize)


def beta_samples_from(cfg: SceneConfig) -> np.ndarray:
    beta = cfg.sweep.get("beta")
    if beta is None:
        raise ConfigError("this command needs a sweep.beta section")
    lo, hi, step = beta["min"], beta["max"], beta["step"]
    count = int(math.floor((hi - lo) / step + 0.5)) + 1
    return lo + step * np.arange(count)


def z_samples_from(cfg: SceneConfig):
    z_eve = cfg.sweep.get("z_eve")
    if z_eve is None:
        return None
    return np.linspace(z_eve["min"], z_eve["max"], z_eve["n"])
