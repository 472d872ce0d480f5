"""Named presets reproducing the reference figure configurations.

Each preset pins a command and a config fragment (merged over the package
defaults) so a figure regenerates end to end from a single invocation, e.g.

    beambend field-map --preset fig1

The field-map presets also emit the secrecy map of the same scene, covering
the paired secrecy panels (fig4a covers the fig4b map, fig4d covers fig4e,
fig4g covers fig4h).
"""

from __future__ import annotations

import copy

from .config import SceneConfig, parse_config
from .errors import ConfigError

_BETA_FINE = {"min": 0.001, "max": 0.02, "step": 0.0001}
_BETA_COARSE = {"min": 0.001, "max": 0.02, "step": 0.0005}
_Z_EVE = {"min": 0.25, "max": 10.0, "n": 391}

PRESETS: dict[str, dict] = {
    "fig1": {
        "command": "field-map",
        "description": "Bending beam from an explicit caustic vertex "
                       "(beta=0.01 1/m, x0=-0.08 m, z0=5 m), full reference grid",
        "config": {
            "beam": {"mode": "bending", "beta": 0.01, "x0": -0.08, "z0": 5.0},
            "rx": {"x": 0.01, "z": 8.0},
        },
    },
    "fig2a": {
        "command": "field-map",
        "description": "Receiver-targeted bend, beta=+0.005 1/m through (0, 8) m, crossing at 0",
        "config": {
            "beam": {"mode": "bending", "beta": 0.005, "x0c": 0.0},
        },
    },
    "fig2b": {
        "command": "field-map",
        "description": "Mirrored bend, beta=-0.005 1/m through (0, 8) m, crossing at 0",
        "config": {
            "beam": {"mode": "bending", "beta": -0.005, "x0c": 0.0},
        },
    },
    "fig2c": {
        "command": "los",
        "description": "Eavesdropper power ratio along the line of sight of the fig2a beam",
        "config": {
            "beam": {"mode": "bending", "beta": 0.005, "x0c": 0.0},
            "sweep": {"z_eve": dict(_Z_EVE)},
        },
    },
    "fig2d": {
        "command": "los",
        "description": "Line-of-sight secrecy rate of the fig2a beam at 10/20/30 dB SNR",
        "config": {
            "beam": {"mode": "bending", "beta": 0.005, "x0c": 0.0},
            "pls": {"snr_db": [10.0, 20.0, 30.0]},
            "sweep": {"z_eve": dict(_Z_EVE)},
        },
    },
    "fig3a-inset": {
        "command": "beta-sweep",
        "description": "Receiver power density versus curvature, crossing at 0",
        "config": {
            "beam": {"mode": "bending", "x0c": 0.0},
            "sweep": {"beta": dict(_BETA_FINE), "z_eve": None},
        },
    },
    "fig3b": {
        "command": "beta-sweep",
        "description": "Secrecy rate versus curvature and eavesdropper depth, crossing at 0",
        "config": {
            "beam": {"mode": "bending", "x0c": 0.0},
            "sweep": {"beta": dict(_BETA_FINE), "z_eve": dict(_Z_EVE)},
        },
    },
    "fig3c-inset": {
        "command": "beta-sweep",
        "description": "Receiver power density versus curvature, crossing at 0.25 m",
        "config": {
            "beam": {"mode": "bending", "x0c": 0.25},
            "sweep": {"beta": dict(_BETA_FINE), "z_eve": None},
        },
    },
    "fig3d": {
        "command": "beta-sweep",
        "description": "Secrecy rate versus curvature and eavesdropper depth, crossing at 0.25 m",
        "config": {
            "beam": {"mode": "bending", "x0c": 0.25},
            "sweep": {"beta": dict(_BETA_FINE), "z_eve": dict(_Z_EVE)},
        },
    },
    "fig3e-inset": {
        "command": "beta-sweep",
        "description": "Receiver power density versus curvature, crossing at 0.5 m",
        "config": {
            "beam": {"mode": "bending", "x0c": 0.5},
            "sweep": {"beta": dict(_BETA_FINE), "z_eve": None},
        },
    },
    "fig3f": {
        "command": "beta-sweep",
        "description": "Secrecy rate versus curvature and eavesdropper depth, crossing at 0.5 m",
        "config": {
            "beam": {"mode": "bending", "x0c": 0.5},
            "sweep": {"beta": dict(_BETA_FINE), "z_eve": dict(_Z_EVE)},
        },
    },
    "fig4a": {
        "command": "field-map",
        "description": "Strong bend over the full aperture (beta=0.015 1/m, crossing 0.5 m) "
                       "with its secrecy map (fig4b)",
        "config": {
            "beam": {"mode": "bending", "beta": 0.015, "x0c": 0.5},
        },
    },
    "fig4c": {
        "command": "coverage",
        "description": "Coverage versus eavesdropper disk radius for the fig4a bend",
        "config": {
            "beam": {"mode": "bending", "beta": 0.015, "x0c": 0.5},
            "pls": {"radii": [round(0.1 * i, 10) for i in range(1, 21)]},
        },
    },
    "fig4d": {
        "command": "field-map",
        "description": "Broadside beamforming over the full aperture with its secrecy map (fig4e)",
        "config": {
            "beam": {"mode": "broadside"},
        },
    },
    "fig4f": {
        "command": "coverage",
        "description": "Coverage versus disk radius for full-aperture broadside beamforming",
        "config": {
            "beam": {"mode": "broadside"},
            "pls": {"radii": [round(0.1 * i, 10) for i in range(1, 21)]},
        },
    },
    "fig4g": {
        "command": "field-map",
        "description": "Broadside beamforming with 32 elements (near-field boundary about 1 m) "
                       "with its secrecy map (fig4h)",
        "config": {
            "array": {"n_elements": 32},
            "beam": {"mode": "broadside"},
        },
    },
    "fig4i": {
        "command": "coverage",
        "description": "Coverage versus disk radius for the 32-element broadside baseline",
        "config": {
            "array": {"n_elements": 32},
            "beam": {"mode": "broadside"},
            "pls": {"radii": [round(0.1 * i, 10) for i in range(1, 21)]},
        },
    },
    "fig5a": {
        "command": "coverage",
        "description": "Coverage versus curvature, crossing 0, 10 dB SNR, 1 m disk",
        "config": {
            "beam": {"mode": "bending", "x0c": 0.0},
            "pls": {"snr_db": [10.0], "coverage_sweep": "beta"},
            "sweep": {"beta": dict(_BETA_COARSE)},
        },
    },
    "fig5b": {
        "command": "coverage",
        "description": "Coverage versus curvature, crossing 0, 20 dB SNR, 1 m disk",
        "config": {
            "beam": {"mode": "bending", "x0c": 0.0},
            "pls": {"snr_db": [20.0], "coverage_sweep": "beta"},
            "sweep": {"beta": dict(_BETA_COARSE)},
        },
    },
    "fig5c": {
        "command": "coverage",
        "description": "Coverage versus curvature, crossing 0.25 m, 10 dB SNR, 1 m disk",
        "config": {
            "beam": {"mode": "bending", "x0c": 0.25},
            "pls": {"snr_db": [10.0], "coverage_sweep": "beta"},
            "sweep": {"beta": dict(_BETA_COARSE)},
        },
    },
    "fig5d": {
        "command": "coverage",
        "description": "Coverage versus curvature, crossing 0.25 m, 20 dB SNR, 1 m disk",
        "config": {
            "beam": {"mode": "bending", "x0c": 0.25},
            "pls": {"snr_db": [20.0], "coverage_sweep": "beta"},
            "sweep": {"beta": dict(_BETA_COARSE)},
        },
    },
    "fig5e": {
        "command": "coverage",
        "description": "Coverage versus curvature, crossing 0.5 m, 10 dB SNR, 1 m disk",
        "config": {
            "beam": {"mode": "bending", "x0c": 0.5},
            "pls": {"snr_db": [10.0], "coverage_sweep": "beta"},
            "sweep": {"beta": dict(_BETA_COARSE)},
        },
    },
    "fig5f": {
        "command": "coverage",
        "description": "Coverage versus curvature, crossing 0.5 m, 20 dB SNR, 1 m disk",
        "config": {
            "beam": {"mode": "bending", "x0c": 0.5},
            "pls": {"snr_db": [20.0], "coverage_sweep": "beta"},
            "sweep": {"beta": dict(_BETA_COARSE)},
        },
    },
}


def preset_names() -> list[str]:
    return sorted(PRESETS)


def preset_command(name: str) -> str:
    if name not in PRESETS:
        raise ConfigError(f"unknown preset {name!r}; known presets: {', '.join(preset_names())}")
    return PRESETS[name]["command"]


def preset_config(name: str) -> SceneConfig:
    """Resolve a preset into a validated SceneConfig with the preset's stem."""
    if name not in PRESETS:
        raise ConfigError(f"unknown preset {name!r}; known presets: {', '.join(preset_names())}")
    raw = copy.deepcopy(PRESETS[name]["config"])
    stem = name.replace("-inset", "")
    raw.setdefault("output", {}).setdefault("stem", stem)
    return parse_config(raw, preset=name)
