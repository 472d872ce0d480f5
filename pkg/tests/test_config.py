"""Config parsing and validation, defaults, and the figure preset catalog."""

import json

import numpy as np
import pytest

from beambend import config as cfgmod
from beambend import presets
from beambend.config import (
    DEFAULT_SEED,
    array_from,
    beta_samples_from,
    carrier_from,
    grid_from,
    load_config,
    parse_config,
    rx_from,
    scene_from,
    z_samples_from,
)
from beambend.errors import ConfigError

BEND = {"beam": {"mode": "bending", "beta": 0.005, "x0c": 0.0}}


def test_defaults_fill_missing_sections():
    cfg = parse_config(dict(BEND))
    assert carrier_from(cfg).wavelength_m == 0.002
    arr = array_from(cfg)
    assert arr.n_elements == 1000 and arr.spacing_m == 0.001
    assert arr.element_power_w == 0.001
    rx = rx_from(cfg)
    assert (rx.x, rx.z) == (0.0, 8.0)
    assert cfg.pls["seed"] == DEFAULT_SEED
    assert cfg.pls["snr_db"] == [10.0]
    g = grid_from(cfg)
    assert (g.nx, g.nz) == (1001, 498)
    assert cfg.output["stem"] == "run"


def test_unknown_keys_are_named_errors():
    with pytest.raises(ConfigError, match="unknown section 'beams'"):
        parse_config({"beams": {}})
    with pytest.raises(ConfigError, match="unknown key 'array.dx'"):
        parse_config({"array": {"dx": 0.001}, **BEND})
    with pytest.raises(ConfigError, match="unknown key 'pls.snr'"):
        parse_config({"pls": {"snr": [10]}, **BEND})


def test_carrier_override_is_exclusive():
    cfg = parse_config({"carrier": {"frequency_hz": 150e9}, **BEND})
    assert carrier_from(cfg).frequency_hz == 150e9
    with pytest.raises(ConfigError, match="not both"):
        parse_config({"carrier": {"frequency_hz": 150e9,
                                  "wavelength_m": 0.002}, **BEND})


def test_beam_mode_validation():
    parse_config({"beam": {"mode": "bending", "beta": 0.01,
                           "x0": -0.08, "z0": 5.0}})
    with pytest.raises(ConfigError, match="not both"):
        parse_config({"beam": {"mode": "bending", "beta": 0.01, "x0c": 0.0,
                               "x0": -0.08, "z0": 5.0}})
    with pytest.raises(ConfigError, match="bending mode needs"):
        parse_config({"beam": {"mode": "bending", "beta": 0.01}})
    with pytest.raises(ConfigError, match="bending mode only"):
        parse_config({"beam": {"mode": "broadside", "beta": 0.01}})
    with pytest.raises(ConfigError, match="beam.mode"):
        parse_config({"beam": {"mode": "spiral"}})


def test_seed_must_be_unsigned_64_bit():
    parse_config({"pls": {"seed": 2 ** 64 - 1}, **BEND})
    for bad in (-1, 2 ** 64, 1.5, "7"):
        with pytest.raises(ConfigError, match="seed"):
            parse_config({"pls": {"seed": bad}, **BEND})


def test_thresholds_are_fractions():
    with pytest.raises(ConfigError, match="thresholds"):
        parse_config({"pls": {"thresholds": [0.5, 1.0001]}, **BEND})
    with pytest.raises(ConfigError, match="non-empty"):
        parse_config({"pls": {"thresholds": []}, **BEND})


def test_grid_extent_validation():
    with pytest.raises(ConfigError, match="min < max"):
        parse_config({"grid": {"x_min": 1.0, "x_max": -1.0}, **BEND})


def test_scene_from_builds_and_overrides():
    cfg = parse_config(dict(BEND))
    scene = scene_from(cfg)
    assert scene.excitation.active_count == 500
    assert scene.snr_rx_db == 10.0
    steeper = scene_from(cfg, beta=0.01)
    assert steeper.trajectory.beta == 0.01
    louder = scene_from(cfg, snr_db=20.0)
    assert louder.snr_rx_db == 20.0


def test_scene_from_requires_beta_for_bending():
    cfg = parse_config({"beam": {"mode": "bending", "x0c": 0.0},
                        "sweep": {"beta": {"min": 0.001, "max": 0.002,
                                           "step": 0.001}}})
    with pytest.raises(ConfigError, match="beam.beta is required"):
        scene_from(cfg)
    assert scene_from(cfg, beta=0.005).trajectory.beta == 0.005


def test_broadside_scene_from_config():
    cfg = parse_config({"beam": {"mode": "broadside"}})
    scene = scene_from(cfg)
    assert scene.trajectory is None
    assert scene.excitation.active_count == 1000
    sub = parse_config({"beam": {"mode": "broadside", "n_elements": 32}})
    assert scene_from(sub).excitation.active_count == 32


def test_sweep_sample_builders():
    cfg = parse_config({"sweep": {"beta": {"min": 0.001, "max": 0.02,
                                           "step": 0.0001},
                                  "z_eve": {"min": 0.25, "max": 10.0,
                                            "n": 391}}, **BEND})
    betas = beta_samples_from(cfg)
    assert betas.shape == (191,)
    assert betas[0] == 0.001 and betas[-1] == pytest.approx(0.02, abs=1e-12)
    zs = z_samples_from(cfg)
    assert zs.shape == (391,)
    assert zs[0] == 0.25 and zs[-1] == 10.0
    assert zs[310] == 8.0


def test_sweep_sections_may_be_disabled_with_null():
    cfg = parse_config({"sweep": {"z_eve": None}, **BEND})
    assert cfg.sweep["z_eve"] is None
    with pytest.raises(ConfigError, match="sweep.beta.step is required"):
        parse_config({"sweep": {"beta": {"min": 0.001, "max": 0.02}}, **BEND})


def test_load_config_round_trip_and_errors(tmp_path):
    p = tmp_path / "scene.json"
    p.write_text(json.dumps(BEND), encoding="utf-8")
    cfg = load_config(p)
    assert cfg.beam["beta"] == 0.005
    with pytest.raises(ConfigError, match="cannot read"):
        load_config(tmp_path / "missing.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{", encoding="utf-8")
    with pytest.raises(ConfigError, match="not valid JSON"):
        load_config(bad)


def test_as_dict_is_json_ready_and_complete():
    cfg = parse_config(dict(BEND))
    blob = json.dumps(cfg.as_dict(), sort_keys=True)
    again = parse_config(json.loads(blob))
    assert again.as_dict() == cfg.as_dict()


def test_preset_catalog_parses_and_names_stems():
    names = presets.preset_names()
    assert names == [
        "fig1", "fig2a", "fig2b", "fig2c", "fig2d",
        "fig3a-inset", "fig3b", "fig3c-inset", "fig3d", "fig3e-inset", "fig3f",
        "fig4a", "fig4c", "fig4d", "fig4f", "fig4g", "fig4i",
        "fig5a", "fig5b", "fig5c", "fig5d", "fig5e", "fig5f",
    ]
    commands = {"design", "field-map", "los", "beta-sweep", "coverage"}
    for name in names:
        cfg = presets.preset_config(name)
        assert cfg.preset == name
        assert presets.preset_command(name) in commands
        # inset presets share the parent figure's output stem
        assert cfg.output["stem"] == name.removesuffix("-inset")


def test_unknown_preset_is_a_config_error():
    with pytest.raises(ConfigError, match="unknown preset"):
        presets.preset_config("fig9z")


def test_named_presets_pin_reference_parameters():
    fig1 = presets.preset_config("fig1")
    assert fig1.beam["beta"] == 0.01
    assert fig1.beam["x0"] == -0.08 and fig1.beam["z0"] == 5.0
    rx = rx_from(fig1)
    assert rx.x == 0.01 and rx.z == 8.0
    fig2b = presets.preset_config("fig2b")
    assert fig2b.beam["beta"] == -0.005 and fig2b.beam["x0c"] == 0.0
    fig3c = presets.preset_config("fig3c-inset")
    assert fig3c.beam["x0c"] == 0.25
    assert fig3c.sweep["beta"]["step"] == 0.0001
    assert fig3c.sweep["z_eve"] is None
    fig4g = presets.preset_config("fig4g")
    assert array_from(fig4g).n_elements == 32
    fig5d = presets.preset_config("fig5d")
    assert fig5d.pls["coverage_sweep"] == "beta"
    assert fig5d.pls["snr_db"] == [20.0]
