"""Command-line entry point.

Subcommands
-----------
design      solve the inverse caustic design and dump the per-element phases
field-map   sample the field over a grid: CSV + PGM heat map + secrecy map
los         sweep an eavesdropper along the line of sight
beta-sweep  redesign per curvature and profile receiver power and secrecy
coverage    Monte-Carlo secrecy coverage over an eavesdropper disk

Every command takes --config <json> or --preset <name> plus --out, --seed
and --threads overrides, writes its delimited outputs (and rendered figures
unless --no-figures) under the output directory, and exits 0 on success,
2 on a bad run description, 3 on a physically impossible request.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .array import element_positions
from .config import (SceneConfig, array_from, beta_samples_from, carrier_from, grid_from,
                     load_config, rx_from, scene_from, z_samples_from)
from .errors import ConfigError, PhysicsDomainError
from .presets import preset_config, preset_names
from .propagation import field_map, fraunhofer_distance, trace_main_lobe, write_field_csv, write_field_pgm
from .trajectory import TrajectoryParams, active_window, design_from_rx, phase_profile
from . import pls

_U64_MAX = (1 << 64) - 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="beambend",
        description="Near-field bending beams from a uniform linear array and "
                    "the physical-layer secrecy they buy.")
    parser.add_argument("--version", action="version", version=f"beambend {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    commands = {
        "design": "solve the inverse caustic design for a receiver",
        "field-map": "sample the radiated field over an observation grid",
        "los": "sweep an eavesdropper along the transmitter-receiver line of sight",
        "beta-sweep": "profile receiver power and secrecy across curvatures",
        "coverage": "Monte-Carlo secrecy coverage over an eavesdropper disk",
    }
    for name, help_text in commands.items():
        cmd = sub.add_parser(name, help=help_text)
        cmd.add_argument("--config", metavar="PATH", help="JSON scene config")
        cmd.add_argument("--preset", metavar="NAME",
                         help=f"named figure preset ({', '.join(preset_names())})")
        cmd.add_argument("--out", metavar="DIR", help="output directory override")
        cmd.add_argument("--threads", type=int, metavar="N",
                         help="worker threads (default: machine parallelism)")
        cmd.add_argument("--seed", type=int, metavar="U64",
                         help="Monte-Carlo seed override")
        cmd.add_argument("--no-figures", action="store_true",
                         help="skip rendering PNG figures next to the delimited output")
    return parser


def resolve_config(args) -> SceneConfig:
    if args.config and args.preset:
        raise ConfigError("give --config or --preset, not both")
    if args.preset:
        cfg = preset_config(args.preset)
    elif args.config:
        cfg = load_config(args.config)
    else:
        raise ConfigError("one of --config or --preset is required")
    if args.out:
        cfg.output["dir"] = args.out
    if args.seed is not None:
        if not 0 <= args.seed <= _U64_MAX:
            raise ConfigError(f"--seed must be an unsigned 64-bit integer, got {args.seed}")
        cfg.pls["seed"] = args.seed
    if args.threads is not None and args.threads < 1:
        raise ConfigError(f"--threads must be at least 1, got {args.threads}")
    return cfg


def _out_dir(cfg: SceneConfig) -> Path:
    out = Path(cfg.output["dir"])
    out.mkdir(parents=True, exist_ok=True)
    return out


def _header(cfg: SceneConfig, command: str) -> dict:
    meta = {
        "generator": f"beambend {__version__}",
        "command": command,
        "seed": cfg.pls["seed"],
        "config": json.dumps(cfg.as_dict(), sort_keys=True, separators=(",", ":")),
    }
    if cfg.preset:
        meta["preset"] = cfg.preset
    return meta


def _wrote(path: Path) -> None:
    print(f"wrote: {path}")


def _design_params(cfg: SceneConfig) -> TrajectoryParams:
    beam = cfg.beam
    if beam["mode"] != "bending":
        raise ConfigError("the design command needs beam.mode = 'bending'")
    beta = beam.get("beta")
    if beta is None:
        raise ConfigError("beam.beta is required for the design command")
    if beta == 0:
        raise PhysicsDomainError(
            "beta = 0 has no parabolic design; drive the array with the "
            "broadside (phase-0) excitation for a straight beam")
    if "x0c" in beam:
        return design_from_rx(rx_from(cfg), beta, beam["x0c"])
    return TrajectoryParams(beta=beta, x0=beam["x0"], z0=beam["z0"])


def cmd_design(cfg: SceneConfig, args) -> int:
    carrier = carrier_from(cfg)
    array = array_from(cfg)
    params = _design_params(cfg)
    window = active_window(params, array)
    positions = element_positions(array)
    active = (positions >= window[0]) & (positions <= window[1])
    phases = np.full(array.n_elements, np.nan)
    phases[active] = phase_profile(params, carrier, positions[active])

    print(f"beta_1_per_m: {params.beta!r}")
    print(f"x0_m: {params.x0!r}")
    print(f"z0_m: {params.z0!r}")
    print(f"x0c_m: {params.x0c!r}")
    print(f"x0t_m: {(window[0] if params.beta >= 0 else window[1])!r}")
    print(f"window_m: [{window[0]!r}, {window[1]!r}]")
    print(f"active_elements: {int(np.count_nonzero(active))}")
    print(f"fraunhofer_distance_m: {fraunhofer_distance(array, carrier)!r}")

    out = _out_dir(cfg)
    path = out / f"{cfg.output['stem']}_design.csv"
    with open(path, "w", encoding="ascii", newline="\n") as handle:
        for key, value in _header(cfg, "design").items():
            handle.write(f"# {key}: {value}\n")
        handle.write("element,x_m,active,phase_rad\n")
        for n in range(array.n_elements):
            handle.write(f"{n + 1},{float(positions[n])!r},{int(active[n])},"
                         f"{float(phases[n])!r}\n")
    _wrote(path)
    return 0


def cmd_field_map(cfg: SceneConfig, args) -> int:
    scene = scene_from(cfg)
    grid = grid_from(cfg)
    smap = pls.secrecy_map(scene, grid, threads=args.threads)
    fmap = smap.fmap
    header = _header(cfg, "field-map")
    print(f"fraunhofer_distance_m: {fraunhofer_distance(scene.array, scene.carrier)!r}")
    print(f"active_elements: {scene.excitation.active_count}")
    print(f"p_rx_density_w_per_m2: {smap.p_rx!r}")
    z_trace, x_trace = trace_main_lobe(fmap)
    mid = int(np.argmin(np.abs(z_trace - scene.rx.z)))
    print(f"peak_x_at_z{z_trace[mid]:g}_m: {float(x_trace[mid])!r}")

    out = _out_dir(cfg)
    stem = cfg.output["stem"]
    csv_path = out / f"{stem}_field.csv"
    pgm_path = out / f"{stem}_field.pgm"
    secrecy_path = out / f"{stem}_secrecy.csv"
    write_field_csv(fmap, csv_path, header)
    write_field_pgm(fmap, pgm_path, header)
    pls.write_secrecy_csv(smap, secrecy_path, header)
    for path in (csv_path, pgm_path, secrecy_path):
        _wrote(path)
    if not args.no_figures:
        from . import plots
        field_png = out / f"{stem}_field.png"
        secrecy_png = out / f"{stem}_secrecy.png"
        plots.render_field_png(fmap, field_png, trajectory=scene.trajectory,
                               rx=scene.rx, title=f"{stem}: power density")
        plots.render_secrecy_png(grid, smap.secrecy, smap.s_max, secrecy_png,
                                 rx=scene.rx, title=f"{stem}: secrecy rate")
        _wrote(field_png)
        _wrote(secrecy_png)
    return 0


def cmd_los(cfg: SceneConfig, args) -> int:
    z_samples = z_samples_from(cfg)
    if z_samples is None:
        raise ConfigError("the los command needs a sweep.z_eve section")
    out = _out_dir(cfg)
    stem = cfg.output["stem"]
    results = []
    for snr in cfg.pls["snr_db"]:
        scene = scene_from(cfg, snr_db=snr)
        result = pls.los_sweep(scene, z_samples, threads=args.threads)
        path = out / f"{stem}_los_snr{snr:g}.csv"
        pls.write_los_csv(result, path, _header(cfg, "los"))
        _wrote(path)
        results.append((f"SNR {snr:g} dB", result))
    print(f"p_rx_density_w_per_m2: {results[0][1].p_rx!r}")
    if not args.no_figures:
        from . import plots
        png = out / f"{stem}_los.png"
        plots.render_los_png(results, png, title=f"{stem}: line-of-sight sweep")
        _wrote(png)
    return 0


def cmd_beta_sweep(cfg: SceneConfig, args) -> int:
    if cfg.beam["mode"] != "bending" or "x0c" not in cfg.beam:
        raise ConfigError("the beta-sweep command needs beam.mode = 'bending' with x0c")
    betas = beta_samples_from(cfg)
    z_samples = z_samples_from(cfg)
    snr = float(cfg.pls["snr_db"][0])
    result = pls.beta_sweep(carrier_from(cfg), array_from(cfg), rx_from(cfg),
                            cfg.beam["x0c"], betas, z_samples, snr,
                            threads=args.threads)
    valid = np.isfinite(result.p_rx_density)
    if valid.any():
        best = int(np.nanargmax(result.p_rx_density))
        print(f"peak_beta_1_per_m: {float(result.beta[best])!r}")
        print(f"peak_p_rx_density_w_per_m2: {float(result.p_rx_density[best])!r}")
    print(f"design_gaps: {sum(1 for note in result.notes if note is not None)}")

    out = _out_dir(cfg)
    stem = cfg.output["stem"]
    header = _header(cfg, "beta-sweep")
    prx_path = out / f"{stem}_beta_prx.csv"
    pls.write_beta_prx_csv(result, prx_path, header)
    _wrote(prx_path)
    if result.secrecy is not None:
        secrecy_path = out / f"{stem}_beta_secrecy.csv"
        pls.write_beta_secrecy_csv(result, secrecy_path, header)
        _wrote(secrecy_path)
    if not args.no_figures:
        from . import plots
        png = out / f"{stem}_beta.png"
        plots.render_beta_png(result, png, title=f"{stem}: curvature sweep")
        _wrote(png)
    return 0


def cmd_coverage(cfg: SceneConfig, args) -> int:
    thresholds = [float(m) for m in cfg.pls["thresholds"]]
    samples = int(cfg.pls["samples"])
    seed = int(cfg.pls["seed"])
    snr = float(cfg.pls["snr_db"][0])
    rx = rx_from(cfg)
    if cfg.pls["coverage_sweep"] == "beta":
        if cfg.beam["mode"] != "bending" or "x0c" not in cfg.beam:
            raise ConfigError("coverage_sweep = 'beta' needs beam.mode = 'bending' with x0c")
        radius = float(cfg.pls["radii"][0])
        rows = pls.coverage_vs_beta(carrier_from(cfg), array_from(cfg), rx,
                                    cfg.beam["x0c"], beta_samples_from(cfg), radius,
                                    thresholds, snr, samples, seed,
                                    threads=args.threads)
        sweep_column, sweep_label = "beta", "curvature beta (1/m)"
    else:
        scene = scene_from(cfg, snr_db=snr)
        rows = []
        for radius in cfg.pls["radii"]:
            eve = pls.DiskEveModel(center=rx, radius_m=float(radius),
                                   sample_count=samples, seed=seed)
            rows.append((float(radius),
                         pls.disk_coverage(scene, eve, thresholds, threads=args.threads),
                         None))
        sweep_column, sweep_label = "radius_m", "eavesdropper disk radius (m)"

    done = [r for _, r, _ in rows if r is not None]
    print(f"sweep_points: {len(rows)} ({len(rows) - len(done)} gaps)")
    if done:
        print(f"n_samples: {done[0].n_samples}")
        print(f"seed: {done[0].seed}")
        print(f"resample_count_total: {sum(r.resample_count for r in done)}")

    out = _out_dir(cfg)
    stem = cfg.output["stem"]
    path = out / f"{stem}_coverage.csv"
    pls.write_coverage_csv(rows, path, _header(cfg, "coverage"), sweep_column=sweep_column)
    _wrote(path)
    if not args.no_figures:
        from . import plots
        png = out / f"{stem}_coverage.png"
        plots.render_coverage_png(rows, png, sweep_label, title=f"{stem}: secrecy coverage")
        _wrote(png)
    return 0


_COMMANDS = {
    "design": cmd_design,
    "field-map": cmd_field_map,
    "los": cmd_los,
    "beta-sweep": cmd_beta_sweep,
    "coverage": cmd_coverage,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve_config(args)
        return _COMMANDS[args.command](cfg, args)
    except ConfigError as err:
        print(f"error: config: {err}", file=sys.stderr)
        return 2
    except PhysicsDomainError as err:
        print(f"error: physics: {err}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    raise SystemExit(main())
