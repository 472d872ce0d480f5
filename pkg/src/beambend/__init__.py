"""Near-field bending beams from a uniform linear array, and the
physical-layer secrecy they provide against eavesdroppers on and around the
transmitter-receiver line of sight.

The package splits along the physics pipeline: ``array`` (geometry and
excitation), ``trajectory`` (parabolic caustics and the aperture phase law),
``propagation`` (coherent field maps), ``pls`` (secrecy metrics and
Monte-Carlo coverage), with ``config``/``presets``/``plots`` feeding the
``cli`` front end.
"""

__version__ = "0.1.0"

from .array import (
    FREE_SPACE_IMPEDANCE,
    SPEED_OF_LIGHT,
    ArrayExcitation,
    CarrierConfig,
    UlaArray,
    broadside_excitation,
    build_excitation,
    element_positions,
    omnidirectional,
    steering_vector,
)
from .errors import ConfigError, PhysicsDomainError
from .trajectory import (
    RxLocation,
    TrajectoryParams,
    active_window,
    caustic_x,
    design_from_rx,
    phase_profile,
)
from .propagation import (
    FieldMap,
    ObservationGrid,
    element_field,
    field_at,
    field_map,
    field_points,
    fraunhofer_distance,
    trace_main_lobe,
    write_field_csv,
    write_field_pgm,
)
from .pls import (
    CoverageResult,
    DiskEveModel,
    SecrecyScene,
    bending_scene,
    bending_scene_from_vertex,
    beta_sweep,
    broadside_scene,
    coverage_vs_beta,
    disk_coverage,
    los_sweep,
    s_max,
    sample_disk,
    secrecy_map,
    secrecy_rate,
)

__all__ = [
    "FREE_SPACE_IMPEDANCE",
    "SPEED_OF_LIGHT",
    "ArrayExcitation",
    "CarrierConfig",
    "ConfigError",
    "CoverageResult",
    "DiskEveModel",
    "FieldMap",
    "ObservationGrid",
    "PhysicsDomainError",
    "RxLocation",
    "SecrecyScene",
    "TrajectoryParams",
    "UlaArray",
    "active_window",
    "bending_scene",
    "bending_scene_from_vertex",
    "beta_sweep",
    "broadside_excitation",
    "broadside_scene",
    "build_excitation",
    "caustic_x",
    "coverage_vs_beta",
    "design_from_rx",
    "disk_coverage",
    "element_field",
    "element_positions",
    "omnidirectional",
    "field_at",
    "field_map",
    "field_points",
    "fraunhofer_distance",
    "los_sweep",
    "phase_profile",
    "s_max",
    "sample_disk",
    "secrecy_map",
    "secrecy_rate",
    "steering_vector",
    "trace_main_lobe",
    "write_field_csv",
    "write_field_pgm",
]
