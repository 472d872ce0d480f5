"""Exception types shared across the package.

Two failure families matter to callers: bad run descriptions (config files,
CLI arguments) and physically meaningless requests (designs with no forward
parabola, observation points on top of a radiating element).  The CLI maps
them to distinct exit codes, so they must stay distinguishable.
"""


class ConfigError(Exception):
    """A run description is malformed: unknown keys, bad types, bad ranges."""


class PhysicsDomainError(ValueError):
    """A request has no physical solution in the model's domain."""
