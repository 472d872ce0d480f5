"""Parabolic beam trajectories and the aperture phase law that launches them.

A bending beam rides the caustic

    x_c(z) = x0 + beta * (z - z0)^2

which opens toward +x for beta > 0.  The aperture phase that creates it is

    phi(x) = 2*beta*k*z0*x + (4/3)*beta^2*k * (z0^2 + (x0 - x)/beta)^(3/2)

real-valued only up to the caustic crossing x0c = x0 + beta*z0^2, the point
where the parabola intersects the aperture plane z = 0.  Elements beyond the
crossing cannot contribute a ray tangent to the caustic and stay dark; on
the other side the contributing window ends at the aperture edge -L_x/2
(for beta > 0), whose ray is tangent at the largest reachable z.

Negative beta is handled by mirror symmetry: reflect the geometry in x,
design or evaluate with |beta|, and reflect back.  This keeps the two signs
numerically identical up to reflection, which the mirror-symmetry checks in
the test suite rely on.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .array import CarrierConfig, UlaArray
from .errors import PhysicsDomainError


@dataclass(frozen=True)
class RxLocation:
    """Intended receiver position (x, z) in metres, strictly in front of the array."""

    x: float
    z: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.z)):
            raise PhysicsDomainError(f"receiver location must be finite, got ({self.x!r}, {self.z!r})")
        if self.z <= 0:
            raise PhysicsDomainError(f"receiver must sit in front of the aperture (z > 0), got z = {self.z!r}")


@dataclass(frozen=True)
class TrajectoryParams:
    """Parabolic caustic parameters: curvature beta (1/m) and vertex (x0, z0).

    beta = 0 is accepted as the degenerate broadside limit (a straight
    trajectory with phi identically zero); the inverse design rejects it
    because no parabola exists there.
    """

    beta: float
    x0: float
    z0: float

    def __post_init__(self):
        for name in ("beta", "x0", "z0"):
            if not math.isfinite(getattr(self, name)):
                raise PhysicsDomainError(f"trajectory parameter {name} must be finite")
        if self.z0 <= 0:
            raise PhysicsDomainError(f"vertex depth z0 must be positive, got {self.z0!r}")

    @property
    def x0c(self) -> float:
        """Caustic crossing x0 + beta*z0^2: where the parabola meets z = 0."""
        return self.x0 + self.beta * self.z0 * self.z0

    def mirrored(self) -> "TrajectoryParams":
        """The reflection of this trajectory through the x = 0 plane."""
        return TrajectoryParams(beta=-self.beta, x0=-self.x0, z0=self.z0)


def caustic_x(params: TrajectoryParams, z):
    """Transverse caustic position x_c(z) = x0 + beta*(z - z0)^2 in metres."""
    z = np.asarray(z, dtype=float)
    out = params.x0 + params.beta * (z - params.z0) ** 2
    return float(out) if out.ndim == 0 else out


def phase_profile(params: TrajectoryParams, carrier: CarrierConfig, x):
    """Aperture phase phi(x) in radians for positions x on the z = 0 plane.

    Parameters
    ----------
    params : TrajectoryParams
    carrier : CarrierConfig
    x : array_like
        Aperture positions in metres.  For beta > 0 every x must satisfy
        x <= x0c (mirrored for beta < 0); beyond the crossing the phase
        turns complex, which is rejected rather than silently NaN-ed.

    Notes
    -----
    The radicand z0^2 + (x0 - x)/beta is evaluated as (x0c - x)/beta so that
    it vanishes exactly at the stored crossing, making phi(x0c) equal to
    2*beta*k*z0*x0c with no rounding residue from the 3/2-power term.
    """
    x = np.asarray(x, dtype=float)
    if params.beta == 0:
        out = np.zeros_like(x)
        return float(out) if out.ndim == 0 else out
    if params.beta < 0:
        out = np.asarray(phase_profile(params.mirrored(), carrier, -x))
        return float(out) if out.ndim == 0 else out
    radicand = (params.x0c - x) / params.beta
    if np.any(radicand < 0):
        worst = float(np.max(np.asarray(x)[np.asarray(radicand) < 0])) if x.ndim else float(x)
        raise PhysicsDomainError(
            f"phase profile is real-valued only for x <= x0c = {params.x0c:.6g} m "
            f"(beta > 0); got x = {worst:.6g} m beyond the caustic crossing")
    k = carrier.wavenumber
    # radicand^(3/2) as r*sqrt(r): sqrt is correctly rounded in both the
    # scalar and the vectorized numpy paths, so scalar and array calls agree
    # bit for bit (pow's 1.5 exponent does not guarantee that)
    out = (2.0 * params.beta * k * params.z0 * x
           + (4.0 / 3.0) * params.beta ** 2 * k * (radicand * np.sqrt(radicand)))
    return float(out) if out.ndim == 0 else out


def design_from_rx(rx: RxLocation, beta: float, x0c: float) -> TrajectoryParams:
    """Invert the caustic geometry: find the parabola through rx with a given crossing.

    Solves the two pass-through constraints

        x_rx = x0 + beta*(z_rx - z0)^2        (caustic hits the receiver)
        x0c  = x0 + beta*z0^2                 (caustic crosses z = 0 at x0c)

    for the vertex (x0, z0).  Eliminating x0 leaves an equation linear in
    z0, so the solution is unique; there is no second branch to choose.

    Raises
    ------
    PhysicsDomainError
        For beta = 0 (no parabola exists; use the broadside phase-0
        excitation instead) and for geometries whose unique vertex lands at
        z0 <= 0, i.e. behind the aperture.
    """
    if not (math.isfinite(beta) and math.isfinite(x0c)):
        raise PhysicsDomainError("design inputs beta and x0c must be finite")
    if beta == 0:
        raise PhysicsDomainError(
            "beta = 0 has no parabolic design; drive the array with the "
            "broadside (phase-0) excitation for a straight beam")
    if beta < 0:
        m = design_from_rx(RxLocation(-rx.x, rx.z), -beta, -x0c)
        return TrajectoryParams(beta=beta, x0=-m.x0, z0=m.z0)
    z0 = (beta * rx.z ** 2 + x0c - rx.x) / (2.0 * rx.z * beta)
    if z0 <= 0:
        raise PhysicsDomainError(
            f"no forward parabola: the vertex depth solves to z0 = {z0:.6g} m <= 0 "
            f"for rx = ({rx.x:g}, {rx.z:g}) m, beta = {beta:g} 1/m, x0c = {x0c:g} m")
    x0 = ((2.0 * x0c * (rx.x + beta * rx.z ** 2) - x0c ** 2
           - (rx.x - beta * rx.z ** 2) ** 2) / (4.0 * rx.z ** 2 * beta))
    return TrajectoryParams(beta=beta, x0=x0, z0=z0)


def active_window(params: TrajectoryParams, array: UlaArray) -> tuple[float, float]:
    """Aperture interval (lo, hi) in metres whose elements feed the caustic.

    For beta > 0 the window runs from the aperture edge -L_x/2 up to the
    caustic crossing, clamped to the aperture: [-L_x/2, min(x0c, L_x/2)].
    Mirrored for beta < 0; the full aperture for the broadside limit
    beta = 0.
    """
    half = array.aperture_m / 2.0
    if params.beta > 0:
        lo, hi = -half, min(params.x0c, half)
    elif params.beta < 0:
        lo, hi = max(params.x0c, -half), half
    else:
        lo, hi = -half, half
    if not lo < hi:
        raise PhysicsDomainError(
            f"caustic crossing x0c = {params.x0c:.6g} m leaves no active aperture "
            f"inside [{-half:g}, {half:g}] m")
    return (lo, hi)
