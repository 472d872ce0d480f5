"""Uniform linear array geometry, carrier bookkeeping and element excitation.

The transmitter is a uniform linear array (ULA) of isotropic elements laid
out along the x axis at z = 0.  Element n of Nx sits at

    x_n = (n - (Nx + 1)/2) * d_x,    n = 1 .. Nx

so the aperture is centred on the origin and spans L_x = Nx * d_x.  All
amplitude weighting is uniform; beam shaping happens purely through the
per-element phases, which is what makes the phase profile the single design
degree of freedom for the rest of the package.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import PhysicsDomainError

SPEED_OF_LIGHT = 299792458.0
"""Vacuum speed of light in m/s."""

FREE_SPACE_IMPEDANCE = 376.730313668
"""Characteristic impedance of free space in ohm (CODATA 2018)."""


def omnidirectional(dx, dz):
    """Unit element pattern: U = 1 toward every observation direction."""
    return np.ones(np.broadcast(dx, dz).shape)


@dataclass(frozen=True)
class CarrierConfig:
    """Carrier frequency/wavelength pair with the derived wavenumber.

    Exactly one of the two quantities is authoritative; construct through
    :meth:`from_frequency` or :meth:`from_wavelength` so the other is derived
    consistently.  Figure presets fix the wavelength at 2 mm exactly rather
    than deriving it from 150 GHz, which keeps the half-wave spacing of the
    reference array at exactly 1 mm.
    """

    frequency_hz: float
    wavelength_m: float

    def __post_init__(self):
        if not (math.isfinite(self.frequency_hz) and self.frequency_hz > 0):
            raise PhysicsDomainError(f"carrier frequency must be positive, got {self.frequency_hz!r}")
        if not (math.isfinite(self.wavelength_m) and self.wavelength_m > 0):
            raise PhysicsDomainError(f"carrier wavelength must be positive, got {self.wavelength_m!r}")

    @classmethod
    def from_frequency(cls, frequency_hz: float) -> "CarrierConfig":
        if not (math.isfinite(frequency_hz) and frequency_hz > 0):
            raise PhysicsDomainError(f"carrier frequency must be positive, got {frequency_hz!r}")
        return cls(frequency_hz=frequency_hz, wavelength_m=SPEED_OF_LIGHT / frequency_hz)

    @classmethod
    def from_wavelength(cls, wavelength_m: float) -> "CarrierConfig":
        if not (math.isfinite(wavelength_m) and wavelength_m > 0):
            raise PhysicsDomainError(f"carrier wavelength must be positive, got {wavelength_m!r}")
        return cls(frequency_hz=SPEED_OF_LIGHT / wavelength_m, wavelength_m=wavelength_m)

    @property
    def wavenumber(self) -> float:
        """Free-space wavenumber k = 2*pi/lambda in rad/m."""
        return 2.0 * math.pi / self.wavelength_m


@dataclass(frozen=True)
class UlaArray:
    """Geometry and per-element drive parameters of the transmit ULA.

    Parameters
    ----------
    n_elements : int
        Element count Nx.
    spacing_m : float
        Inter-element pitch d_x in metres.
    element_power_w : float
        Radiated power P_n of each active element in watts.  Uniform across
        the aperture; the reference configuration uses 1 mW.
    element_gain : float
        Element gain G_n (dimensionless, 1 for the isotropic reference).
    element_pattern : callable
        Radiation pattern U(dx, dz) evaluated per observation direction.
        Only the constant-1 omnidirectional pattern ships with the package;
        the hook exists so directive elements can be swapped in later.
    """

    n_elements: int
    spacing_m: float
    element_power_w: float = 1e-3
    element_gain: float = 1.0
    element_pattern: Callable = field(default=omnidirectional)

    def __post_init__(self):
        if self.n_elements < 1:
            raise PhysicsDomainError(f"array needs at least one element, got {self.n_elements}")
        if not (math.isfinite(self.spacing_m) and self.spacing_m > 0):
            raise PhysicsDomainError(f"element spacing must be positive, got {self.spacing_m!r}")
        if not (math.isfinite(self.element_power_w) and self.element_power_w > 0):
            raise PhysicsDomainError(f"element power must be positive, got {self.element_power_w!r}")
        if not (math.isfinite(self.element_gain) and self.element_gain > 0):
            raise PhysicsDomainError(f"element gain must be positive, got {self.element_gain!r}")

    @property
    def aperture_m(self) -> float:
        """Aperture length L_x = Nx * d_x in metres."""
        return self.n_elements * self.spacing_m


def element_positions(array: UlaArray) -> np.ndarray:
    """Element x coordinates in metres, ascending, symmetric about x = 0.

    The offsets n - (Nx + 1)/2 are exact half-integers (or integers for odd
    Nx), so the returned positions mirror about the origin bit for bit.
    """
    n = np.arange(1, array.n_elements + 1, dtype=float)
    return (n - (array.n_elements + 1) / 2.0) * array.spacing_m


def steering_vector(phases) -> np.ndarray:
    """Unit-norm steering vector (1/sqrt(Nx)) * exp(j*phi_n) from real phases.

    Parameters
    ----------
    phases : array_like
        Per-element phases in radians, length Nx.  Must be real and finite;
        a phase profile evaluated outside its real-valued domain shows up
        here as a non-finite entry and is rejected.
    """
    phases = np.asarray(phases, dtype=float)
    if phases.ndim != 1 or phases.size == 0:
        raise PhysicsDomainError("phases must be a non-empty 1-D array")
    if not np.all(np.isfinite(phases)):
        raise PhysicsDomainError("steering phases must be finite; the phase profile "
                                 "is only real-valued up to the caustic crossing")
    return np.exp(1j * phases) / math.sqrt(phases.size)


@dataclass(frozen=True, eq=False)
class ArrayExcitation:
    """Complex drive weights for every element plus the active-element mask.

    Weights of inactive elements are exactly zero.  In the default drive
    convention each active weight has magnitude sqrt(element_power_w), so
    sum |w_n|^2 equals active_count * element_power_w; the optional
    total-power normalization divides by sqrt(active_count) instead, holding
    the radiated total at element_power_w regardless of window width.
    """

    weights: np.ndarray
    active: np.ndarray

    def __post_init__(self):
        if self.weights.shape != self.active.shape:
            raise PhysicsDomainError("weights and active mask must have identical shape")
        if np.any(self.weights[~self.active] != 0):
            raise PhysicsDomainError("inactive elements must carry exactly zero weight")

    @property
    def active_count(self) -> int:
        return int(np.count_nonzero(self.active))


def build_excitation(array: UlaArray, phase_fn, window,
                     normalize_total_power: bool = False) -> ArrayExcitation:
    """Excite the elements inside a spatial window with a phase profile.

    Parameters
    ----------
    array : UlaArray
    phase_fn : callable
        Maps element x positions (ndarray, m) to phases (rad).  Called only
        on the in-window positions, so profiles that are undefined beyond
        the caustic crossing stay inside their real-valued domain.
    window : (float, float)
        Inclusive (lo, hi) bounds in metres; elements with lo <= x_n <= hi
        are driven, the rest are left dark (weight exactly 0).
    normalize_total_power : bool
        If True, scale weights by 1/sqrt(active_count) so the whole aperture
        radiates element_power_w in total.

    Returns
    -------
    ArrayExcitation

    Raises
    ------
    PhysicsDomainError
        If the window contains no element or the profile returns non-finite
        phases.
    """
    lo, hi = float(window[0]), float(window[1])
    if not (math.isfinite(lo) and math.isfinite(hi)) or lo > hi:
        raise PhysicsDomainError(f"bad excitation window ({lo!r}, {hi!r})")
    positions = element_positions(array)
    active = (positions >= lo) & (positions <= hi)
    if not active.any():
        raise PhysicsDomainError(
            f"excitation window [{lo:g}, {hi:g}] m contains no element of the "
            f"{array.n_elements}-element aperture")
    phases = np.asarray(phase_fn(positions[active]), dtype=float)
    if phases.shape != (int(np.count_nonzero(active)),):
        raise PhysicsDomainError("phase profile must return one phase per active element")
    if not np.all(np.isfinite(phases)):
        raise PhysicsDomainError("phase profile returned non-finite phases inside the window")
    amplitude = math.sqrt(array.element_power_w)
    if normalize_total_power:
        amplitude /= math.sqrt(np.count_nonzero(active))
    weights = np.zeros(array.n_elements, dtype=complex)
    weights[active] = amplitude * np.exp(1j * phases)
    return ArrayExcitation(weights=weights, active=active)


def broadside_excitation(array: UlaArray, n_active: int | None = None,
                         normalize_total_power: bool = False) -> ArrayExcitation:
    """Phase-0 (broadside) drive over the centred n_active elements.

    The broadside beam is the conventional-beamforming baseline: every driven
    weight is the real amplitude sqrt(element_power_w).  With n_active None
    the whole aperture radiates.
    """
    n = array.n_elements if n_active is None else int(n_active)
    if not 1 <= n <= array.n_elements:
        raise PhysicsDomainError(
            f"broadside element count {n} outside 1..{array.n_elements}")
    lo = (array.n_elements - n) // 2
    active = np.zeros(array.n_elements, dtype=bool)
    active[lo:lo + n] = True
    amplitude = math.sqrt(array.element_power_w)
    if normalize_total_power:
        amplitude /= math.sqrt(n)
    weights = np.zeros(array.n_elements, dtype=complex)
    weights[active] = amplitude
    return ArrayExcitation(weights=weights, active=active)
