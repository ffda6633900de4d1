"""Thermal vapor: number density, transit broadening and velocity averaging."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import constants as sc
from scipy.special import roots_hermite

from .atomic import SODIUM_D1, AtomicSpecies
from .errors import DomainError, NumericError, RangeError

TORR = 133.322368

#: Default imaginary offset of the velocity contour, in thermal speeds.
CONTOUR_SHIFT = 1.5


@dataclass(frozen=True)
class CellConfig:
    """Vapor cell geometry and environment.

    ``residual_dephasing`` is the extra ground-coherence decay caused by the
    heater-coil field; set it to zero to model the coils switched off.
    """

    length: float = 0.1
    temperature: float = 373.15
    beam_waist: float = 100e-6
    residual_dephasing: float = 0.0
    density_override: float | None = None

    def __post_init__(self):
        if not self.length > 0:
            raise DomainError(f"length must be > 0, got {self.length}")
        if not self.temperature > 273.0:
            raise DomainError(f"temperature must be > 273 K, got {self.temperature}")
        if not self.beam_waist > 0:
            raise DomainError(f"beam_waist must be > 0, got {self.beam_waist}")
        if self.residual_dephasing < 0:
            raise DomainError("residual_dephasing must be >= 0")
        if self.density_override is not None and self.density_override < 0:
            raise DomainError("density_override must be >= 0")


def vapor_pressure(species: AtomicSpecies, temperature: float) -> float:
    """Saturated vapor pressure in Pa (two-branch ``log10 P = A - B/T`` fit, torr)."""
    lo, hi = species.vapor_pressure_range
    if not lo <= temperature <= hi:
        raise RangeError(f"temperature {temperature} K outside correlation range [{lo}, {hi}] K")
    solid, liquid = species.vapor_pressure_coeffs
    a, b = solid if temperature < species.melting_point else liquid
    return 10.0 ** (a - b / temperature) * TORR


def vapor_number_density(species: AtomicSpecies, temperature: float,
                         density_override: float | None = None) -> float:
    """Atoms per m^3 from the ideal-gas law at saturated vapor pressure."""
    if density_override is not None:
        return float(density_override)
    return vapor_pressure(species, temperature) / (sc.k * temperature)


def cell_number_density(species: AtomicSpecies, cell: CellConfig) -> float:
    return vapor_number_density(species, cell.temperature, cell.density_override)


def thermal_speed(species: AtomicSpecies, temperature: float) -> float:
    """Most probable speed ``sqrt(2 kB T / m)``."""
    return float(np.sqrt(2 * sc.k * temperature / species.mass))


def transit_gamma(species: AtomicSpecies, cell: CellConfig) -> float:
    """Transit-time decay rate ``u / (2 w)`` of the ground coherence (s^-1)."""
    return thermal_speed(species, cell.temperature) / (2 * cell.beam_waist)


def doppler_fwhm(species: AtomicSpecies, temperature: float) -> float:
    """Gaussian Doppler FWHM of the D1 line in Hz."""
    return 2 / species.d1_wavelength * np.sqrt(2 * np.log(2) * sc.k * temperature / species.mass)


def residual_wavenumber(species: AtomicSpecies = SODIUM_D1) -> float:
    """Probe-pump wavevector mismatch for co-propagating beams (rad/m)."""
    return species.ground_splitting / sc.c


@lru_cache(maxsize=16)
def _hermite(nodes: int):
    x, w = roots_hermite(nodes)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def velocity_quadrature(species: AtomicSpecies, temperature: float, nodes: int = 64,
                        shift: float = CONTOUR_SHIFT):
    """Complex velocity nodes and weights for Maxwell-Boltzmann averages.

    The real Gauss-Hermite contour is moved to ``Im v = -shift * u``.  For a
    causal integrand (analytic where the Doppler-shifted detunings have positive
    imaginary part) Cauchy's theorem leaves the integral unchanged while the
    resonance poles end up at least ``k u shift`` away from the path, so 64
    nodes resolve lines far narrower than the Doppler width.  ``shift=0``
    recovers the plain real-axis rule.
    """
    u = thermal_speed(species, temperature)
    x, w = _hermite(nodes)
    t = x - 1j * shift
    weights = w * np.exp(x**2 - t**2) / np.sqrt(np.pi)
    return u * t, weights


def doppler_average(chi_of_velocity, species: AtomicSpecies = SODIUM_D1,
                    temperature: float = 373.15, nodes: int = 64,
                    shift: float = CONTOUR_SHIFT):
    """Maxwell-Boltzmann average of ``chi_of_velocity`` along the beam axis.

    ``chi_of_velocity`` is called once with the array of (complex) quadrature
    velocities and may return an array of shape ``(nodes,)`` or
    ``(nodes, ...)``; the average runs over the first axis.  With ``shift > 0``
    the callable must be the analytic continuation of a causal response; pass
    ``shift=0`` for arbitrary real-only integrands.
    """
    velocities, weights = velocity_quadrature(species, temperature, nodes, shift)
    values = np.asarray(chi_of_velocity(velocities))
    if values.shape[:1] != (nodes,):
        values = np.array([chi_of_velocity(v) for v in velocities])
    finite = np.isfinite(values).reshape(nodes, -1).all(axis=1)
    if not finite.all():
        bad = int(np.argmin(finite))
        raise NumericError(f"non-finite integrand at quadrature node {bad} (v={velocities[bad]:.6g})",
                           node=(bad, velocities[bad]))
    result = np.tensordot(weights, values, axes=(0, 0))
    return complex(result) if np.ndim(result) == 0 else result
