"""Phase-conjugate reflectivity from the ground-state coherence grating.

The backward pump and the probe form a Lambda pair that writes ``rho12``; the
forward pump reads it out.  On two-photon resonance with ``gamma12 -> 0`` the
atoms sit in the dark state ``(Omega' |1> - Omega_b |2>) / sqrt(Omega'^2 + Omega_b^2)``,
so ``|rho12| -> Omega' Omega_b / (Omega'^2 + Omega_b^2)``, which peaks at 1/2
for balanced fields.  Only the line shape is modelled; the absolute
reflectivity is fixed by ``peak_reflectivity_calibration``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .atomic import SODIUM_D1, LambdaConfig, steady_state
from .errors import DegenerateModelError, DomainError, NormalizationError, ShapeError
from .medium import CALIBRATED_GAMMA12
from .spectra import Spectrum, detuning_grid, wing_baseline

# Balanced weak Lambda pair whose grating width matches the calibrated 1 MHz EIT line.
DEFAULT_FWM_RABI = 2 * np.pi * 1.0e6


@dataclass(frozen=True)
class FwmConfig:
    forward_pump_rabi: float = DEFAULT_FWM_RABI
    backward_pump_rabi: float = DEFAULT_FWM_RABI
    probe_rabi: float = DEFAULT_FWM_RABI
    two_photon_detuning_grid: np.ndarray = field(default_factory=lambda: detuning_grid(points=2001))
    gamma12: float = CALIBRATED_GAMMA12
    peak_reflectivity_calibration: float = 0.017
    one_photon_detuning: float = 0.0
    excited_decay: float = SODIUM_D1.natural_linewidth

    def __post_init__(self):
        for name in ("forward_pump_rabi", "backward_pump_rabi", "probe_rabi", "gamma12"):
            if getattr(self, name) < 0:
                raise DomainError(f"{name} must be >= 0")
        grid = np.asarray(self.two_photon_detuning_grid, dtype=float)
        Spectrum(grid, np.zeros_like(grid))  # uniformity check
        object.__setattr__(self, "two_photon_detuning_grid", grid)

    def lambda_config(self, two_photon_detuning: float) -> LambdaConfig:
        return LambdaConfig(
            pump_rabi=self.backward_pump_rabi,
            probe_rabi=self.probe_rabi,
            one_photon_detuning=self.one_photon_detuning,
            two_photon_detuning=two_photon_detuning,
            gamma12=self.gamma12,
            excited_decay=self.excited_decay,
        )


def dark_state_coherence(probe_rabi, backward_pump_rabi):
    """``|rho12|`` of the ideal dark state."""
    total = probe_rabi**2 + backward_pump_rabi**2
    return probe_rabi * backward_pump_rabi / total


def grating_amplitude(cfg: FwmConfig, two_photon_detuning) -> np.ndarray | complex:
    """Ground-state coherence ``rho12`` from the full steady state (scalar or array)."""
    if cfg.probe_rabi == 0 and cfg.backward_pump_rabi == 0:
        raise DegenerateModelError("grating needs at least one of probe and backward pump")
    deltas = np.asarray(two_photon_detuning, dtype=float)
    out = np.array([steady_state(cfg.lambda_config(float(d))).rho12 for d in deltas.ravel()])
    out = out.reshape(deltas.shape)
    return complex(out) if out.ndim == 0 else out


def pc_reflectivity_spectrum(cfg: FwmConfig) -> Spectrum:
    """``R(delta) = R_peak |rho12 Omega_f|^2 / max |rho12 Omega_f|^2`` on the config grid."""
    if not 0 <= cfg.peak_reflectivity_calibration < 1:
        raise DomainError("peak_reflectivity_calibration must lie in [0, 1)")
    grid = cfg.two_photon_detuning_grid
    if cfg.peak_reflectivity_calibration == 0:
        return Spectrum(grid, np.zeros_like(grid))
    readout = np.abs(grating_amplitude(cfg, grid) * cfg.forward_pump_rabi) ** 2
    peak = readout.max()
    if not peak > 0:
        raise NormalizationError("grating amplitude is zero everywhere")
    return Spectrum(grid, cfg.peak_reflectivity_calibration * readout / peak)


def reflectivity_fwhm(spectrum: Spectrum) -> float:
    """Full width at half maximum (rad/s) of a reflectivity line above its wings."""
    x, y = spectrum.detunings, np.real(spectrum.values)
    peak = int(np.argmax(y))
    base = wing_baseline(y)
    level = base + 0.5 * (y[peak] - base)
    above = np.nonzero(y >= level)[0]
    lo, hi = above[0], above[-1]
    if lo == 0 or hi == len(y) - 1:
        raise ShapeError("reflectivity line is not resolved inside the grid")
    right = x[hi] + (level - y[hi]) * (x[hi + 1] - x[hi]) / (y[hi + 1] - y[hi])
    left = x[lo] + (level - y[lo]) * (x[lo - 1] - x[lo]) / (y[lo - 1] - y[lo])
    return float(right - left)
