"""Invert measured EIT observables for density, ground decoherence and pump Rabi rate."""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass

import numpy as np
from scipy import constants as sc
from scipy.optimize import minimize

from .errors import CalibrationError, InfeasibleTargetError, ResolutionError, ShapeError
from .medium import NOMINAL_CARRIER_WAVELENGTH, MediumConfig
from .spectra import (detuning_grid, dispersion_slope, eit_fwhm, index_at_zero,
                      medium_response, transmission_spectrum)

log = logging.getLogger(__name__)

FREE_PARAMETERS = ("density", "gamma12", "pump_rabi")

DEFAULT_BOUNDS = {
    "density": (1e14, 1e18),
    "gamma12": (1e4, 1e8),
    "pump_rabi": (1e6, 1e10),
}


@dataclass(frozen=True)
class CalibrationTargets:
    peak_transmission: float = 0.23
    eit_fwhm: float = 2 * np.pi * 1e6
    group_index: float = 607.0

    def __post_init__(self):
        for name in ("peak_transmission", "eit_fwhm", "group_index"):
            if not getattr(self, name) > 0:
                raise InfeasibleTargetError(f"{name} must be positive")


@dataclass(frozen=True)
class Observables:
    peak_transmission: float
    eit_fwhm: float
    group_index: float

    def log_residuals(self, targets: CalibrationTargets) -> np.ndarray:
        return np.log([self.peak_transmission / targets.peak_transmission,
                       self.eit_fwhm / targets.eit_fwhm,
                       self.group_index / targets.group_index])


@dataclass(frozen=True)
class CalibrationResult:
    medium: MediumConfig
    observables: Observables
    residuals: np.ndarray
    starts: int
    evaluations: int


def carrier_for_group_index() -> float:
    return 2 * np.pi * sc.c / NOMINAL_CARRIER_WAVELENGTH


def observe(medium: MediumConfig, grid=None) -> Observables:
    """Peak transmission, EIT FWHM and group index of a medium."""
    grid = detuning_grid() if grid is None else grid
    resp = medium_response(medium, grid)
    trans = transmission_spectrum(resp)
    fwhm = eit_fwhm(trans)
    slope = dispersion_slope(resp, fwhm).value
    n_g = index_at_zero(resp) + carrier_for_group_index() * slope
    return Observables(float(trans.values.max()), fwhm, n_g)


def _apply(base: MediumConfig, logp) -> MediumConfig:
    density, gamma12, pump = np.exp(logp)
    return base.replace(density=float(density), gamma12=float(gamma12), pump_rabi=float(pump),
                        probe_rabi=0.0)


def calibrate(targets: CalibrationTargets = CalibrationTargets(), base: MediumConfig | None = None,
              bounds: dict | None = None, seed: int = 0, starts: int = 4, grid=None,
              scan_points: int = 5, tolerance: float = 0.05) -> CalibrationResult:
    """Fit ``density``, ``gamma12`` and ``pump_rabi`` to the three targets.

    A coarse log-spaced scan first checks that every target lies between the
    extrema seen over the bounds.  Bounded Nelder-Mead then minimises the sum
    of squared log-residuals from ``starts`` points: the best scan point plus
    seeded random draws.
    """
    base = MediumConfig() if base is None else base
    bounds = {**DEFAULT_BOUNDS, **(bounds or {})}
    grid = detuning_grid() if grid is None else grid
    if not 0 < targets.peak_transmission <= 1:
        raise InfeasibleTargetError(f"peak transmission {targets.peak_transmission} outside (0, 1]")
    log_bounds = np.log([bounds[name] for name in FREE_PARAMETERS])

    evaluations = 0

    def evaluate(logp):
        nonlocal evaluations
        evaluations += 1
        try:
            return observe(_apply(base, logp), grid)
        except (ShapeError, ResolutionError):
            return None

    def objective(logp):
        obs = evaluate(logp)
        if obs is None or not np.isfinite(obs.group_index) or obs.group_index <= 0:
            return 1e3
        return float(np.sum(obs.log_residuals(targets) ** 2))

    axes = [np.linspace(lo, hi, scan_points) for lo, hi in log_bounds]
    scanned = []
    for point in itertools.product(*axes):
        obs = evaluate(np.array(point))
        if obs is not None and obs.group_index > 0:
            scanned.append((np.array(point), obs))
    if not scanned:
        raise InfeasibleTargetError("no transparency peak anywhere in the scan")
    extrema = {}
    for name in ("peak_transmission", "eit_fwhm", "group_index"):
        vals = [getattr(obs, name) for _, obs in scanned]
        extrema[name] = (min(vals), max(vals))
        target = getattr(targets, name)
        if not extrema[name][0] <= target <= extrema[name][1]:
            raise InfeasibleTargetError(
                f"{name} target {target:.6g} not bracketed by scan range "
                f"[{extrema[name][0]:.6g}, {extrema[name][1]:.6g}]", extrema)

    scores = [np.sum(obs.log_residuals(targets) ** 2) for _, obs in scanned]
    rng = np.random.default_rng(seed)
    initial = [scanned[int(np.argmin(scores))][0]]
    for _ in range(starts - 1):
        initial.append(rng.uniform(log_bounds[:, 0], log_bounds[:, 1]))

    best = None
    for x0 in initial:
        res = minimize(objective, x0, method="Nelder-Mead", bounds=log_bounds,
                       options={"xatol": 1e-7, "fatol": 1e-14, "maxfev": 600})
        log.debug("start %s -> %s (f=%.3g)", x0, res.x, res.fun)
        if best is None or res.fun < best.fun:
            best = res
    medium = _apply(base, best.x)
    obs = observe(medium, grid)
    residuals = obs.log_residuals(targets)
    if np.any(np.abs(residuals) > np.log1p(tolerance)):
        raise CalibrationError(f"calibration residuals {np.expm1(residuals)} exceed {tolerance:.0%}")
    return CalibrationResult(medium, obs, residuals, len(initial), evaluations)
