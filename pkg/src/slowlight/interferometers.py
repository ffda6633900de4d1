"""Mach-Zehnder homodyne readout of the index and the Sagnac gyro model.

The gyro backscatter model places one coherent parasitic field ``r e^{i theta}``
at the detection port, next to the reference arm.  Writing
``1 + r e^{i theta} = |B| e^{i beta}`` the fringe is
``1 + |B|^2 + 2|B| cos(phi + dphi - beta)``, so any fringe-phase estimator
reads ``dphi - beta``.  The bias is therefore ``-atan2(r sin theta, 1 + r cos theta)``:
``-r sin theta`` at small ``r`` and at most ``arcsin r`` in magnitude.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import constants as sc
from scipy.optimize import least_squares

from .errors import DomainError, FitError
from .spectra import MediumResponse, Spectrum

SMALL_PHASE_LIMIT = 0.1
AMPLITUDE_FLOOR = 0.01


@dataclass(frozen=True)
class HomodyneConfig:
    """Mach-Zehnder readout settings.

    ``probe_amplitude_spectrum=None`` takes ``|E_p| = exp(-alpha L / 2)`` from
    the response, i.e. a unit input amplitude attenuated by the cell.
    """

    reference_phase: float = np.pi / 2
    reference_amplitude: float = 1.0
    probe_amplitude_spectrum: Spectrum | None = None
    length: float = 0.1
    wavelength: float = 589.6e-9

    def __post_init__(self):
        if self.reference_amplitude < 0:
            raise DomainError("reference_amplitude must be >= 0")
        if not self.length > 0:
            raise DomainError("length must be > 0")
        if not self.wavelength > 0:
            raise DomainError("wavelength must be > 0")
        if self.probe_amplitude_spectrum is not None and np.any(
                np.real(self.probe_amplitude_spectrum.values) < 0):
            raise DomainError("probe amplitudes must be >= 0")

    def probe_amplitude(self, resp: MediumResponse) -> np.ndarray:
        if self.probe_amplitude_spectrum is None:
            return np.exp(-0.5 * resp.absorption_coeff * self.length)
        spec = self.probe_amplitude_spectrum
        if spec.detunings.shape != resp.detunings.shape or not np.allclose(spec.detunings, resp.detunings):
            raise DomainError("probe amplitude spectrum is not on the response grid")
        return np.real(spec.values).astype(float)


@dataclass(frozen=True)
class HomodyneTrace(Spectrum):
    """Photodiode signal versus detuning.

    ``probe_amplitude`` is the ``|E_p|`` used to build it and ``small_phase``
    is False when ``|dphi|`` exceeds 0.1 rad somewhere on the grid.
    """

    probe_amplitude: np.ndarray | None = None
    small_phase: bool = True
    max_phase: float = 0.0


@dataclass(frozen=True)
class IndexVariation(Spectrum):
    """Recovered ``Re n - 1``; entries outside ``valid`` are set to zero."""

    valid: np.ndarray | None = None


def homodyne_phase(resp: MediumResponse, cfg: HomodyneConfig) -> np.ndarray:
    return 2 * np.pi / cfg.wavelength * np.real(resp.index_minus_one.values) * cfg.length


def homodyne_trace(resp: MediumResponse, cfg: HomodyneConfig) -> HomodyneTrace:
    """``i_D = 2 |E_p| |E_ref| cos(dphi + phi_ref)`` across the response grid."""
    amp = cfg.probe_amplitude(resp)
    phase = homodyne_phase(resp, cfg)
    signal = 2 * amp * cfg.reference_amplitude * np.cos(phase + cfg.reference_phase)
    max_phase = float(np.max(np.abs(phase))) if phase.size else 0.0
    return HomodyneTrace(resp.detunings, signal, amp, max_phase <= SMALL_PHASE_LIMIT, max_phase)


def index_variation_from_trace(trace: Spectrum, cfg: HomodyneConfig, resp: MediumResponse | None = None,
                               exact: bool = False) -> IndexVariation:
    """Invert a quadrature (``phi_ref = pi/2``) trace for ``Re n - 1``.

    The linear inversion ``dn = -i_D / (2 |E_p||E_ref|) * lambda / (2 pi L)``
    is used by default; ``exact=True`` applies ``arcsin`` to the normalised
    signal instead.  Points where ``|E_p|`` is below 1 % of its maximum, or
    where the normalised signal implies ``|dphi| > 0.1`` (linear mode), are
    marked invalid.
    """
    if getattr(trace, "probe_amplitude", None) is not None:
        amp = np.asarray(trace.probe_amplitude, dtype=float)
    elif resp is not None:
        amp = cfg.probe_amplitude(resp)
    elif cfg.probe_amplitude_spectrum is not None:
        amp = np.real(cfg.probe_amplitude_spectrum.values).astype(float)
    else:
        raise DomainError("probe amplitude unknown: pass resp or set probe_amplitude_spectrum")
    signal = np.real(trace.values).astype(float)
    scale = 2 * amp * cfg.reference_amplitude
    valid = amp > AMPLITUDE_FLOOR * amp.max() if amp.size and amp.max() > 0 else np.zeros(amp.shape, bool)
    ratio = np.zeros_like(signal)
    np.divide(-signal, scale, out=ratio, where=valid & (scale > 0))
    if exact:
        valid &= np.abs(ratio) < 1
        phase = np.arcsin(np.clip(ratio, -1, 1))
    else:
        valid &= np.abs(ratio) <= np.sin(SMALL_PHASE_LIMIT)
        phase = ratio
    dn = np.where(valid, phase * cfg.wavelength / (2 * np.pi * cfg.length), 0.0)
    return IndexVariation(trace.detunings, dn, valid)


@dataclass(frozen=True)
class GyroScenario:
    loop_area: float = 0.01
    rotation_rate: float = 1e-3
    wavelength: float = 589.6e-9
    group_index: float = 1.0
    pc_amplitude_reflectivity: float = 0.0
    parasitic_phase: float = 0.0

    def __post_init__(self):
        if not self.loop_area > 0:
            raise DomainError("loop_area must be > 0")
        if not self.group_index >= 1:
            raise DomainError("group_index must be >= 1")
        if not 0 <= self.pc_amplitude_reflectivity < 1:
            raise DomainError("pc_amplitude_reflectivity must lie in [0, 1)")
        if not self.wavelength > 0:
            raise DomainError("wavelength must be > 0")

    @property
    def scale_factor(self) -> float:
        """``d(dphi)/d(Omega_rot)`` in seconds."""
        return self.group_index * 8 * np.pi * self.loop_area / (self.wavelength * sc.c)


def sagnac_phase(scenario: GyroScenario) -> float:
    """Drag-enhanced Sagnac phase ``n_g 8 pi A Omega / (lambda c)``."""
    return scenario.scale_factor * scenario.rotation_rate


def fringe_intensity(probe_phase, scenario: GyroScenario) -> np.ndarray:
    """Detected fringe ``|e^{i(phi + dphi)} + 1 + r e^{i theta}|^2``."""
    r, theta = scenario.pc_amplitude_reflectivity, scenario.parasitic_phase
    field = np.exp(1j * (np.asarray(probe_phase) + sagnac_phase(scenario))) + 1 + r * np.exp(1j * theta)
    return np.abs(field) ** 2


def analytic_pc_bias(r, theta):
    """Closed-form fringe-phase bias of the single-parasitic-field model."""
    return -np.arctan2(r * np.sin(theta), 1 + r * np.cos(theta))


def _wrap(phase):
    return (phase + np.pi) % (2 * np.pi) - np.pi


@dataclass(frozen=True)
class PcBias:
    phase_bias: float
    rotation_bias: float


def fit_fringe_phase(probe_phase, intensity, coarse: int = 72) -> float:
    """Phase ``psi`` of ``a + b cos(phi + psi)`` by coarse grid then least squares."""
    phi = np.asarray(probe_phase, dtype=float)
    y = np.asarray(intensity, dtype=float)

    def linear_fit(psi):
        design = np.column_stack([np.ones_like(phi), np.cos(phi + psi)])
        coef, *_ = np.linalg.lstsq(design, y, rcond=None)
        return coef, np.sum((design @ coef - y) ** 2)

    grid = np.linspace(-np.pi, np.pi, coarse, endpoint=False)
    fits = [linear_fit(psi) for psi in grid]
    best = int(np.argmin([cost for (coef, cost) in fits]))
    (a0, b0), _ = fits[best]
    psi0 = grid[best]
    if b0 < 0:
        b0, psi0 = -b0, psi0 + np.pi

    res = least_squares(lambda p: p[0] + p[1] * np.cos(phi + p[2]) - y, [a0, b0, psi0],
                        xtol=1e-15, ftol=1e-15, gtol=1e-15)
    scale = max(np.ptp(y), np.finfo(float).tiny)
    if not res.success or np.sqrt(np.mean(res.fun**2)) > 1e-6 * scale + 1e-12:
        raise FitError(f"fringe fit did not converge: {res.message}")
    a, b, psi = res.x
    if b < 0:
        psi += np.pi
    return float(_wrap(psi))


def pc_bias(scenario: GyroScenario, fringe_probe_points: int = 64) -> PcBias:
    """Fringe-phase and equivalent rotation-rate bias from PC backscatter."""
    if scenario.pc_amplitude_reflectivity >= 0.5:
        raise DomainError("pc_amplitude_reflectivity must be < 0.5")
    if fringe_probe_points < 4:
        raise DomainError("need at least 4 fringe samples")
    if scenario.pc_amplitude_reflectivity == 0:
        return PcBias(0.0, 0.0)
    phi = 2 * np.pi * np.arange(fringe_probe_points) / fringe_probe_points
    psi = fit_fringe_phase(phi, fringe_intensity(phi, scenario))
    bias = float(_wrap(psi - sagnac_phase(scenario)))
    return PcBias(bias, bias / scenario.scale_factor)


def fringe_scan_bias(scenario: GyroScenario, points: int = 200001) -> float:
    """Bias from the location of the fringe maximum on a dense scan (refined parabolically)."""
    phi = np.linspace(-np.pi, np.pi, points, endpoint=False)
    y = fringe_intensity(phi, scenario)
    k = int(np.argmax(y))
    ym, y0, yp = y[(k - 1) % points], y[k], y[(k + 1) % points]
    frac = 0.5 * (ym - yp) / (ym - 2 * y0 + yp)
    peak = phi[k] + frac * (phi[1] - phi[0])
    return float(_wrap(-peak - sagnac_phase(scenario)))


def bias_versus_theta(scenario: GyroScenario, thetas, fringe_probe_points: int = 64) -> np.ndarray:
    """Fitted phase bias for each parasitic phase in ``thetas``."""
    out = []
    for theta in np.asarray(thetas, dtype=float):
        s = GyroScenario(scenario.loop_area, scenario.rotation_rate, scenario.wavelength,
                         scenario.group_index, scenario.pc_amplitude_reflectivity, float(theta))
        out.append(pc_bias(s, fringe_probe_points).phase_bias)
    return np.array(out)
