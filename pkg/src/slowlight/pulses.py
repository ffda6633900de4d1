"""Probe pulses, spectral propagation through the cell and delay metrology.

Envelopes follow the optical convention ``E(t) exp(-i w0 t)``: a spectral
component ``exp(-i nu t)`` sits at ``w0 + nu``.  Propagation uses the transfer
function relative to an equal vacuum path, so the output is directly
comparable with a reference pulse that bypassed the cell.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import constants as sc
from scipy.interpolate import CubicSpline

from .errors import (AlignmentError, BoundaryLeakError, CoverageError, DegeneratePulseError,
                     DomainError, ShapeError)
from .spectra import MediumResponse

SUPPORT_THRESHOLD = 1e-4
BOUNDARY_LEAK = 1e-6


@dataclass(frozen=True)
class Pulse:
    times: np.ndarray
    envelope: np.ndarray
    carrier_detuning: float = 0.0

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        e = np.asarray(self.envelope, dtype=complex)
        if t.ndim != 1 or e.shape != t.shape:
            raise ShapeError("times and envelope must be 1-D arrays of equal length")
        dt = np.diff(t)
        if np.any(dt <= 0) or np.ptp(dt) > 1e-9 * dt.mean():
            raise ShapeError("time grid must be uniform and increasing")
        if not np.all(np.isfinite(e)):
            raise ShapeError("envelope contains non-finite values")
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "envelope", e)

    @property
    def dt(self) -> float:
        return (self.times[-1] - self.times[0]) / (self.times.size - 1)

    @property
    def intensity(self) -> np.ndarray:
        return np.abs(self.envelope) ** 2

    @property
    def energy(self) -> float:
        return float(np.sum(self.intensity) * self.dt)

    def with_envelope(self, envelope) -> "Pulse":
        return Pulse(self.times, envelope, self.carrier_detuning)


def _is_power_of_two(n: int) -> bool:
    return n > 0 and n & (n - 1) == 0


def profile_fwhm(x: np.ndarray, y: np.ndarray) -> float:
    """FWHM of a single-peaked profile with linear interpolation at the crossings."""
    peak = int(np.argmax(y))
    half = 0.5 * y[peak]
    right = peak
    while right < len(y) - 1 and y[right + 1] > half:
        right += 1
    left = peak
    while left > 0 and y[left - 1] > half:
        left -= 1
    if right == len(y) - 1 or left == 0:
        raise ShapeError("profile does not fall to half maximum inside the window")
    xr = x[right] + (half - y[right]) * (x[right + 1] - x[right]) / (y[right + 1] - y[right])
    xl = x[left] + (half - y[left]) * (x[left - 1] - x[left]) / (y[left - 1] - y[left])
    return float(xr - xl)


def gaussian_pulse(fwhm: float, window: float = 10e-6, samples: int = 2**14,
                   carrier_detuning: float = 0.0) -> Pulse:
    """Transform-limited Gaussian of unit peak amplitude centred in the window.

    ``fwhm`` is the intensity full width at half maximum in seconds.
    """
    if not fwhm > 0:
        raise DomainError("fwhm must be positive")
    if not _is_power_of_two(samples) or samples < 4096:
        raise DomainError(f"samples must be a power of two >= 4096, got {samples}")
    if window < 10 * fwhm:
        raise BoundaryLeakError(f"window {window:.3g} s shorter than 10 x FWHM ({10 * fwhm:.3g} s)")
    dt = window / samples
    times = (np.arange(samples) - samples // 2) * dt
    sigma = fwhm / (2 * np.sqrt(np.log(2)))
    envelope = np.exp(-0.5 * (times / sigma) ** 2)
    if max(abs(envelope[0]), abs(envelope[-1])) >= BOUNDARY_LEAK:
        raise BoundaryLeakError("pulse amplitude at the window edge exceeds 1e-6 of peak")
    return Pulse(times, envelope.astype(complex), carrier_detuning)


def angular_frequencies(pulse: Pulse) -> np.ndarray:
    return 2 * np.pi * np.fft.fftfreq(pulse.times.size, pulse.dt)


def spectral_amplitude(pulse: Pulse) -> np.ndarray:
    """Unitary continuous-transform amplitude on :func:`angular_frequencies`."""
    n = pulse.times.size
    return np.fft.ifft(pulse.envelope) * n * pulse.dt / np.sqrt(2 * np.pi)


def spectral_energy(pulse: Pulse) -> float:
    amp = spectral_amplitude(pulse)
    dnu = 2 * np.pi / (pulse.times.size * pulse.dt)
    return float(np.sum(np.abs(amp) ** 2) * dnu)


def spectral_fwhm(pulse: Pulse, pad: int = 8) -> float:
    """Intensity-spectrum FWHM in Hz, from a zero-padded transform."""
    n = pulse.times.size * pad
    spec = np.abs(np.fft.fftshift(np.fft.ifft(pulse.envelope, n))) ** 2
    freqs = np.fft.fftshift(np.fft.fftfreq(n, pulse.dt))
    return profile_fwhm(freqs, spec)


def interpolated_index(resp: MediumResponse, offsets) -> np.ndarray:
    """Cubic-spline ``n - 1`` at detunings ``offsets``, held constant beyond the grid."""
    x = resp.detunings
    index = resp.index_minus_one.values
    at = np.clip(offsets, x[0], x[-1])
    return CubicSpline(x, index.real)(at) + 1j * CubicSpline(x, index.imag)(at)


def propagate(pulse: Pulse, resp: MediumResponse, length: float | None = None,
              carrier_angular_frequency: float | None = None) -> Pulse:
    """Send ``pulse`` through ``length`` of medium, relative to a vacuum path."""
    length = resp.length if length is None else length
    omega0 = resp.carrier_angular_frequency if carrier_angular_frequency is None else carrier_angular_frequency
    nu = angular_frequencies(pulse)
    amp = np.fft.ifft(pulse.envelope)
    offsets = nu + pulse.carrier_detuning
    mag = np.abs(amp)
    support = mag >= SUPPORT_THRESHOLD * mag.max()
    lo, hi = resp.detunings[0], resp.detunings[-1]
    outside = support & ((offsets < lo) | (offsets > hi))
    if outside.any():
        excess = np.where(offsets < lo, lo - offsets, offsets - hi)
        worst = offsets[outside][np.argmax(excess[outside])]
        raise CoverageError(f"pulse spectrum reaches {worst / (2 * np.pi):.6g} Hz, outside the "
                            f"response grid [{lo / (2 * np.pi):.6g}, {hi / (2 * np.pi):.6g}] Hz",
                            offset=worst)
    n_minus_1 = interpolated_index(resp, offsets)
    transfer = np.exp(1j * (omega0 + nu) * n_minus_1 * length / sc.c)
    return pulse.with_envelope(np.fft.fft(amp * transfer))


@dataclass(frozen=True)
class DelayMeasurement:
    centroid: float
    cross_correlation: float

    @property
    def agreement(self) -> float:
        """Relative difference between the two metrics."""
        scale = max(abs(self.centroid), abs(self.cross_correlation))
        return 0.0 if scale == 0 else abs(self.centroid - self.cross_correlation) / scale

    def __float__(self):
        return float(self.centroid)


def _check_aligned(a: Pulse, b: Pulse):
    if a.times.shape != b.times.shape or np.max(np.abs(a.times - b.times)) > 1e-9 * a.dt:
        raise AlignmentError("pulses are sampled on different time grids")


def centroid(pulse: Pulse) -> float:
    intensity = pulse.intensity
    total = intensity.sum()
    if total == 0:
        raise DegeneratePulseError("pulse has zero energy")
    return float(np.sum(pulse.times * intensity) / total)


def measure_delay(out: Pulse, reference: Pulse) -> DelayMeasurement:
    """Delay of ``out`` behind ``reference`` by intensity centroid and cross-correlation."""
    _check_aligned(out, reference)
    by_centroid = centroid(out) - centroid(reference)
    corr = np.fft.ifft(np.fft.fft(out.intensity) * np.conj(np.fft.fft(reference.intensity))).real
    n = corr.size
    k = int(np.argmax(corr))
    ym, y0, yp = corr[(k - 1) % n], corr[k], corr[(k + 1) % n]
    denom = ym - 2 * y0 + yp
    frac = 0.0 if denom == 0 else 0.5 * (ym - yp) / denom
    lag = k if k <= n // 2 else k - n
    return DelayMeasurement(by_centroid, float((lag + frac) * out.dt))


@dataclass(frozen=True)
class SpreadingMetrics:
    fwhm_ratio: float
    skewness: float
    energy_transmission: float


def skewness(pulse: Pulse) -> float:
    """Third standardized central moment of the intensity profile."""
    w = pulse.intensity / pulse.intensity.sum()
    mean = np.sum(w * pulse.times)
    d = pulse.times - mean
    var = np.sum(w * d**2)
    return float(np.sum(w * d**3) / var**1.5)


def spreading_metrics(out: Pulse, reference: Pulse) -> SpreadingMetrics:
    _check_aligned(out, reference)
    if out.energy == 0:
        raise DegeneratePulseError("output pulse has zero energy")
    ratio = profile_fwhm(out.times, out.intensity) / profile_fwhm(reference.times, reference.intensity)
    return SpreadingMetrics(ratio, skewness(out), out.energy / reference.energy)
