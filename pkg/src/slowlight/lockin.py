"""Frequency-dithered lock-in detection of a transmission spectrum."""

from __future__ import annotations

from dataclasses import dataclass
from math import factorial

import numpy as np
from scipy import constants as sc

from .errors import DomainError
from .spectra import doppler_chi

#: Small-dither contract: dither amplitude must stay below FWHM / 5.
MAX_DITHER_FRACTION = 0.2


@dataclass(frozen=True)
class LockInTrace:
    """Demodulated first-harmonic amplitude versus carrier detuning.

    ``signal`` is the time-domain simulation, ``analytic`` the derivative
    series; ``status`` is ``"ok"`` or ``"dither-too-large"``.
    """

    detunings: np.ndarray
    signal: np.ndarray
    analytic: np.ndarray
    dither_amplitude: float
    status: str

    @property
    def rms_discrepancy(self) -> float:
        """RMS of (simulated - analytic) relative to the RMS simulated signal."""
        scale = np.sqrt(np.mean(self.signal**2))
        if scale == 0:
            return 0.0
        return float(np.sqrt(np.mean((self.signal - self.analytic) ** 2)) / scale)

    def central_slope(self, which: str = "signal") -> float:
        """Slope of the trace at zero detuning (central difference)."""
        y = getattr(self, which)
        x = self.detunings
        i = int(np.argmin(np.abs(x)))
        if not 0 < i < len(x) - 1:
            raise DomainError("zero detuning is not inside the trace")
        return float((y[i + 1] - y[i - 1]) / (x[i + 1] - x[i - 1]))


def demodulate(transmission_fn, detunings, dither_amplitude, dither_rate,
               periods: int = 4, samples_per_period: int = 64) -> np.ndarray:
    """Simulate ``delta(t) = delta0 + a sin(w t)`` and project onto ``sin(w t)``.

    The average runs over an integer number of dither periods, so the
    trapezoid sum is exact for the periodic integrand up to aliasing.
    """
    detunings = np.asarray(detunings, dtype=float)
    period = 2 * np.pi / dither_rate
    t = np.arange(periods * samples_per_period) * period / samples_per_period
    ref = np.sin(dither_rate * t)
    out = np.empty(detunings.shape)
    rows = max(1, 16384 // ref.size)
    for start in range(0, detunings.size, rows):
        swept = detunings[start:start + rows, None] + dither_amplitude * ref[None, :]
        values = np.asarray(transmission_fn(swept.ravel()), dtype=float).reshape(swept.shape)
        out[start:start + rows] = 2 * np.mean(values * ref[None, :], axis=1)
    return out


def derivative_series(transmission_fn, detunings, dither_amplitude, order: int = 5,
                      step: float | None = None) -> np.ndarray:
    """First-harmonic amplitude from odd derivatives of the line shape.

    ``X = sum_k 2 (a/2)^(2k+1) T^(2k+1) / (k! (k+1)!)``; derivatives come from
    central finite-difference stencils with step ``a / 4``.
    """
    x = np.asarray(detunings, dtype=float)
    a = dither_amplitude
    h = a / 4 if step is None else step
    f = {m: np.asarray(transmission_fn(x + m * h), dtype=float) for m in range(-3, 4)}
    derivs = {
        1: (-f[2] + 8 * f[1] - 8 * f[-1] + f[-2]) / (12 * h),
        3: (f[2] - 2 * f[1] + 2 * f[-1] - f[-2]) / (2 * h**3),
        5: (f[3] - 4 * f[2] + 5 * f[1] - 5 * f[-1] + 4 * f[-2] - f[-3]) / (2 * h**5),
    }
    out = np.zeros_like(x)
    for k in range((order + 1) // 2):
        n = 2 * k + 1
        out += 2 * (a / 2) ** n / (factorial(k) * factorial(k + 1)) * derivs[n]
    return out


def lock_in_signal(transmission_fn, dither_amplitude: float, dither_rate: float, detunings,
                   fwhm: float | None = None, periods: int = 4,
                   samples_per_period: int = 64) -> LockInTrace:
    """Lock-in trace of ``transmission_fn`` with both the simulated and series paths.

    ``fwhm`` (rad/s) enables the small-dither contract check.
    """
    if dither_amplitude <= 0 or dither_rate <= 0:
        raise DomainError("dither amplitude and rate must be positive")
    signal = demodulate(transmission_fn, detunings, dither_amplitude, dither_rate,
                        periods, samples_per_period)
    analytic = derivative_series(transmission_fn, detunings, dither_amplitude)
    status = "ok"
    if fwhm is not None and dither_amplitude >= MAX_DITHER_FRACTION * fwhm:
        status = "dither-too-large"
    return LockInTrace(np.asarray(detunings, dtype=float), signal, analytic, dither_amplitude, status)


def medium_transmission_fn(medium):
    """Callable ``delta -> T(delta)`` for a :class:`MediumConfig` (any array shape)."""
    omega0 = medium.carrier_angular_frequency

    def transmission(delta):
        delta = np.asarray(delta, dtype=float)
        chi = doppler_chi(medium, delta)
        alpha = (omega0 + delta) / sc.c * chi.imag
        return np.exp(-alpha * medium.cell.length)

    return transmission
