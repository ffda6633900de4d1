"""Frequency-domain observables on a uniform two-photon detuning grid."""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy import constants as sc
from scipy.interpolate import CubicSpline
from scipy.signal import fftconvolve

from .atomic import chi_prefactor, lambda_response
from .doppler import velocity_quadrature
from .errors import DomainError, FitError, NumericError, ResolutionError, ShapeError
from .medium import MediumConfig

DEFAULT_SPAN = 2 * np.pi * 10e6
DEFAULT_POINTS = 4001


@dataclass(frozen=True)
class Spectrum:
    """Values (real or complex) on a uniform, strictly increasing grid in rad/s."""

    detunings: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.detunings, dtype=float)
        y = np.asarray(self.values)
        if x.ndim != 1 or y.shape != x.shape:
            raise ShapeError("detunings and values must be 1-D arrays of equal length")
        if x.size >= 2:
            step = np.diff(x)
            if np.any(step <= 0):
                raise ShapeError("detuning grid must be strictly increasing")
            mean = (x[-1] - x[0]) / (x.size - 1)
            if np.max(np.abs(step - mean)) > 1e-9 * abs(mean) + 4 * np.finfo(float).eps * np.max(np.abs(x)):
                raise ShapeError("detuning grid is not uniform")
        if not np.all(np.isfinite(y)):
            raise NumericError("spectrum contains non-finite values")
        object.__setattr__(self, "detunings", x)
        object.__setattr__(self, "values", y)

    @property
    def step(self) -> float:
        return (self.detunings[-1] - self.detunings[0]) / (self.detunings.size - 1)

    def __len__(self):
        return self.detunings.size

    def with_values(self, values) -> "Spectrum":
        return Spectrum(self.detunings, values)


ComplexSpectrum = Spectrum


@dataclass(frozen=True)
class MediumResponse:
    """Probe susceptibility and derived index/absorption on one grid."""

    chi: Spectrum
    index_minus_one: Spectrum
    absorption_coeff: np.ndarray
    carrier_angular_frequency: float
    length: float = 0.1

    @property
    def detunings(self) -> np.ndarray:
        return self.chi.detunings


def detuning_grid(span: float = DEFAULT_SPAN, points: int = DEFAULT_POINTS) -> np.ndarray:
    """Symmetric grid ``[-span, span]`` containing zero when ``points`` is odd."""
    return np.linspace(-span, span, points)


def doppler_chi(medium: MediumConfig, two_photon, one_photon=None) -> np.ndarray:
    """Doppler-averaged weak-probe susceptibility at the given Raman detunings."""
    delta = np.asarray(two_photon, dtype=float)
    big_delta = medium.one_photon_detuning if one_photon is None else one_photon
    config = medium.lambda_config()
    density = medium.number_density
    if density == 0:
        return np.zeros(delta.shape, dtype=complex)
    velocities, weights = velocity_quadrature(medium.species, medium.cell.temperature,
                                              medium.quadrature_nodes, medium.contour_shift)
    k = medium.species.wavenumber
    dk = medium.wavevector_mismatch
    v = velocities.reshape((-1,) + (1,) * delta.ndim)
    kernel = lambda_response(big_delta - k * v, delta - dk * v, config.pump_rabi,
                             config.gamma12, config.gamma13)
    if not np.all(np.isfinite(kernel)):
        bad = int(np.argmin(np.isfinite(kernel).reshape(len(velocities), -1).all(axis=1)))
        raise NumericError(f"non-finite susceptibility at quadrature node {bad}",
                           node=(bad, velocities[bad]))
    averaged = np.tensordot(weights, kernel, axes=(0, 0))
    return chi_prefactor(density, medium.dipole_moment) * averaged


def medium_response(medium: MediumConfig, grid=None, exact_index: bool = False) -> MediumResponse:
    """Doppler-averaged response of the cell over a two-photon detuning grid.

    The grid should span at least ten EIT widths on each side; the default is
    +-2 pi x 10 MHz with 4001 points.  ``n - 1 = chi / 2`` unless
    ``exact_index`` asks for ``sqrt(1 + chi) - 1``.
    """
    grid = detuning_grid() if grid is None else np.asarray(grid, dtype=float)
    chi = doppler_chi(medium, grid)
    index = np.sqrt(1 + chi) - 1 if exact_index else 0.5 * chi
    omega = medium.carrier_angular_frequency + grid
    alpha = 2 * omega / sc.c * index.imag
    return MediumResponse(
        chi=Spectrum(grid, chi),
        index_minus_one=Spectrum(grid, index),
        absorption_coeff=alpha,
        carrier_angular_frequency=medium.carrier_angular_frequency,
        length=medium.cell.length,
    )


def vacuum_response(grid=None, carrier_angular_frequency=None, length: float = 0.1) -> MediumResponse:
    grid = detuning_grid() if grid is None else np.asarray(grid, dtype=float)
    omega0 = (2 * np.pi * sc.c / 589.6e-9) if carrier_angular_frequency is None else carrier_angular_frequency
    zeros = np.zeros(grid.shape, dtype=complex)
    return MediumResponse(Spectrum(grid, zeros), Spectrum(grid, zeros), np.zeros(grid.shape),
                          omega0, length)


def response_from_index(grid, index_minus_one, carrier_angular_frequency, length=0.1) -> MediumResponse:
    """Wrap a prescribed complex ``n - 1`` profile (synthetic media, tests)."""
    grid = np.asarray(grid, dtype=float)
    index = np.asarray(index_minus_one, dtype=complex)
    alpha = 2 * (carrier_angular_frequency + grid) / sc.c * index.imag
    return MediumResponse(Spectrum(grid, 2 * index), Spectrum(grid, index), alpha,
                          carrier_angular_frequency, length)


def transmission_spectrum(resp: MediumResponse, length: float | None = None) -> Spectrum:
    """Beer-Lambert intensity transmission ``exp(-alpha L)``."""
    length = resp.length if length is None else length
    if not length > 0:
        raise DomainError("length must be > 0")
    return Spectrum(resp.detunings, np.exp(-resp.absorption_coeff * length))


def wing_baseline(values: np.ndarray, fraction: float = 0.1) -> float:
    """Mean of the outer ``fraction`` of samples, averaged over both wings."""
    n = max(1, int(len(values) * fraction))
    return 0.5 * (np.mean(values[:n]) + np.mean(values[-n:]))


def _crossing(x, y, start, level, direction):
    i = start
    while 0 <= i + direction < len(y):
        j = i + direction
        if y[j] <= level:
            return x[i] + (level - y[i]) * (x[j] - x[i]) / (y[j] - y[i])
        i = j
    return None


def eit_fwhm(transmission: Spectrum) -> float:
    """Full width (rad/s) at half of (peak - wing baseline).

    The baseline is the mean of the outer 10 % of samples on each side; the
    half-level crossings are linearly interpolated between grid points.
    """
    x, y = transmission.detunings, np.real(transmission.values)
    n_wing = max(1, len(y) // 10)
    peak = int(np.argmax(y))
    if peak < n_wing or peak >= len(y) - n_wing:
        raise ShapeError("no interior transmission peak")
    base = wing_baseline(y)
    if not y[peak] > base:
        raise ShapeError("peak does not rise above the wing baseline")
    level = base + 0.5 * (y[peak] - base)
    right = _crossing(x, y, peak, level, +1)
    left = _crossing(x, y, peak, level, -1)
    if right is None or left is None:
        raise ShapeError("half-maximum level is not crossed inside the grid")
    return float(right - left)


class SlopeEstimate(NamedTuple):
    value: float
    step: float


def _zero_samples(spec: Spectrum, offsets):
    """Real parts at ``offsets * step`` around zero (spline if zero is off-grid)."""
    x = spec.detunings
    y = np.real(spec.values)
    h = spec.step
    if not x[0] <= 0 <= x[-1]:
        raise DomainError("delta = 0 is not bracketed by the grid")
    i0 = int(np.argmin(np.abs(x)))
    if abs(x[i0]) <= 1e-9 * h:
        idx = i0 + np.asarray(offsets)
        if idx.min() < 0 or idx.max() >= len(x):
            raise ResolutionError("not enough samples around delta = 0")
        return y[idx], h
    lo, hi = max(0, i0 - 8), min(len(x), i0 + 9)
    spline = CubicSpline(x[lo:hi], y[lo:hi])
    return spline(np.asarray(offsets) * h), h


def dispersion_slope(resp: MediumResponse, fwhm: float | None = None) -> SlopeEstimate:
    """``d Re n / d omega`` at delta = 0 (s/rad), Richardson-extrapolated.

    When ``fwhm`` is not given it is estimated from the absorption feature;
    a grid step above ``fwhm / 20`` raises :class:`ResolutionError`.
    """
    spec = resp.index_minus_one
    if fwhm is None:
        try:
            fwhm = eit_fwhm(Spectrum(spec.detunings, -spec.values.imag))
        except ShapeError:
            fwhm = None
    if fwhm is not None and spec.step > fwhm / 20:
        raise ResolutionError(f"grid step {spec.step:.4g} rad/s exceeds FWHM/20 = {fwhm / 20:.4g}")
    (m2, m1, p1, p2), h = _zero_samples(spec, [-2, -1, 1, 2])
    d1 = (p1 - m1) / (2 * h)
    d2 = (p2 - m2) / (4 * h)
    return SlopeEstimate((4 * d1 - d2) / 3, h)


def index_at_zero(resp: MediumResponse) -> float:
    (v,), _ = _zero_samples(resp.index_minus_one, [0])
    return 1.0 + float(v)


def group_index(resp: MediumResponse, carrier_angular_frequency: float | None = None,
                fwhm: float | None = None) -> float:
    """``n_g = Re n(0) + omega dn/domega`` at the line centre."""
    omega = resp.carrier_angular_frequency if carrier_angular_frequency is None else carrier_angular_frequency
    return index_at_zero(resp) + omega * dispersion_slope(resp, fwhm).value


def second_order_dispersion(resp: MediumResponse, fit_halfwidth: float, degree: int = 5) -> float:
    """``d^2 Re n / d omega^2`` at zero from a least-squares polynomial over the window."""
    x = resp.detunings
    mask = np.abs(x) <= fit_halfwidth * (1 + 1e-12)
    if x[0] > -fit_halfwidth or x[-1] < fit_halfwidth:
        raise DomainError("fit window extends beyond the grid")
    if mask.sum() < 25:
        raise ResolutionError(f"only {mask.sum()} samples in the fit window (need >= 25)")
    t = x[mask] / fit_halfwidth
    design = np.vander(t, degree + 1, increasing=True)
    cond = np.linalg.cond(design)
    if cond > 1e12:
        raise FitError(f"polynomial fit is ill-conditioned (cond = {cond:.3g})")
    coeffs, *_ = np.linalg.lstsq(design, np.real(resp.index_minus_one.values[mask]), rcond=None)
    return float(2 * coeffs[2] / fit_halfwidth**2)


def two_level_asymptote(medium: MediumConfig) -> complex:
    """Susceptibility far from two-photon resonance (the pump-free Doppler line)."""
    return complex(doppler_chi(medium.replace(pump_rabi=0.0, probe_rabi=0.0), np.zeros(1))[0])


def _hilbert_tail(t):
    """``-log1p(-t)/t**2 - 1/t`` with its series near ``t = 0``."""
    t = np.clip(np.asarray(t, dtype=float), -np.inf, 1 - 1e-9)
    out = np.empty_like(t)
    small = np.abs(t) < 1e-3
    ts = t[small]
    out[small] = 0.5 + ts / 3 + ts**2 / 4 + ts**3 / 5
    tl = t[~small]
    out[~small] = -np.log1p(-tl) / tl**2 - 1 / tl
    return out


def kramers_kronig_real(spec: Spectrum, asymptote: complex = 0.0, tail_correction: bool = True) -> np.ndarray:
    """Reconstruct ``Re (chi - asymptote)`` from ``Im (chi - asymptote)``.

    Uses ``Re f(y) = (1/pi) P int Im f(x) / (x - y) dx`` discretised with the
    odd-offset (Maclaurin) rule.  Beyond the grid the imaginary part is taken to
    fall as ``C / x^2`` with ``C`` matched to the edge sample on each side, and
    that tail's principal-value integral is added in closed form.
    """
    x = spec.detunings
    f = np.imag(spec.values - asymptote)
    n = len(x)
    m = np.arange(-(n - 1), n)
    kernel = np.zeros(m.shape)
    odd = m % 2 != 0
    kernel[odd] = 2 / (np.pi * m[odd])
    recon = -fftconvolve(f, kernel, mode="same")
    if tail_correction:
        right, left = x[-1], -x[0]
        c_right, c_left = f[-1] * right**2, f[0] * left**2
        recon += c_right / (np.pi * right**2) * _hilbert_tail(x / right)
        recon -= c_left / (np.pi * left**2) * _hilbert_tail(-x / left)
    return recon
