import numpy as np
import pytest
from scipy.special import wofz

from slowlight.atomic import SODIUM_D1, chi_prefactor
from slowlight.doppler import (CellConfig, doppler_average, doppler_fwhm, residual_wavenumber, thermal_speed,
                               transit_gamma, vapor_number_density, velocity_quadrature)
from slowlight.errors import NumericError, RangeError
from slowlight.medium import calibrated_sodium
from slowlight.spectra import detuning_grid, doppler_chi

T = 373.15
K_WAVE = SODIUM_D1.wavenumber
G13 = SODIUM_D1.natural_linewidth / 2


def test_density_override_is_verbatim():
    assert vapor_number_density(SODIUM_D1, T, density_override=1.234e15) == 1.234e15


def test_density_at_100C_hand_value():
    # liquid branch log10(P/torr) = 7.585 - 5377/T, ideal gas with k_B = 1.380649e-23
    p = 10 ** (7.585 - 5377 / 373.15) * 133.322368
    expected = p / (1.380649e-23 * 373.15)
    assert expected == pytest.approx(3.8742e15, rel=1e-4)
    assert vapor_number_density(SODIUM_D1, T) == pytest.approx(expected, rel=1e-12)


def test_density_monotone_across_melting_point():
    temps = np.linspace(300, 690, 200)
    dens = [vapor_number_density(SODIUM_D1, t) for t in temps]
    assert np.all(np.diff(dens) > 0)


@pytest.mark.parametrize("temp", [250.0, 800.0])
def test_density_outside_correlation(temp):
    with pytest.raises(RangeError):
        vapor_number_density(SODIUM_D1, temp)


def test_transit_rate_matches_microsecond_transit():
    gamma = transit_gamma(SODIUM_D1, CellConfig())
    assert 3e5 <= gamma <= 3e6


def test_transit_rate_scaling():
    narrow = transit_gamma(SODIUM_D1, CellConfig(beam_waist=100e-6))
    wide = transit_gamma(SODIUM_D1, CellConfig(beam_waist=200e-6))
    assert wide == pytest.approx(narrow / 2, rel=1e-15)
    assert transit_gamma(SODIUM_D1, CellConfig(beam_waist=1e9)) < 1e-6


def test_constant_integrand_unchanged():
    value = 0.3 - 2.5j
    got = doppler_average(lambda v: np.full(v.shape, value), SODIUM_D1, T)
    assert got == pytest.approx(value, rel=1e-14)


def _lorentzian(big_delta):
    return lambda v: 1j / (G13 - 1j * (big_delta - K_WAVE * v))


def test_voigt_peak_matches_trapezoid():
    u = thermal_speed(SODIUM_D1, T)
    v = np.linspace(-6 * u, 6 * u, 100001)
    weight = np.exp(-(v / u) ** 2) / (np.sqrt(np.pi) * u)
    reference = np.trapezoid(weight * _lorentzian(0.0)(v), v)
    got = doppler_average(_lorentzian(0.0), SODIUM_D1, T)
    assert got.imag == pytest.approx(reference.imag, rel=1e-6)


def test_voigt_matches_faddeeva():
    ku = K_WAVE * thermal_speed(SODIUM_D1, T)
    for big in np.linspace(-3e10, 3e10, 13):
        expected = 1j * np.sqrt(np.pi) / ku * wofz((big + 1j * G13) / ku)
        assert doppler_average(_lorentzian(big), SODIUM_D1, T) == pytest.approx(expected, rel=1e-10)


def test_doppler_width():
    # closed form (2/lambda) sqrt(2 ln2 kB T / m)
    mass = 22.98976928 * 1.66053906660e-27
    closed = 2 / 589.7558147e-9 * np.sqrt(2 * np.log(2) * 1.380649e-23 * T / mass)
    assert doppler_fwhm(SODIUM_D1, T) == pytest.approx(closed, rel=1e-8)
    assert doppler_fwhm(SODIUM_D1, T) == pytest.approx(1.467e9, rel=1e-3)

    detunings = 2 * np.pi * np.linspace(-3e9, 3e9, 6001)
    profile = np.array([doppler_average(_lorentzian(d), SODIUM_D1, T).imag for d in detunings])
    above = detunings[profile >= 0.5 * profile.max()]
    measured = (above[-1] - above[0]) / (2 * np.pi)
    # Voigt width: the 10 MHz natural line adds a few MHz to the Gaussian width
    assert measured == pytest.approx(closed, rel=1e-2)
    assert measured > closed


def test_eit_average_matches_closed_form():
    medium = calibrated_sodium(residual_k=0.0)
    deltas = detuning_grid(2 * np.pi * 5e6, 101)
    ku = K_WAVE * thermal_speed(SODIUM_D1, T)
    g_eff = G13 + medium.pump_rabi**2 / (4 * (medium.effective_gamma12 - 1j * deltas))
    expected = 1j * chi_prefactor(medium.number_density) * np.sqrt(np.pi) / ku * wofz(1j * g_eff / ku)
    np.testing.assert_allclose(doppler_chi(medium, deltas), expected, rtol=1e-10)


def test_plain_real_axis_rule_fails_for_narrow_features():
    # motivation for the shifted contour: 64 real nodes cannot resolve a 10 MHz line in a GHz profile
    x, w = velocity_quadrature(SODIUM_D1, T, 64, shift=0.0)
    plain = np.sum(w * _lorentzian(0.0)(x))
    shifted = doppler_average(_lorentzian(0.0), SODIUM_D1, T)
    assert abs(plain - shifted) / abs(shifted) > 0.1


def test_node_convergence_for_presets():
    deltas = detuning_grid()
    for medium in (calibrated_sodium(), calibrated_sodium(pump_rabi=4 * calibrated_sodium().pump_rabi)):
        coarse = doppler_chi(medium, deltas)
        fine = doppler_chi(medium.replace(quadrature_nodes=128), deltas)
        assert np.max(np.abs(coarse - fine) / np.abs(fine)) < 1e-8


def test_residual_two_photon_doppler_shift_bound():
    shift_hz = residual_wavenumber(SODIUM_D1) * thermal_speed(SODIUM_D1, T) / (2 * np.pi)
    assert shift_hz < 10e3


def test_average_preserves_passivity():
    medium = calibrated_sodium()
    for big in np.linspace(-2e9, 2e9, 9):
        chi = doppler_chi(medium, detuning_grid(points=801), one_photon=big)
        assert chi.imag.min() >= -1e-15


def test_nonfinite_node_reported():
    with pytest.raises(NumericError) as info:
        doppler_average(lambda v: np.where(np.abs(v.real) < 1e-9 + np.abs(v.real).min(), np.nan, 1.0),
                        SODIUM_D1, T)
    assert info.value.node is not None
