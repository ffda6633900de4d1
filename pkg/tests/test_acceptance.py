"""Acceptance gate: one test per criterion, each reporting a PASS/FAIL line."""

import dataclasses
import time

import numpy as np
import pytest
from scipy import constants as sc

from conftest import ACCEPTANCE_LINES
from slowlight.atomic import SODIUM_D1, LambdaConfig, chi_from_state, steady_state, weak_probe_chi
from slowlight.calibration import calibrate, carrier_for_group_index
from slowlight.config import PRESETS, load_scenario
from slowlight.doppler import doppler_average, thermal_speed
from slowlight.fwm import FwmConfig, pc_reflectivity_spectrum, reflectivity_fwhm
from slowlight.interferometers import (GyroScenario, HomodyneConfig, fringe_scan_bias, homodyne_trace,
                                       index_variation_from_trace, pc_bias, sagnac_phase)
from slowlight.lockin import lock_in_signal, medium_transmission_fn
from slowlight.medium import calibrated_sodium
from slowlight.pulses import (gaussian_pulse, measure_delay, propagate, spectral_energy,
                              spreading_metrics)
from slowlight.spectra import (detuning_grid, dispersion_slope, eit_fwhm, group_index, kramers_kronig_real,
                               medium_response, second_order_dispersion, transmission_spectrum,
                               two_level_asymptote)

MHZ = 2 * np.pi * 1e6
OMEGA0 = carrier_for_group_index()
PULSE_GRID = detuning_grid(2 * np.pi * 20e6, 8001)


def report(label, checks):
    """Record one PASS/FAIL line; ``checks`` maps a description to (ok, detail)."""
    ok = all(passed for passed, _ in checks.values())
    details = "; ".join(f"{name} {detail}{'' if passed else ' [miss]'}"
                        for name, (passed, detail) in checks.items())
    line = f"{'PASS' if ok else 'FAIL'}  {label}: {details}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def within(value, target, rel):
    return abs(value - target) <= rel * abs(target)


@pytest.fixture(scope="module")
def calibrated():
    return medium_response(calibrated_sodium())


def test_criterion_1_consistency_chain():
    start = time.perf_counter()
    result = calibrate(seed=0)
    medium = result.medium
    obs = result.observables
    resp = medium_response(medium, PULSE_GRID)
    n_g = group_index(resp, OMEGA0)
    group_delay = (n_g - 1) * medium.cell.length / sc.c
    ref = gaussian_pulse(400e-9)
    delay = measure_delay(propagate(ref, resp), ref).centroid
    elapsed = time.perf_counter() - start

    # informational: the narrowband limit of the same chain
    wide = gaussian_pulse(1600e-9, window=20e-6)
    narrow_delay = measure_delay(propagate(wide, resp), wide).centroid
    ACCEPTANCE_LINES.append(f"INFO  criterion 1 narrowband variant: 1.6 us pulse delay {narrow_delay * 1e9:.1f} ns "
                            f"vs (n_g-1)L/c {group_delay * 1e9:.1f} ns")

    report("1 consistency chain", {
        "T": (abs(obs.peak_transmission - 0.23) <= 0.01, f"{obs.peak_transmission:.4f}"),
        "FWHM": (abs(obs.eit_fwhm / MHZ - 1.0) <= 0.3, f"{obs.eit_fwhm / MHZ:.3f} MHz"),
        "n_g": (within(obs.group_index, 607, 0.10), f"{obs.group_index:.1f}"),
        "delay vs 202 ns": (within(delay, 202e-9, 0.05), f"{delay * 1e9:.1f} ns"),
        "delay vs (n_g-1)L/c": (within(delay, group_delay, 0.05), f"{group_delay * 1e9:.1f} ns"),
        "runtime": (elapsed < 30, f"{elapsed:.1f} s"),
    })


def test_criterion_2_dispersion_slope(calibrated):
    slope = dispersion_slope(calibrated).value
    report("2 dispersion slope", {"dn/dw": (within(slope, 1.89e-13, 0.10), f"{slope:.4g} s/rad")})


def test_criterion_3_second_order_dispersion(calibrated):
    value = second_order_dispersion(calibrated, 2 * np.pi * 0.5e6)
    ok = 2.24e-16 <= abs(value) <= 2.24e-14
    report("3 second-order dispersion", {"d2n/dw2": (ok, f"{value:.3g} s^2/rad^2 vs 2.24e-15")})


def test_criterion_4_pump_sweep_trend():
    scenario = load_scenario("fig3_eit_sweep")
    spec = scenario.lockin
    widths, slopes, rms = [], [], []
    for member in scenario.expand():
        medium = member.medium
        fwhm = eit_fwhm(transmission_spectrum(medium_response(medium, member.grid)))
        trace = lock_in_signal(medium_transmission_fn(medium), spec.dither_amplitude, spec.dither_rate,
                               spec.detunings, fwhm=fwhm)
        widths.append(fwhm)
        slopes.append(trace.central_slope())
        rms.append(trace.rms_discrepancy)
    steps = np.diff(slopes)
    report("4 pump sweep", {
        "FWHM increasing": (bool(np.all(np.diff(widths) > 0)),
                            "/".join(f"{w / MHZ:.2f}" for w in widths) + " MHz"),
        "lock-in slope monotone": (bool(np.all(steps > 0) or np.all(steps < 0)),
                                   "/".join(f"{s:.3g}" for s in slopes)),
        "lock-in RMS": (max(rms) <= 0.02, f"max {max(rms):.2g}"),
    })


def test_criterion_5_detuned_pulse():
    resp = medium_response(calibrated_sodium(), PULSE_GRID)
    runs = {}
    for label, detune in (("centre", 0.0), ("detuned", 0.7 * MHZ)):
        ref = gaussian_pulse(400e-9, carrier_detuning=detune)
        out = propagate(ref, resp)
        runs[label] = (measure_delay(out, ref).centroid, spreading_metrics(out, ref))
    (d0, m0), (d1, m1) = runs["centre"], runs["detuned"]
    report("5 detuned pulse", {
        "|skew|": (abs(m1.skewness) > 0.1, f"{m1.skewness:.3f}"),
        "energy": (m1.energy_transmission < m0.energy_transmission,
                   f"{m1.energy_transmission:.3f} < {m0.energy_transmission:.3f}"),
        "delay": (d1 < d0, f"{d1 * 1e9:.1f} < {d0 * 1e9:.1f} ns"),
    })


def test_criterion_6_phase_conjugate_spectrum(calibrated):
    spectrum = pc_reflectivity_spectrum(FwmConfig())
    peak = spectrum.values.max()
    width = reflectivity_fwhm(spectrum)
    eit = eit_fwhm(transmission_spectrum(calibrated))
    report("6 PC spectrum", {
        "peak": (peak == 0.017, f"{float(peak)!r}"),
        "FWHM": (within(width, eit, 0.20), f"{width / MHZ:.3f} vs EIT {eit / MHZ:.3f} MHz"),
    })


def test_criterion_7_gyro():
    ratio = sagnac_phase(GyroScenario(group_index=607.0)) / sagnac_phase(GyroScenario(group_index=1.0))
    theta = np.pi / 2
    radii = np.linspace(1e-4, 1e-2, 9)
    fitted = [pc_bias(GyroScenario(pc_amplitude_reflectivity=r, parasitic_phase=theta)).phase_bias
              for r in radii]
    brute = [fringe_scan_bias(GyroScenario(pc_amplitude_reflectivity=r, parasitic_phase=theta))
             for r in radii]
    slope_fit = np.polyfit(radii, fitted, 1)[0]
    slope_brute = np.polyfit(radii, brute, 1)[0]
    zero = pc_bias(GyroScenario(group_index=607.0, parasitic_phase=theta)).phase_bias
    report("7 gyro", {
        # exact up to floating-point rounding of the two products
        "enhancement": (abs(ratio - 607.0) <= 4 * np.finfo(float).eps * 607.0, f"{ratio!r}"),
        "bias at r=0": (zero == 0.0, f"{zero}"),
        "small-r slope": (within(slope_fit, slope_brute, 0.05), f"fit {slope_fit:.5f} vs scan {slope_brute:.5f}"),
    })


def _kk_rms_worst():
    worst = 0.0
    for name in PRESETS:
        for member in load_scenario(name).expand():
            medium = member.medium
            if medium.number_density == 0:
                continue
            resp = medium_response(medium, member.grid)
            width = eit_fwhm(transmission_spectrum(resp))
            asym = two_level_asymptote(medium)
            recon = kramers_kronig_real(resp.chi, asym)
            ref = (resp.chi.values - asym).real
            window = np.abs(resp.detunings) <= 5 * width
            worst = max(worst, np.sqrt(np.mean((recon[window] - ref[window]) ** 2) / np.mean(ref[window] ** 2)))
    return worst


def _weak_probe_worst():
    rng = np.random.default_rng(7)
    worst = 0.0
    for _ in range(50):
        pump = 10 ** rng.uniform(6, 9)
        cfg = LambdaConfig(pump_rabi=pump, probe_rabi=1e-3 * pump,
                           one_photon_detuning=rng.uniform(-2, 2) * SODIUM_D1.natural_linewidth,
                           two_photon_detuning=rng.uniform(-1, 1) * 10 ** rng.uniform(5, 8),
                           gamma12=10 ** rng.uniform(3, 7))
        weak = weak_probe_chi(cfg, 1e16)
        worst = max(worst, abs(chi_from_state(steady_state(cfg), cfg, 1e16) - weak) / abs(weak))
    return worst


def _quadrature_worst():
    temp = 373.15
    u = thermal_speed(SODIUM_D1, temp)
    v = np.linspace(-6 * u, 6 * u, 100001)
    weight = np.exp(-(v / u) ** 2) / (np.sqrt(np.pi) * u)
    worst = 0.0
    for big in (0.0, 2e8, 1e9):
        line = lambda vel: 1j / (SODIUM_D1.natural_linewidth / 2 - 1j * (big - SODIUM_D1.wavenumber * vel))
        ref = np.trapezoid(weight * line(v), v)
        worst = max(worst, abs(doppler_average(line, SODIUM_D1, temp) - ref) / abs(ref))
    return worst


def _state_worst():
    rng = np.random.default_rng(11)
    worst = 0.0
    for _ in range(200):
        cfg = LambdaConfig(pump_rabi=10 ** rng.uniform(5, 9), probe_rabi=10 ** rng.uniform(5, 9),
                           one_photon_detuning=rng.uniform(-1e9, 1e9), two_photon_detuning=rng.uniform(-1e7, 1e7),
                           gamma12=10 ** rng.uniform(2, 7))
        rho = steady_state(cfg).matrix
        worst = max(worst, abs(np.trace(rho) - 1), np.max(np.abs(rho - rho.conj().T)))
    return worst


def test_criterion_8_property_suites(calibrated):
    kk = _kk_rms_worst()
    weak = _weak_probe_worst()
    quad = _quadrature_worst()

    parseval = 0.0
    energy_ok = True
    resp = medium_response(calibrated_sodium(), PULSE_GRID)
    for fwhm, detune in ((200e-9, 0.0), (400e-9, 0.0), (400e-9, 0.7 * MHZ), (1600e-9, -MHZ)):
        ref = gaussian_pulse(fwhm, window=max(10e-6, 12 * fwhm), carrier_detuning=detune)
        out = propagate(ref, resp)
        parseval = max(parseval, abs(spectral_energy(out) - out.energy) / out.energy)
        energy_ok &= out.energy <= ref.energy * (1 + 1e-12)
    t_max = max(transmission_spectrum(medium_response(m.medium, m.grid)).values.max()
                for name in PRESETS for m in load_scenario(name).expand())

    cfg = HomodyneConfig()
    recovered = index_variation_from_trace(homodyne_trace(calibrated, cfg), cfg)
    truth = calibrated.index_minus_one.values.real[recovered.valid]
    err = np.abs(recovered.values[recovered.valid] - truth)
    homodyne_ok = bool(np.all(err <= 0.01 * np.abs(truth) + 1e-12 * np.abs(truth).max()))

    state = _state_worst()
    report("8 property suites", {
        "Kramers-Kronig": (kk <= 0.02, f"{kk:.2g}"),
        "weak probe": (weak <= 1e-3, f"{weak:.2g}"),
        "Gauss-Hermite": (quad <= 1e-6, f"{quad:.2g}"),
        "Parseval": (parseval <= 1e-10, f"{parseval:.2g}"),
        "passivity": (t_max <= 1 + 1e-12 and energy_ok, f"T max {t_max:.12g}"),
        "homodyne": (homodyne_ok, f"max err {err.max():.2g}"),
        "trace/Hermitian": (state <= 1e-12, f"{state:.2g}"),
    })
