import numpy as np
import pytest
from scipy import constants as sc

from slowlight.errors import (AlignmentError, BoundaryLeakError, CoverageError, DegeneratePulseError,
                              DomainError)
from slowlight.medium import calibrated_sodium
from slowlight.pulses import (Pulse, centroid, gaussian_pulse, measure_delay, profile_fwhm, propagate,
                              spectral_energy, spectral_fwhm, spreading_metrics)
from slowlight.spectra import (detuning_grid, group_index, medium_response, response_from_index,
                               vacuum_response)

MHZ = 2 * np.pi * 1e6
OMEGA0 = 2 * np.pi * sc.c / 589.6e-9
GRID = detuning_grid(2 * np.pi * 20e6, 8001)


@pytest.fixture(scope="module")
def resp():
    return medium_response(calibrated_sodium(), GRID)


@pytest.fixture(scope="module")
def on_resonance(resp):
    ref = gaussian_pulse(400e-9)
    return ref, propagate(ref, resp)


# --- gaussian_pulse -----------------------------------------------------------

def test_requested_width():
    pulse = gaussian_pulse(400e-9, 10e-6, 2**14)
    assert profile_fwhm(pulse.times, pulse.intensity) == pytest.approx(400e-9, abs=2e-9)


@pytest.mark.parametrize("fwhm", [150e-9, 400e-9, 900e-9])
def test_centroid_at_window_centre(fwhm):
    pulse = gaussian_pulse(fwhm)
    centre = pulse.times[pulse.times.size // 2]
    assert abs(centroid(pulse) - centre) <= pulse.dt


def test_transform_limited_time_bandwidth_product():
    pulse = gaussian_pulse(400e-9)
    product = spectral_fwhm(pulse) * profile_fwhm(pulse.times, pulse.intensity)
    assert product == pytest.approx(2 * np.log(2) / np.pi, rel=1e-2)


def test_pulse_constructor_errors():
    with pytest.raises(DomainError):
        gaussian_pulse(400e-9, samples=3000)
    with pytest.raises(DomainError):
        gaussian_pulse(400e-9, samples=2048)
    with pytest.raises(BoundaryLeakError):
        gaussian_pulse(400e-9, window=3e-6)


def test_parseval():
    pulse = gaussian_pulse(400e-9, carrier_detuning=0.3 * MHZ)
    assert spectral_energy(pulse) == pytest.approx(pulse.energy, rel=1e-10)


# --- propagate ----------------------------------------------------------------

def test_vacuum_is_identity():
    pulse = gaussian_pulse(400e-9)
    out = propagate(pulse, vacuum_response(GRID))
    assert np.max(np.abs(out.envelope - pulse.envelope)) <= 1e-12


def test_linear_index_gives_exact_group_delay():
    slope = 1.9e-13
    synthetic = response_from_index(GRID, slope * GRID, OMEGA0)
    pulse = gaussian_pulse(400e-9)
    delay = measure_delay(propagate(pulse, synthetic), pulse)
    # phase (omega0 + nu) s nu L / c: linear term shifts, the quadratic chirp leaves the centroid alone
    expected = OMEGA0 * slope * synthetic.length / sc.c
    assert delay.centroid == pytest.approx(expected, rel=1e-6)


def test_output_energy_never_exceeds_input(resp):
    for fwhm, detune in ((200e-9, 0.0), (400e-9, 0.0), (400e-9, 0.7 * MHZ), (800e-9, -1.5 * MHZ)):
        pulse = gaussian_pulse(fwhm, carrier_detuning=detune)
        assert propagate(pulse, resp).energy <= pulse.energy * (1 + 1e-12)


def test_coverage_error_names_offset():
    narrow = medium_response(calibrated_sodium(), detuning_grid(2 * np.pi * 0.5e6, 1001))
    with pytest.raises(CoverageError) as info:
        propagate(gaussian_pulse(400e-9), narrow)
    assert abs(info.value.offset) > 2 * np.pi * 0.5e6


# --- measure_delay ------------------------------------------------------------

def test_self_delay_is_zero():
    pulse = gaussian_pulse(400e-9)
    delay = measure_delay(pulse, pulse)
    assert abs(delay.centroid) <= 1e-15 and abs(delay.cross_correlation) <= 1e-15


def test_constructed_shift_of_seventeen_samples():
    pulse = gaussian_pulse(400e-9)
    shifted = pulse.with_envelope(np.roll(pulse.envelope, 17))
    delay = measure_delay(shifted, pulse)
    assert delay.centroid == pytest.approx(17 * pulse.dt, rel=1e-12)
    assert delay.cross_correlation == pytest.approx(17 * pulse.dt, rel=1e-12)


def test_alignment_error():
    with pytest.raises(AlignmentError):
        measure_delay(gaussian_pulse(400e-9), gaussian_pulse(400e-9, window=20e-6))


def test_zero_pulse_is_degenerate():
    pulse = gaussian_pulse(400e-9)
    with pytest.raises(DegeneratePulseError):
        spreading_metrics(pulse.with_envelope(np.zeros(pulse.times.size)), pulse)


def test_narrowband_delay_converges_to_group_delay(resp):
    group = (group_index(resp, OMEGA0) - 1) * resp.length / sc.c
    delays = []
    for fwhm in (400e-9, 800e-9, 1600e-9, 3200e-9):
        ref = gaussian_pulse(fwhm, window=max(10e-6, 12 * fwhm))
        delays.append(measure_delay(propagate(ref, resp), ref).centroid)
    assert np.all(np.diff(delays) > 0)
    assert np.all(np.array(delays) < group * 1.001)
    assert delays[2] == pytest.approx(group, rel=0.05)
    assert delays[2] == pytest.approx(202e-9, rel=0.05)


def test_delay_converged_in_sample_count(resp):
    delays = []
    for samples in (2**14, 2**16):
        ref = gaussian_pulse(400e-9, samples=samples)
        delays.append(measure_delay(propagate(ref, resp), ref).centroid)
    assert delays[1] == pytest.approx(delays[0], rel=5e-3)


@pytest.mark.xfail(strict=True, reason="a 400 ns pulse is wider in frequency than the 1 MHz window")
def test_400ns_delay_matches_reported_value(resp, on_resonance):
    ref, out = on_resonance
    delay = measure_delay(out, ref)
    assert delay.centroid == pytest.approx(202e-9, rel=0.05)
    assert delay.centroid == pytest.approx((group_index(resp, OMEGA0) - 1) * resp.length / sc.c, rel=0.05)


@pytest.mark.xfail(strict=True, reason="the EIT window filters a 400 ns pulse and broadens it by ~20 %")
def test_400ns_pulse_is_undistorted(on_resonance):
    ref, out = on_resonance
    assert abs(spreading_metrics(out, ref).fwhm_ratio - 1) < 0.05


def test_narrowband_metrics_agree():
    resp = medium_response(calibrated_sodium(), GRID)
    ref = gaussian_pulse(3200e-9, window=40e-6, samples=2**15)
    out = propagate(ref, resp)
    assert abs(spreading_metrics(out, ref).fwhm_ratio - 1) < 0.01
    assert measure_delay(out, ref).agreement <= 0.02


# --- spreading ----------------------------------------------------------------

def test_identical_pulses_have_unit_metrics():
    pulse = gaussian_pulse(400e-9)
    m = spreading_metrics(pulse, pulse)
    assert m.fwhm_ratio == 1 and abs(m.skewness) < 1e-12 and m.energy_transmission == 1


def test_detuned_carrier_spreads_asymmetrically(resp, on_resonance):
    ref0, out0 = on_resonance
    ref = gaussian_pulse(400e-9, carrier_detuning=0.7 * MHZ)
    out = propagate(ref, resp)
    detuned, centred = spreading_metrics(out, ref), spreading_metrics(out0, ref0)
    assert abs(detuned.skewness) > 0.1
    assert detuned.energy_transmission < centred.energy_transmission
    assert measure_delay(out, ref).centroid < measure_delay(out0, ref0).centroid
