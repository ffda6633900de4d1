"""
EIT window versus pump intensity
================================

Transmission and lock-in derivative signal of the 10 cm sodium cell for
pump intensities I0, 2 I0 and 4 I0.  The window power-broadens and the
lock-in slope at line centre flattens.
"""

import numpy as np

from slowlight import calibrated_sodium, eit_fwhm, lock_in_signal, medium_response, transmission_spectrum
from slowlight.lockin import medium_transmission_fn

from _plot import save

MHZ = 2 * np.pi * 1e6
base = calibrated_sodium()
detunings = np.linspace(-3 * MHZ, 3 * MHZ, 201)

curves, traces = [], []
for scale in (1, 2, 4):
    # Rabi frequency scales with the square root of intensity
    medium = base.replace(pump_rabi=base.pump_rabi * np.sqrt(scale))
    trans = transmission_spectrum(medium_response(medium))
    width = eit_fwhm(trans)
    trace = lock_in_signal(medium_transmission_fn(medium), 2 * np.pi * 50e3, 2 * np.pi * 1e3, detunings,
                           fwhm=width)
    print(f"x{scale}: peak T = {trans.values.max():.3f}, FWHM = {width / MHZ:.3f} MHz, "
          f"lock-in slope = {trace.central_slope():.3e}, series vs simulation RMS = {trace.rms_discrepancy:.1e}")
    curves.append((f"x{scale}", trans.values))
    traces.append((f"x{scale}", trace.signal))

save("eit_transmission", trans.detunings / MHZ, curves, "two-photon detuning (MHz)", "transmission")
save("eit_lockin", detunings / MHZ, traces, "two-photon detuning (MHz)", "lock-in signal")
