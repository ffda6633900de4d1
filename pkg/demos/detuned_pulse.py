"""
Asymmetric spreading off two-photon resonance
=============================================

Moving the probe carrier 0.7 MHz above two-photon resonance puts the pulse
spectrum on the shoulder of the window, where absorption and dispersion are
lopsided.  The pulse comes out weaker, earlier and skewed.
"""

import numpy as np

from slowlight import (calibrated_sodium, detuning_grid, gaussian_pulse, measure_delay, medium_response,
                       propagate, spreading_metrics)

from _plot import save

MHZ = 2 * np.pi * 1e6
resp = medium_response(calibrated_sodium(), detuning_grid(2 * np.pi * 20e6, 8001))

series = []
for detune in (0.0, 0.7 * MHZ):
    ref = gaussian_pulse(400e-9, carrier_detuning=detune)
    out = propagate(ref, resp)
    m = spreading_metrics(out, ref)
    print(f"carrier {detune / MHZ:+.1f} MHz: delay {measure_delay(out, ref).centroid * 1e9:6.1f} ns, "
          f"skewness {m.skewness:+.3f}, width x{m.fwhm_ratio:.3f}, energy {m.energy_transmission:.3f}")
    series.append((f"{detune / MHZ:+.1f} MHz", out.intensity / ref.intensity.max()))

save("detuned_pulse", ref.times * 1e6, series, "time (us)", "intensity")
