"""
Slow-light pulse delay
======================

Gaussian probe pulses are sent through the cell and compared with a copy
that travels the same distance in vacuum.  Short pulses are partly filtered
by the 1 MHz window; longer ones approach the group delay (n_g - 1) L / c.
"""

import numpy as np
from scipy import constants as sc

from slowlight import (calibrated_sodium, detuning_grid, gaussian_pulse, group_index, measure_delay,
                       medium_response, propagate, spreading_metrics)

from _plot import save

resp = medium_response(calibrated_sodium(), detuning_grid(2 * np.pi * 20e6, 8001))
group_delay = (group_index(resp) - 1) * resp.length / sc.c
print(f"group delay (n_g - 1) L / c = {group_delay * 1e9:.1f} ns")

for fwhm in (400e-9, 800e-9, 1600e-9, 3200e-9):
    ref = gaussian_pulse(fwhm, window=max(10e-6, 12 * fwhm))
    out = propagate(ref, resp)
    delay = measure_delay(out, ref)
    m = spreading_metrics(out, ref)
    print(f"{fwhm * 1e9:5.0f} ns pulse: delay {delay.centroid * 1e9:6.1f} ns "
          f"(cross-correlation {delay.cross_correlation * 1e9:6.1f} ns), width x{m.fwhm_ratio:.3f}, "
          f"energy {m.energy_transmission:.3f}")
    if fwhm == 400e-9:
        save("slow_light", ref.times * 1e6, [("reference", ref.intensity), ("through cell", out.intensity)],
             "time (us)", "intensity")
