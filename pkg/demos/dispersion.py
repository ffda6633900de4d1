"""
Index variation from a homodyne Mach-Zehnder
============================================

The cell sits in one arm, the reference arm is held in quadrature, and the
photodiode signal is inverted back to Re n - 1.  The slope at line centre
sets the group index.
"""

import numpy as np

from slowlight import (HomodyneConfig, calibrated_sodium, dispersion_slope, group_index, homodyne_trace,
                       index_variation_from_trace, medium_response)

from _plot import save

MHZ = 2 * np.pi * 1e6
resp = medium_response(calibrated_sodium())
cfg = HomodyneConfig(reference_phase=np.pi / 2)
trace = homodyne_trace(resp, cfg)
recovered = index_variation_from_trace(trace, cfg, exact=True)

slope = dispersion_slope(resp).value
print(f"dn/dw at line centre  {slope:.4e} s/rad")
print(f"group index           {group_index(resp):.1f}")
print(f"largest phase shift   {trace.max_phase:.3f} rad (small-phase regime: {trace.small_phase})")
window = np.abs(resp.detunings) <= 0.5 * MHZ
print(f"Re n swing over 1 MHz {np.ptp(resp.index_minus_one.values.real[window]):.3e}")

save("dispersion", resp.detunings / MHZ,
     [("model", resp.index_minus_one.values.real), ("homodyne", recovered.values)],
     "two-photon detuning (MHz)", "Re n - 1")
