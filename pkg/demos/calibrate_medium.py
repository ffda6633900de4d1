"""
Recovering the cell parameters from three observables
=====================================================

Density, ground decoherence and pump Rabi frequency are fitted so that the
model reproduces a 23 % transmission peak, a 1 MHz window and n_g = 607.
The fitted medium then predicts the dispersion slope independently.
"""

import numpy as np

from slowlight import CalibrationTargets, calibrate, dispersion_slope, medium_response

result = calibrate(CalibrationTargets(0.23, 2 * np.pi * 1e6, 607.0), seed=0)
m, obs = result.medium, result.observables
print(f"density            {m.number_density:.4e} m^-3")
print(f"gamma12            {m.effective_gamma12 / (2 * np.pi) / 1e3:.1f} kHz x 2 pi")
print(f"pump Rabi          {m.pump_rabi / (2 * np.pi) / 1e6:.2f} MHz x 2 pi")
print(f"reproduced         T = {obs.peak_transmission:.4f}, FWHM = {obs.eit_fwhm / (2 * np.pi) / 1e6:.3f} MHz, "
      f"n_g = {obs.group_index:.1f}")
print(f"predicted dn/dw    {dispersion_slope(medium_response(m)).value:.4e} s/rad")
