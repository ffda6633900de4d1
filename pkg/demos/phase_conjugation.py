"""
Phase-conjugate reflectivity spectrum
=====================================

The backward pump and probe write a ground-state coherence grating and the
forward pump reads it out.  The line shape follows |rho12|^2 and the peak is
pinned to the measured reflectivity.
"""

import numpy as np

from slowlight import (FwmConfig, calibrated_sodium, eit_fwhm, medium_response, pc_reflectivity_spectrum,
                       reflectivity_fwhm, transmission_spectrum)

from _plot import save

MHZ = 2 * np.pi * 1e6
spectrum = pc_reflectivity_spectrum(FwmConfig())
eit = eit_fwhm(transmission_spectrum(medium_response(calibrated_sodium())))
print(f"peak reflectivity {spectrum.values.max():.4f}")
print(f"PC FWHM {reflectivity_fwhm(spectrum) / MHZ:.3f} MHz, EIT FWHM {eit / MHZ:.3f} MHz")

for scale in (1, 2, 4):
    cfg = FwmConfig(backward_pump_rabi=FwmConfig().backward_pump_rabi * np.sqrt(scale))
    print(f"backward pump x{scale}: PC FWHM {reflectivity_fwhm(pc_reflectivity_spectrum(cfg)) / MHZ:.3f} MHz")

save("phase_conjugation", spectrum.detunings / MHZ, [("R", spectrum.values)],
     "two-photon detuning (MHz)", "PC reflectivity")
