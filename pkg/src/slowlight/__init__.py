"""Slow-light physics in a sodium vapor Lambda system.

Weak-probe EIT susceptibility, Doppler averaging, spectra and dispersion,
pulse delay, homodyne and Sagnac interferometry, and the phase-conjugate
reflectivity of the ground-coherence grating.
"""

from .atomic import (SODIUM_D1, AtomicSpecies, DensityMatrixState, LambdaConfig, rabi_from_intensity,
                     steady_state, weak_probe_chi)
from .calibration import CalibrationTargets, calibrate
from .config import Scenario, dump_scenario, load_scenario, parse_scenario
from .doppler import CellConfig, doppler_average, transit_gamma, vapor_number_density
from .errors import *  # noqa: F401,F403
from .fwm import FwmConfig, grating_amplitude, pc_reflectivity_spectrum, reflectivity_fwhm
from .interferometers import (GyroScenario, HomodyneConfig, bias_versus_theta, homodyne_trace,
                              index_variation_from_trace, pc_bias, sagnac_phase)
from .lockin import lock_in_signal
from .medium import MediumConfig, calibrated_sodium
from .pulses import Pulse, gaussian_pulse, measure_delay, propagate, spreading_metrics
from .runner import run
from .spectra import (ComplexSpectrum, MediumResponse, Spectrum, detuning_grid, dispersion_slope, eit_fwhm,
                      group_index, kramers_kronig_real, medium_response, second_order_dispersion,
                      transmission_spectrum)

__version__ = "0.1.0"
