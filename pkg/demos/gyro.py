"""
Slow-light Sagnac gyroscope and phase-conjugate backscatter
===========================================================

The rotational fringe shift grows with the group index of the loop medium.
A phase-conjugate return of power reflectivity 0.017 adds a coherent
parasitic field whose phase-dependent bias is compared with that gain.
"""

import numpy as np

from slowlight import GyroScenario, bias_versus_theta, sagnac_phase

from _plot import save

vacuum = GyroScenario(loop_area=0.01, rotation_rate=1e-3)
slow = GyroScenario(loop_area=0.01, rotation_rate=1e-3, group_index=607.0,
                    pc_amplitude_reflectivity=np.sqrt(0.017))
print(f"Sagnac phase, empty loop    {sagnac_phase(vacuum):.4e} rad")
print(f"Sagnac phase, n_g = 607     {sagnac_phase(slow):.4e} rad")

thetas = np.linspace(-np.pi, np.pi, 181)
bias = bias_versus_theta(slow, thetas)
worst = np.max(np.abs(bias))
print(f"worst backscatter bias      {worst:.4f} rad = {worst / slow.scale_factor:.3e} rad/s of rotation")

save("gyro_bias", thetas, [("bias", bias)], "parasitic phase (rad)", "phase bias (rad)")
