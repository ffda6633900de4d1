"""Sodium D1 constants and the single-velocity-class Lambda-system response.

Level labels follow the usual Lambda scheme::

    |3>  (3P1/2, excited)
     / \\
  pump  probe
   /     \\
 |1>     |2>   (3S1/2 F=1 and F=2)

The pump couples ``|1> <-> |3>`` and the probe couples ``|2> <-> |3>``.
``one_photon_detuning`` (Delta) is the probe detuning from ``|2> <-> |3>`` and
``two_photon_detuning`` (delta) is the Raman detuning, so the pump detuning is
``Delta - delta``.  Spectra are swept in delta at fixed Delta.  With the field
convention ``E(t) = Re[E exp(-i w t)]`` a positive ``Im chi`` is absorption and
``Re chi`` falls through an isolated line (``Re chi < 0`` above resonance).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import constants as sc

from .errors import DegenerateModelError, DomainError, NumericError, WeakProbeError

#: Weak-probe regime: probe/pump intensity ratio must not exceed this.
WEAK_PROBE_INTENSITY_RATIO = 0.1

POPULATION_TOLERANCE = 1e-12


@dataclass(frozen=True)
class AtomicSpecies:
    """Immutable constants of an alkali D1 line.

    ``vapor_pressure_coeffs`` holds ``((A_solid, B_solid), (A_liquid, B_liquid))``
    for ``log10(P / torr) = A - B / T``; ``melting_point`` separates the branches
    and ``vapor_pressure_range`` is the validity interval of the correlation.
    """

    name: str
    mass: float
    d1_wavelength: float
    natural_linewidth: float
    dipole_moment: float
    ground_splitting: float
    vapor_pressure_coeffs: tuple = ((8.179, 5603.0), (7.585, 5377.0))
    melting_point: float = 370.944
    vapor_pressure_range: tuple = (298.0, 700.0)

    def __post_init__(self):
        for name in ("mass", "d1_wavelength", "natural_linewidth", "dipole_moment",
                     "ground_splitting", "melting_point"):
            value = getattr(self, name)
            if not (np.isfinite(value) and value > 0):
                raise DomainError(f"{name} must be strictly positive, got {value!r}")
        for a, b in self.vapor_pressure_coeffs:
            if not (a > 0 and b > 0):
                raise DomainError("vapor_pressure_coeffs must be positive")

    @property
    def wavenumber(self) -> float:
        return 2 * np.pi / self.d1_wavelength

    @property
    def angular_frequency(self) -> float:
        return 2 * np.pi * sc.c / self.d1_wavelength


# D. A. Steck, "Sodium D Line Data" (rev. 2.2.1): vacuum D1 wavelength,
# 3P1/2 lifetime 16.299 ns, reduced matrix element <J=1/2||er||J'=1/2> =
# 3.5246 e a0, ground hyperfine splitting 1.771 626 128 8 GHz.  The vapor
# pressure correlation is the Nesmeyanov fit quoted in the same report.
SODIUM_D1 = AtomicSpecies(
    name="Na",
    mass=22.98976928 * sc.atomic_mass,
    d1_wavelength=589.7558147e-9,
    natural_linewidth=61.354e6,
    dipole_moment=3.5246 * sc.physical_constants["atomic unit of electric dipole mom."][0],
    ground_splitting=2 * np.pi * 1.7716261288e9,
)


@dataclass(frozen=True)
class LambdaConfig:
    """Drive and relaxation parameters of one velocity class (all in rad/s).

    ``gamma12`` damps the ground coherence only.  ``ground_relaxation`` replaces
    atoms at that rate with fresh ones in the branching mixture of ground
    states (a transit-style reset); it defaults to zero, which keeps the
    strongly pumped state pure.
    """

    pump_rabi: float = 0.0
    probe_rabi: float = 0.0
    one_photon_detuning: float = 0.0
    two_photon_detuning: float = 0.0
    gamma12: float = 0.0
    excited_decay: float = SODIUM_D1.natural_linewidth
    branching_1: float = 0.5
    branching_2: float = 0.5
    gamma_extra: float = 0.0
    ground_relaxation: float = 0.0

    def __post_init__(self):
        if abs(self.branching_1 + self.branching_2 - 1.0) > 1e-12:
            raise DomainError("branching_1 + branching_2 must equal 1")
        if min(self.branching_1, self.branching_2) < 0:
            raise DomainError("branching ratios must be non-negative")
        for name in ("pump_rabi", "probe_rabi", "gamma12", "excited_decay",
                     "gamma_extra", "ground_relaxation"):
            if getattr(self, name) < 0:
                raise DomainError(f"{name} must be >= 0")

    @property
    def gamma13(self) -> float:
        """Optical coherence damping: half the excited decay plus dephasing."""
        return 0.5 * self.excited_decay + self.gamma_extra

    @property
    def pump_detuning(self) -> float:
        return self.one_photon_detuning - self.two_photon_detuning


@dataclass(frozen=True)
class DensityMatrixState:
    """Steady-state 3x3 density matrix in the rotating frame."""

    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        rho = np.asarray(self.matrix, dtype=complex)
        if rho.shape != (3, 3):
            raise DomainError("density matrix must be 3x3")
        if abs(np.trace(rho) - 1) > 1e-12:
            raise NumericError(f"trace deviates from 1 by {abs(np.trace(rho) - 1):.3g}")
        if np.max(np.abs(rho - rho.conj().T)) > 1e-12:
            raise NumericError("density matrix is not Hermitian")
        pops = rho.diagonal().real
        if np.any(pops < -POPULATION_TOLERANCE) or np.any(pops > 1 + POPULATION_TOLERANCE):
            raise NumericError(f"populations outside [0, 1]: {pops}")
        object.__setattr__(self, "matrix", rho)

    def __getitem__(self, index):
        return self.matrix[index]

    @property
    def populations(self) -> np.ndarray:
        return self.matrix.diagonal().real.copy()

    @property
    def rho12(self) -> complex:
        """Ground-state coherence <1|rho|2>."""
        return complex(self.matrix[0, 1])

    @property
    def rho32(self) -> complex:
        """Probe coherence <3|rho|2>."""
        return complex(self.matrix[2, 1])


def rabi_from_intensity(intensity, dipole):
    """Rabi frequency (rad/s) of a plane wave of the given intensity (W/m^2)."""
    intensity = np.asarray(intensity, dtype=float)
    if np.any(intensity < 0):
        raise DomainError("intensity must be non-negative")
    field_amplitude = np.sqrt(2 * intensity / (sc.epsilon_0 * sc.c))
    omega = dipole * field_amplitude / sc.hbar
    return float(omega) if omega.ndim == 0 else omega


def hamiltonian(config: LambdaConfig) -> np.ndarray:
    """Rotating-frame Hamiltonian divided by hbar."""
    h = np.zeros((3, 3), dtype=complex)
    h[0, 0] = config.pump_detuning
    h[1, 1] = config.one_photon_detuning
    h[0, 2] = h[2, 0] = -0.5 * config.pump_rabi
    h[1, 2] = h[2, 1] = -0.5 * config.probe_rabi
    return h


def liouvillian(config: LambdaConfig) -> np.ndarray:
    """9x9 superoperator acting on the row-major vectorized density matrix."""
    eye = np.eye(3)
    h = hamiltonian(config)
    lv = -1j * (np.kron(h, eye) - np.kron(eye, h.T))

    gamma = config.excited_decay
    for ground, branch in ((0, config.branching_1), (1, config.branching_2)):
        jump = np.zeros((3, 3))
        jump[ground, 2] = np.sqrt(gamma * branch)
        jj = jump.T @ jump
        lv += np.kron(jump, jump.conj()) - 0.5 * np.kron(jj, eye) - 0.5 * np.kron(eye, jj.T)

    # phenomenological dephasing, not Lindblad: keeps each coherence's rate independent
    for i, j, rate in ((0, 1, config.gamma12), (0, 2, config.gamma_extra),
                       (1, 2, config.gamma_extra)):
        lv[3 * i + j, 3 * i + j] -= rate
        lv[3 * j + i, 3 * j + i] -= rate

    # transit-style exchange: every element decays at g, fresh atoms arrive in the branching mixture
    g = config.ground_relaxation
    if g:
        lv -= g * np.eye(9)
        for i, b in ((0, config.branching_1), (1, config.branching_2)):
            lv[4 * i, [0, 4, 8]] += g * b
    return lv


def _trace_replaced_solve(lv: np.ndarray, level: int) -> np.ndarray:
    system = lv / np.max(np.abs(lv))
    row = 4 * level
    system[row, :] = 0.0
    system[row, [0, 4, 8]] = 1.0
    rhs = np.zeros(9, dtype=complex)
    rhs[row] = 1.0
    if np.linalg.cond(system) > 1e13:
        raise DegenerateModelError(
            "Liouvillian has no unique steady state; add a drive or ground relaxation"
        )
    return np.linalg.solve(system, rhs)


def steady_state(config: LambdaConfig) -> DensityMatrixState:
    """Solve ``L(rho) = 0`` with ``Tr rho = 1`` replacing one population equation.

    The replaced equation is that of the most populated level, so small
    populations keep their own balance equation and come out with relative
    rather than absolute accuracy.
    """
    if config.excited_decay <= 0 and config.gamma12 <= 0:
        raise DegenerateModelError("all relaxation rates are zero")
    lv = liouvillian(config)
    vec = _trace_replaced_solve(lv, 0)
    top = int(np.argmax(vec[[0, 4, 8]].real))
    if top != 0:
        vec = _trace_replaced_solve(lv, top)
    residual = np.linalg.norm(lv @ vec)
    if residual > 1e-10 * np.linalg.norm(lv) * np.linalg.norm(vec):
        raise NumericError(f"steady-state residual {residual:.3g} too large")
    rho = vec.reshape(3, 3)
    rho = 0.5 * (rho + rho.conj().T)
    rho /= np.trace(rho).real
    return DensityMatrixState(rho)


def chi_prefactor(number_density, dipole_moment=SODIUM_D1.dipole_moment):
    """``N |mu|^2 / (eps0 hbar)`` in rad/s."""
    return number_density * dipole_moment**2 / (sc.epsilon_0 * sc.hbar)


def lambda_response(one_photon, two_photon, pump_rabi, gamma12, gamma13):
    """Dimensionless weak-probe kernel ``i (g12 - i d) / [(g13 - i D)(g12 - i d) + W^2/4]``.

    Broadcasts over array (and complex) detunings; multiplied by
    :func:`chi_prefactor` it gives the susceptibility.
    """
    raman = gamma12 - 1j * two_photon
    return 1j * raman / ((gamma13 - 1j * one_photon) * raman + 0.25 * pump_rabi**2)


def check_weak_probe(config: LambdaConfig) -> None:
    if config.probe_rabi == 0:
        return
    if config.probe_rabi**2 > WEAK_PROBE_INTENSITY_RATIO * config.pump_rabi**2 * (1 + 1e-9):
        raise WeakProbeError(
            f"probe/pump intensity ratio {(config.probe_rabi / max(config.pump_rabi, 1e-300))**2:.3g}"
            f" exceeds {WEAK_PROBE_INTENSITY_RATIO}"
        )


def weak_probe_chi(config: LambdaConfig, number_density: float,
                   dipole_moment: float = SODIUM_D1.dipole_moment) -> complex:
    """Closed-form linear susceptibility of the probe for one velocity class."""
    check_weak_probe(config)
    kernel = lambda_response(config.one_photon_detuning, config.two_photon_detuning,
                             config.pump_rabi, config.gamma12, config.gamma13)
    return complex(chi_prefactor(number_density, dipole_moment) * kernel)


def chi_from_state(state: DensityMatrixState, config: LambdaConfig, number_density: float,
                   dipole_moment: float = SODIUM_D1.dipole_moment) -> complex:
    """Probe susceptibility implied by a full density matrix, ``2 K rho32 / Omega_p``."""
    if config.probe_rabi <= 0:
        raise DomainError("probe_rabi must be positive to read chi from rho32")
    return 2 * chi_prefactor(number_density, dipole_moment) * state.rho32 / config.probe_rabi
