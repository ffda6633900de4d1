"""Composite medium description: species, cell and drive fields."""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field

import numpy as np

from .atomic import SODIUM_D1, AtomicSpecies, LambdaConfig
from .doppler import CONTOUR_SHIFT, CellConfig, cell_number_density, residual_wavenumber, transit_gamma
from .errors import DomainError

#: Probe carrier used for group-index evaluation (2 pi c / 589.6 nm).
NOMINAL_CARRIER_WAVELENGTH = 589.6e-9

# Sodium cell reproducing 23 % peak transmission, 1 MHz EIT FWHM and a group
# index of 607 (see ``calibration.calibrate`` and tests/test_calibration.py).
CALIBRATED_DENSITY = 1.0964948655372742e16
CALIBRATED_GAMMA12 = 2377393.9802946816
CALIBRATED_PUMP_RABI = 236523329.0112537


@dataclass(frozen=True)
class MediumConfig:
    """Everything needed to evaluate the Doppler-averaged probe response.

    ``gamma12=None`` uses the transit rate plus the cell's residual dephasing.
    ``residual_k=None`` uses ``ground_splitting / c``.
    """

    species: AtomicSpecies = SODIUM_D1
    cell: CellConfig = field(default_factory=CellConfig)
    pump_rabi: float = 0.0
    probe_rabi: float = 0.0
    one_photon_detuning: float = 0.0
    gamma12: float | None = None
    gamma_extra: float = 0.0
    branching: tuple = (0.5, 0.5)
    dipole_scale: float = 1.0
    residual_k: float | None = None
    quadrature_nodes: int = 64
    contour_shift: float = CONTOUR_SHIFT

    def __post_init__(self):
        if self.pump_rabi < 0 or self.probe_rabi < 0:
            raise DomainError("Rabi frequencies must be >= 0")
        if self.gamma12 is not None and self.gamma12 < 0:
            raise DomainError("gamma12 must be >= 0")
        if self.dipole_scale <= 0:
            raise DomainError("dipole_scale must be > 0")
        if self.quadrature_nodes < 2:
            raise DomainError("quadrature_nodes must be >= 2")

    @property
    def number_density(self) -> float:
        return cell_number_density(self.species, self.cell)

    @property
    def effective_gamma12(self) -> float:
        if self.gamma12 is not None:
            return self.gamma12
        return transit_gamma(self.species, self.cell) + self.cell.residual_dephasing

    @property
    def dipole_moment(self) -> float:
        return self.species.dipole_moment * self.dipole_scale

    @property
    def wavevector_mismatch(self) -> float:
        return residual_wavenumber(self.species) if self.residual_k is None else self.residual_k

    @property
    def carrier_angular_frequency(self) -> float:
        return self.species.angular_frequency

    def lambda_config(self, two_photon_detuning: float = 0.0) -> LambdaConfig:
        return LambdaConfig(
            pump_rabi=self.pump_rabi,
            probe_rabi=self.probe_rabi,
            one_photon_detuning=self.one_photon_detuning,
            two_photon_detuning=two_photon_detuning,
            gamma12=self.effective_gamma12,
            excited_decay=self.species.natural_linewidth,
            branching_1=self.branching[0],
            branching_2=self.branching[1],
            gamma_extra=self.gamma_extra,
        )

    def replace(self, **changes) -> "MediumConfig":
        """Copy with changes; ``density`` and cell fields are routed to the cell."""
        cell_fields = {f.name for f in dataclasses.fields(CellConfig)}
        cell_changes = {k: changes.pop(k) for k in list(changes) if k in cell_fields}
        if "density" in changes:
            cell_changes["density_override"] = changes.pop("density")
        cell = dataclasses.replace(self.cell, **cell_changes) if cell_changes else self.cell
        return dataclasses.replace(self, cell=cell, **changes)


def calibrated_sodium(**changes) -> MediumConfig:
    """The calibrated 100 C sodium cell (10 cm, 100 um waist, on one-photon resonance)."""
    medium = MediumConfig(
        cell=CellConfig(density_override=CALIBRATED_DENSITY),
        pump_rabi=CALIBRATED_PUMP_RABI,
        probe_rabi=CALIBRATED_PUMP_RABI / np.sqrt(10.0),
        gamma12=CALIBRATED_GAMMA12,
    )
    return medium.replace(**changes) if changes else medium
