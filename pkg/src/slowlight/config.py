"""Scenario files: a line-oriented ``section.key = value unit`` format.

Every dimensional value carries a unit suffix and is converted to internal
units (rad/s, s, m, K, W/m2, m-3, rad, m2) at parse time.  Frequencies given in
Hz, kHz, MHz or GHz are ordinary frequencies and are multiplied by 2 pi.
``#`` starts a comment.  A section other than ``medium`` and ``grid`` is
active when at least one of its keys appears in the file.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from types import MappingProxyType

import numpy as np

from .atomic import SODIUM_D1, rabi_from_intensity
from .calibration import CalibrationTargets
from .doppler import CellConfig
from .errors import ConfigError
from .fwm import DEFAULT_FWM_RABI, FwmConfig
from .interferometers import GyroScenario, HomodyneConfig
from .medium import CALIBRATED_DENSITY, CALIBRATED_GAMMA12, CALIBRATED_PUMP_RABI, MediumConfig
from .spectra import detuning_grid

TWO_PI = 2 * math.pi
AUTO = "auto"

UNITS = {
    "rate": {"rad/s": 1.0, "s-1": 1.0, "Hz": TWO_PI, "kHz": TWO_PI * 1e3, "MHz": TWO_PI * 1e6,
             "GHz": TWO_PI * 1e9},
    "time": {"s": 1.0, "ms": 1e-3, "us": 1e-6, "µs": 1e-6, "ns": 1e-9, "ps": 1e-12},
    "length": {"m": 1.0, "cm": 1e-2, "mm": 1e-3, "um": 1e-6, "µm": 1e-6, "nm": 1e-9},
    "temperature": {"K": 1.0, "C": 1.0},
    "intensity": {"W/m2": 1.0, "W/cm2": 1e4, "mW/cm2": 10.0},
    "density": {"m-3": 1.0, "cm-3": 1e6},
    "angle": {"rad": 1.0, "deg": math.pi / 180},
    "area": {"m2": 1.0, "cm2": 1e-4},
}
CANONICAL = {"rate": "rad/s", "time": "s", "length": "m", "temperature": "K", "intensity": "W/m2",
             "density": "m-3", "angle": "rad", "area": "m2"}
NUMERIC_KINDS = set(UNITS) | {"float", "int"}


@dataclass(frozen=True)
class Field:
    key: str
    kind: str
    default: object = None
    check: tuple | None = None  # (lower, lower_inclusive, upper, upper_inclusive)
    keywords: tuple = ()
    doc: str = ""

    @property
    def section(self) -> str:
        return self.key.split(".", 1)[0]


def _ge(x):
    return (x, True, None, False)


def _gt(x):
    return (x, False, None, False)


SCHEMA = (
    Field("scenario.name", "str", None, doc="identifier used for output names (required)"),
    Field("medium.density", "density", CALIBRATED_DENSITY, _ge(0), (AUTO,),
          "atom number density; auto = vapor-pressure correlation at medium.temperature"),
    Field("medium.temperature", "temperature", 373.15, (273.0, False, 700.0, True),
          doc="cell temperature"),
    Field("medium.length", "length", 0.1, _gt(0), doc="cell length"),
    Field("medium.beam_waist", "length", 100e-6, _gt(0), doc="1/e intensity radius"),
    Field("medium.residual_dephasing", "rate", 0.0, _ge(0), doc="extra ground decoherence from stray fields"),
    Field("medium.gamma12", "rate", CALIBRATED_GAMMA12, _ge(0), (AUTO,),
          "ground coherence decay; auto = transit rate + residual_dephasing"),
    Field("medium.gamma_extra", "rate", 0.0, _ge(0), doc="optical dephasing surplus"),
    Field("medium.pump_rabi", "rate", CALIBRATED_PUMP_RABI, _ge(0), doc="pump Rabi frequency"),
    Field("medium.pump_intensity", "intensity", None, _ge(0), ("none",),
          "if set, replaces pump_rabi by the intensity conversion"),
    Field("medium.pump_intensity_scale", "float", 1.0, _gt(0), doc="pump intensity multiplier"),
    Field("medium.probe_ratio", "float", 0.1, (0.0, True, 0.1, True), doc="probe/pump intensity ratio"),
    Field("medium.one_photon_detuning", "rate", 0.0, doc="shared one-photon detuning"),
    Field("medium.dipole_scale", "float", 1.0, _gt(0), doc="scale on the D1 dipole moment"),
    Field("medium.quadrature_nodes", "int", 64, _ge(2), doc="Gauss-Hermite velocity nodes"),
    Field("grid.span", "rate", TWO_PI * 10e6, _gt(0), doc="half-width of the two-photon detuning grid"),
    Field("grid.points", "int", 4001, _ge(11), doc="number of grid points (odd keeps delta = 0 on grid)"),
    Field("lockin.dither_amplitude", "rate", TWO_PI * 50e3, _gt(0), doc="frequency-dither amplitude"),
    Field("lockin.dither_rate", "rate", TWO_PI * 1e3, _gt(0), doc="dither angular rate"),
    Field("lockin.span", "rate", TWO_PI * 3e6, _gt(0), doc="half-width of the lock-in sweep"),
    Field("lockin.points", "int", 201, _ge(3), doc="lock-in sweep points"),
    Field("homodyne.reference_phase", "angle", math.pi / 2, doc="reference arm phase"),
    Field("homodyne.reference_amplitude", "float", 1.0, _ge(0), doc="reference field amplitude"),
    Field("homodyne.wavelength", "length", 589.6e-9, _gt(0), doc="probe wavelength"),
    Field("homodyne.exact_inversion", "bool", False, doc="arcsin instead of linear inversion"),
    Field("pulse.fwhm", "time", 400e-9, _gt(0), doc="intensity FWHM"),
    Field("pulse.window", "time", 10e-6, _gt(0), doc="time window (>= 10 x fwhm)"),
    Field("pulse.samples", "int", 16384, _ge(4096), doc="samples, power of two"),
    Field("pulse.carrier_detuning", "rate", 0.0, doc="carrier offset from two-photon resonance"),
    Field("gyro.loop_area", "area", 0.01, _gt(0), doc="Sagnac loop area"),
    Field("gyro.rotation_rate", "rate", 1e-3, doc="rotation rate"),
    Field("gyro.wavelength", "length", 589.6e-9, _gt(0), doc="probe wavelength"),
    Field("gyro.group_index", "float", AUTO, _ge(1), (AUTO,), "group index; auto = from the medium"),
    Field("gyro.pc_reflectivity", "float", 0.017, (0.0, True, 0.25, False),
          "phase-conjugate power reflectivity (amplitude = sqrt)"),
    Field("gyro.parasitic_phase", "angle", math.pi / 2, doc="phase of the parasitic field"),
    Field("gyro.theta_points", "int", 73, _ge(2), doc="parasitic-phase samples in the bias table"),
    Field("gyro.fringe_points", "int", 64, _ge(4), doc="fringe samples per fit"),
    Field("fwm.forward_pump_rabi", "rate", DEFAULT_FWM_RABI, _ge(0), doc="read-out pump Rabi frequency"),
    Field("fwm.backward_pump_rabi", "rate", DEFAULT_FWM_RABI, _ge(0), doc="backward pump Rabi frequency"),
    Field("fwm.probe_rabi", "rate", DEFAULT_FWM_RABI, _ge(0), doc="probe Rabi frequency"),
    Field("fwm.gamma12", "rate", AUTO, _ge(0), (AUTO,), "ground decoherence; auto = medium value"),
    Field("fwm.peak_reflectivity", "float", 0.017, (0.0, True, 1.0, False), doc="calibrated peak"),
    Field("fwm.points", "int", 2001, _ge(11), doc="two-photon detuning points"),
    Field("calibrate.peak_transmission", "float", 0.23, (0.0, False, 1.0, True), doc="target peak T"),
    Field("calibrate.eit_fwhm", "rate", TWO_PI * 1e6, _gt(0), doc="target EIT FWHM"),
    Field("calibrate.group_index", "float", 607.0, _gt(1), doc="target group index"),
    Field("calibrate.starts", "int", 4, _ge(1), doc="optimizer starts"),
    Field("sweep.parameter", "str", None, doc="dotted key of a numeric field to sweep"),
    Field("sweep.values", "list", None, doc="comma-separated values, unit of the swept field"),
)
FIELDS = {f.key: f for f in SCHEMA}
ALWAYS = ("scenario", "medium", "grid")
SECTIONS = tuple(dict.fromkeys(f.section for f in SCHEMA))


def schema_text() -> str:
    """Human-readable schema, shipped as ``presets/schema.txt``."""
    lines = ["# Scenario schema: key | kind | canonical unit | default | accepted units | notes"]
    for f in SCHEMA:
        unit = CANONICAL.get(f.kind, "-")
        units = ", ".join(UNITS[f.kind]) if f.kind in UNITS else "-"
        lines.append(f"{f.key} | {f.kind} | {unit} | {_format_value(f, f.default)} | {units} | {f.doc}")
    return "\n".join(lines) + "\n"


def _format_number(kind, value):
    if kind == "int":
        return str(int(value))
    return repr(float(value))


def _format_value(f: Field, value) -> str:
    if value is None:
        return "none"
    if isinstance(value, str) and f.kind != "str":
        return value
    if f.kind == "bool":
        return "true" if value else "false"
    if f.kind == "str":
        return str(value)
    text = _format_number(f.kind, value)
    return f"{text} {CANONICAL[f.kind]}" if f.kind in UNITS else text


def _convert(kind, number, unit):
    if kind == "temperature" and unit == "C":
        return number + 273.15
    return number * UNITS[kind][unit]


def _parse_numbers(f: Field, kind: str, text: str, line: int, col: int, listed: bool):
    tokens = text.split()
    unit = None
    if kind in UNITS:
        if len(tokens) < 2:
            raise ConfigError(f"{f.key}: missing unit (one of {', '.join(UNITS[kind])})",
                              line, col + len(text), f.key)
        unit = tokens[-1]
        if unit not in UNITS[kind]:
            ucol = col + text.rfind(unit)
            raise ConfigError(f"{f.key}: unknown unit {unit!r} (one of {', '.join(UNITS[kind])})",
                              line, ucol, f.key)
        body = text[:text.rfind(unit)]
    else:
        body = text
    items = body.split(",") if listed else [body]
    values = []
    offset = 0
    for item in items:
        stripped = item.strip()
        icol = col + offset + (len(item) - len(item.lstrip()))
        offset += len(item) + 1
        try:
            number = int(stripped) if kind == "int" else float(stripped)
        except ValueError:
            raise ConfigError(f"{f.key}: cannot parse number {stripped!r}", line, icol, f.key) from None
        if not math.isfinite(number):
            raise ConfigError(f"{f.key}: value must be finite", line, icol, f.key)
        values.append(number if unit is None else _convert(kind, number, unit))
    return values if listed else values[0]


def _check(f: Field, value, line=None, column=None):
    if f.check is None or not isinstance(value, (int, float)) or isinstance(value, bool):
        return
    lo, lo_inc, hi, hi_inc = f.check
    bad = (lo is not None and (value < lo or (value == lo and not lo_inc))) or \
          (hi is not None and (value > hi or (value == hi and not hi_inc)))
    if bad:
        lower = "" if lo is None else f"{'>=' if lo_inc else '>'} {lo:g}"
        upper = "" if hi is None else f"{'<=' if hi_inc else '<'} {hi:g}"
        constraint = " and ".join(s for s in (lower, upper) if s)
        raise ConfigError(f"{f.key}: must be {constraint} (got {value:g})", line, column, f.key)


@dataclass(frozen=True)
class PulseSpec:
    fwhm: float
    window: float
    samples: int
    carrier_detuning: float


@dataclass(frozen=True)
class LockInSpec:
    dither_amplitude: float
    dither_rate: float
    detunings: np.ndarray


@dataclass(frozen=True)
class Scenario:
    """A validated scenario; ``values`` holds every active field in internal units."""

    name: str
    values: MappingProxyType
    sections: tuple

    def __post_init__(self):
        if not self.name:
            raise ConfigError("scenario.name must be nonempty", field="scenario.name")

    def get(self, key):
        return self.values[key]

    def has(self, section: str) -> bool:
        return section in self.sections

    @property
    def medium(self) -> MediumConfig:
        v = self.values
        density = v["medium.density"]
        pump = v["medium.pump_rabi"]
        if v["medium.pump_intensity"] is not None:
            pump = rabi_from_intensity(v["medium.pump_intensity"], SODIUM_D1.dipole_moment * v["medium.dipole_scale"])
        pump *= math.sqrt(v["medium.pump_intensity_scale"])
        cell = CellConfig(length=v["medium.length"], temperature=v["medium.temperature"],
                          beam_waist=v["medium.beam_waist"],
                          residual_dephasing=v["medium.residual_dephasing"],
                          density_override=None if density == AUTO else density)
        return MediumConfig(
            cell=cell, pump_rabi=pump, probe_rabi=pump * math.sqrt(v["medium.probe_ratio"]),
            one_photon_detuning=v["medium.one_photon_detuning"],
            gamma12=None if v["medium.gamma12"] == AUTO else v["medium.gamma12"],
            gamma_extra=v["medium.gamma_extra"], dipole_scale=v["medium.dipole_scale"],
            quadrature_nodes=v["medium.quadrature_nodes"])

    @property
    def grid(self) -> np.ndarray:
        return detuning_grid(self.values["grid.span"], self.values["grid.points"])

    @property
    def pulse(self) -> PulseSpec | None:
        if not self.has("pulse"):
            return None
        v = self.values
        return PulseSpec(v["pulse.fwhm"], v["pulse.window"], v["pulse.samples"], v["pulse.carrier_detuning"])

    @property
    def lockin(self) -> LockInSpec | None:
        if not self.has("lockin"):
            return None
        v = self.values
        return LockInSpec(v["lockin.dither_amplitude"], v["lockin.dither_rate"],
                          np.linspace(-v["lockin.span"], v["lockin.span"], v["lockin.points"]))

    @property
    def homodyne(self) -> HomodyneConfig | None:
        if not self.has("homodyne"):
            return None
        v = self.values
        return HomodyneConfig(reference_phase=v["homodyne.reference_phase"],
                              reference_amplitude=v["homodyne.reference_amplitude"],
                              length=v["medium.length"], wavelength=v["homodyne.wavelength"])

    def gyro_scenario(self, group_index: float | None = None) -> GyroScenario | None:
        """Gyro settings; ``group_index`` resolves ``gyro.group_index = auto``."""
        if not self.has("gyro"):
            return None
        v = self.values
        n_g = v["gyro.group_index"]
        if n_g == AUTO:
            n_g = 1.0 if group_index is None else group_index
        return GyroScenario(loop_area=v["gyro.loop_area"], rotation_rate=v["gyro.rotation_rate"],
                            wavelength=v["gyro.wavelength"], group_index=n_g,
                            pc_amplitude_reflectivity=math.sqrt(v["gyro.pc_reflectivity"]),
                            parasitic_phase=v["gyro.parasitic_phase"])

    @property
    def gyro(self) -> GyroScenario | None:
        return self.gyro_scenario()

    @property
    def fwm(self) -> FwmConfig | None:
        if not self.has("fwm"):
            return None
        v = self.values
        gamma = v["fwm.gamma12"]
        if gamma == AUTO:
            gamma = self.medium.effective_gamma12
        grid = detuning_grid(v["grid.span"], v["fwm.points"])
        return FwmConfig(forward_pump_rabi=v["fwm.forward_pump_rabi"],
                         backward_pump_rabi=v["fwm.backward_pump_rabi"], probe_rabi=v["fwm.probe_rabi"],
                         two_photon_detuning_grid=grid, gamma12=gamma,
                         peak_reflectivity_calibration=v["fwm.peak_reflectivity"])

    @property
    def calibration_targets(self) -> CalibrationTargets | None:
        if not self.has("calibrate"):
            return None
        v = self.values
        return CalibrationTargets(v["calibrate.peak_transmission"], v["calibrate.eit_fwhm"],
                                  v["calibrate.group_index"])

    @property
    def sweep(self) -> tuple | None:
        if not self.has("sweep"):
            return None
        return self.values["sweep.parameter"], tuple(self.values["sweep.values"])

    def expand(self) -> list["Scenario"]:
        """One scenario per sweep value (the scenario itself when there is no sweep)."""
        if self.sweep is None:
            return [self]
        key, values = self.sweep
        members = []
        for i, value in enumerate(values):
            changed = dict(self.values)
            changed[key] = value
            for k in ("sweep.parameter", "sweep.values"):
                changed.pop(k)
            sections = tuple(s for s in self.sections if s != "sweep")
            if FIELDS[key].section not in sections:
                sections = tuple(s for s in SECTIONS if s in sections or s == FIELDS[key].section)
                for f in SCHEMA:
                    if f.section == FIELDS[key].section:
                        changed.setdefault(f.key, f.default)
            changed["scenario.name"] = f"{self.name}-{i:02d}"
            members.append(Scenario(changed["scenario.name"], MappingProxyType(changed), sections))
        return members

    def replace_values(self, **changes) -> "Scenario":
        """Copy with ``section__key=value`` overrides (used for CLI flags)."""
        values = dict(self.values)
        for name, value in changes.items():
            key = name.replace("__", ".")
            if key not in FIELDS:
                raise ConfigError(f"unknown field {key}", field=key)
            _check(FIELDS[key], value)
            values[key] = value
        scenario = Scenario(values["scenario.name"], MappingProxyType(values), self.sections)
        _validate_members(scenario)
        return scenario


def _validate_members(scenario: Scenario):
    for member in scenario.expand():
        _cross_check(member)


def _cross_check(s: Scenario):
    v = s.values
    if v["grid.points"] % 2 == 0:
        raise ConfigError("grid.points: must be odd so that delta = 0 is on the grid", field="grid.points")
    if s.has("pulse"):
        samples = v["pulse.samples"]
        if samples & (samples - 1):
            raise ConfigError(f"pulse.samples: must be a power of two (got {samples})", field="pulse.samples")
        if v["pulse.window"] < 10 * v["pulse.fwhm"]:
            raise ConfigError("pulse.window: must be at least 10 x pulse.fwhm", field="pulse.window")
        # Gaussian amplitude spectrum falls to 1e-4 at sqrt(2 ln 1e4) / sigma
        sigma = v["pulse.fwhm"] / (2 * math.sqrt(math.log(2)))
        reach = math.sqrt(2 * math.log(1e4)) / sigma + abs(v["pulse.carrier_detuning"])
        if reach > v["grid.span"]:
            raise ConfigError(f"pulse.fwhm: spectrum reaches {reach / TWO_PI:.4g} Hz beyond grid.span "
                              f"{v['grid.span'] / TWO_PI:.4g} Hz", field="pulse.fwhm")
    if s.has("medium") and v["medium.density"] == AUTO:
        try:
            s.medium.number_density
        except ValueError as exc:
            raise ConfigError(f"medium.temperature: {exc}", field="medium.temperature") from None


def parse_scenario(text: str, source: str = "<string>") -> Scenario:
    """Parse and validate scenario text."""
    raw = {}
    seen_lines = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        content = line.split("#", 1)[0]
        if not content.strip():
            continue
        if "=" not in content:
            col = len(content) - len(content.lstrip()) + 1
            raise ConfigError("expected 'section.key = value'", lineno, col)
        key_part, value_part = content.split("=", 1)
        key = key_part.strip()
        key_col = len(key_part) - len(key_part.lstrip()) + 1
        if key not in FIELDS:
            section = key.split(".", 1)[0]
            what = "unknown key" if section in SECTIONS else "unknown section"
            raise ConfigError(f"{what} {key!r}", lineno, key_col, key)
        if key in raw:
            raise ConfigError(f"duplicate key {key!r} (first on line {seen_lines[key]})", lineno, key_col, key)
        value_col = len(key_part) + 2 + (len(value_part) - len(value_part.lstrip()))
        raw[key] = (value_part.strip(), lineno, value_col)
        seen_lines[key] = lineno

    sections = tuple(s for s in SECTIONS if s in ALWAYS or any(k.startswith(s + ".") for k in raw))
    values = {}
    for f in SCHEMA:
        if f.section not in sections:
            continue
        if f.key not in raw:
            if f.default is None and f.key in ("scenario.name", "sweep.parameter", "sweep.values"):
                raise ConfigError(f"{f.key}: required", field=f.key)
            values[f.key] = f.default
            continue
        text_value, lineno, col = raw[f.key]
        values[f.key] = _parse_field(f, text_value, lineno, col, raw)
        _check(f, values[f.key], lineno, col)
    if "sweep" in sections:
        target = FIELDS[values["sweep.parameter"]]
        text_value, lineno, col = raw["sweep.values"]
        for item in values["sweep.values"]:
            _check(target, item, lineno, col)
    name = values["scenario.name"]
    if not name or not all(c.isalnum() or c in "_-" for c in name):
        raise ConfigError(f"scenario.name: must be a nonempty identifier (got {name!r})",
                          *raw.get("scenario.name", ("", None, None))[1:], field="scenario.name")
    scenario = Scenario(name, MappingProxyType(values), sections)
    _validate_members(scenario)
    return scenario


def _parse_field(f: Field, text: str, line: int, col: int, raw: dict):
    if text in f.keywords:
        return None if text == "none" else text
    if f.kind == "str":
        if not text:
            raise ConfigError(f"{f.key}: empty value", line, col, f.key)
        if f.key == "sweep.parameter":
            target = FIELDS.get(text)
            if target is None or target.kind not in NUMERIC_KINDS or target.section in ("scenario", "sweep"):
                raise ConfigError(f"sweep.parameter: {text!r} is not a numeric field", line, col, f.key)
        return text
    if f.kind == "bool":
        if text not in ("true", "false"):
            raise ConfigError(f"{f.key}: expected true or false", line, col, f.key)
        return text == "true"
    if f.kind == "list":
        if "sweep.parameter" not in raw:
            raise ConfigError("sweep.values given without sweep.parameter", line, col, f.key)
        target = FIELDS.get(raw["sweep.parameter"][0])
        kind = target.kind if target is not None else "float"
        return tuple(_parse_numbers(f, kind, text, line, col, listed=True))
    return _parse_numbers(f, f.kind, text, line, col, listed=False)


def dump_scenario(scenario: Scenario) -> str:
    """Normalized text: every active field, schema order, internal units."""
    lines = []
    for f in SCHEMA:
        if f.section not in scenario.sections:
            continue
        value = scenario.values[f.key]
        if f.kind == "list":
            target = FIELDS[scenario.values["sweep.parameter"]]
            body = ", ".join(_format_number(target.kind, x) for x in value)
            text = f"{body} {CANONICAL[target.kind]}" if target.kind in UNITS else body
        else:
            text = _format_value(f, value)
        lines.append(f"{f.key} = {text}")
    return "\n".join(lines) + "\n"


PRESETS = ("fig3_eit_sweep", "fig4_dispersion", "fig5_slowlight", "fig6_detuned", "fig7_gyro",
           "fig8_pc", "vacuum", "calibrate")


def preset_text(name: str) -> str:
    if name not in PRESETS:
        raise ConfigError(f"unknown preset {name!r} (available: {', '.join(PRESETS)})")
    return resources.files("slowlight.presets").joinpath(f"{name}.cfg").read_text(encoding="utf-8")


def load_scenario(path) -> Scenario:
    """Load a scenario file; a bare preset name loads the shipped preset."""
    path_str = str(path)
    if path_str in PRESETS and not Path(path_str).exists():
        return parse_scenario(preset_text(path_str), path_str)
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read {p}: {exc.strerror}") from None
    return parse_scenario(text, str(p))


def with_grid_points(scenario: Scenario, points: int) -> Scenario:
    return scenario.replace_values(grid__points=int(points))


__all__ = ["Scenario", "PulseSpec", "LockInSpec", "Field", "SCHEMA", "PRESETS", "UNITS",
           "parse_scenario", "load_scenario", "dump_scenario", "schema_text", "preset_text",
           "with_grid_points"]
