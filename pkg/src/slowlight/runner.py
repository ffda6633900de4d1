"""Execute scenarios: compute each active pipeline and write CSV, SVG and summaries."""

from __future__ import annotations

import dataclasses
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy import constants as sc

from .calibration import calibrate, carrier_for_group_index
from .config import Scenario, dump_scenario
from .errors import ShapeError
from .fwm import pc_reflectivity_spectrum, reflectivity_fwhm
from .interferometers import (bias_versus_theta, homodyne_trace, index_variation_from_trace, pc_bias,
                              sagnac_phase)
from .lockin import lock_in_signal, medium_transmission_fn
from .pulses import gaussian_pulse, measure_delay, propagate, spreading_metrics
from .spectra import (dispersion_slope, eit_fwhm, index_at_zero, medium_response, response_from_index,
                      transmission_spectrum)

log = logging.getLogger(__name__)

TWO_PI = 2 * math.pi
STAGES = ("spectrum", "lockin", "homodyne", "pulse", "fwm", "gyro", "calibrate")


@dataclass
class MemberReport:
    name: str
    summary: dict = field(default_factory=dict)
    files: list = field(default_factory=list)


@dataclass
class RunReport:
    name: str
    members: list

    @property
    def summary(self) -> dict:
        """Scalars of a single run, or ``member.key`` entries for a sweep."""
        if len(self.members) == 1:
            return dict(self.members[0].summary)
        return {f"{m.name}.{k}": v for m in self.members for k, v in m.summary.items()}


def write_csv(path: Path, header, columns) -> Path:
    """Comma-separated table with a header row and full double precision."""
    data = np.column_stack([np.asarray(c, dtype=float) for c in columns])
    np.savetxt(path, data, fmt="%.17g", delimiter=",", header=",".join(header), comments="")
    return path


def _format_scalar(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return "%.17g" % value
    return str(value)


def write_summary(path: Path, summary: dict) -> Path:
    path.write_text("".join(f"{k} = {_format_scalar(v)}\n" for k, v in summary.items()), encoding="utf-8")
    return path


def _svg(path: Path, x, series, xlabel, ylabel) -> Path:
    from matplotlib.backends.backend_svg import FigureCanvasSVG
    from matplotlib.figure import Figure
    import matplotlib

    matplotlib.rcParams["svg.hashsalt"] = "slowlight"
    fig = Figure(figsize=(6, 4))
    FigureCanvasSVG(fig)
    ax = fig.add_subplot()
    for label, y in series:
        ax.plot(x, y, label=label)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    if len(series) > 1:
        ax.legend()
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    return path


def _run_member(scenario: Scenario, out: Path, stages: set, seed: int, svg: bool) -> MemberReport:
    out.mkdir(parents=True, exist_ok=True)
    report = MemberReport(scenario.name)
    s, files = report.summary, report.files
    (out / "scenario.cfg").write_text(dump_scenario(scenario), encoding="utf-8")
    medium = scenario.medium
    grid = scenario.grid
    hz = grid / TWO_PI

    if "calibrate" in stages and scenario.has("calibrate"):
        result = calibrate(scenario.calibration_targets, base=medium, seed=seed,
                           starts=scenario.get("calibrate.starts"), grid=grid)
        medium = result.medium
        s.update(calibrated_density_m3=medium.number_density,
                 calibrated_gamma12_rad_s=medium.effective_gamma12,
                 calibrated_pump_rabi_rad_s=medium.pump_rabi,
                 calibration_evaluations=result.evaluations)

    resp = medium_response(medium, grid)
    trans = transmission_spectrum(resp)
    try:
        fwhm = eit_fwhm(trans)
    except ShapeError:
        fwhm = None
    slope = dispersion_slope(resp, fwhm).value
    n_g = index_at_zero(resp) + carrier_for_group_index() * slope
    s.update(peak_transmission=float(trans.values.max()),
             eit_fwhm_hz=float("nan") if fwhm is None else fwhm / TWO_PI,
             dispersion_slope_s_per_rad=slope, group_index=n_g,
             group_delay_ns=(n_g - 1) * medium.cell.length / sc.c * 1e9)
    if "spectrum" in stages:
        chi = resp.chi.values
        index = resp.index_minus_one.values
        files.append(write_csv(out / "spectrum.csv",
                               ["delta_hz", "transmission", "re_n_minus_1", "im_n_minus_1", "re_chi", "im_chi"],
                               [hz, trans.values, index.real, index.imag, chi.real, chi.imag]))
        if svg:
            files.append(_svg(out / "spectrum.svg", hz / 1e6, [("T", trans.values)],
                              "two-photon detuning (MHz)", "transmission"))

    if "lockin" in stages and scenario.has("lockin"):
        spec = scenario.lockin
        trace = lock_in_signal(medium_transmission_fn(medium), spec.dither_amplitude, spec.dither_rate,
                               spec.detunings, fwhm=fwhm)
        s.update(lockin_central_slope=trace.central_slope(), lockin_rms_discrepancy=trace.rms_discrepancy,
                 lockin_status=trace.status)
        files.append(write_csv(out / "lockin.csv", ["delta_hz", "signal", "analytic"],
                               [spec.detunings / TWO_PI, trace.signal, trace.analytic]))
        if svg:
            files.append(_svg(out / "lockin.svg", spec.detunings / TWO_PI / 1e6,
                              [("simulated", trace.signal), ("series", trace.analytic)],
                              "two-photon detuning (MHz)", "lock-in signal"))

    if "homodyne" in stages and scenario.has("homodyne"):
        cfg = scenario.homodyne
        trace = homodyne_trace(resp, cfg)
        recovered = index_variation_from_trace(trace, cfg, exact=scenario.get("homodyne.exact_inversion"))
        window = np.abs(grid) <= TWO_PI * 0.5e6
        re_index = resp.index_minus_one.values.real
        rec_resp = response_from_index(grid, recovered.values, resp.carrier_angular_frequency)
        s.update(homodyne_max_phase_rad=trace.max_phase, homodyne_small_phase=trace.small_phase,
                 homodyne_valid_fraction=float(np.mean(recovered.valid)),
                 homodyne_index_slope=dispersion_slope(rec_resp, fwhm).value,
                 index_peak_to_peak=float(np.ptp(re_index[window])))
        files.append(write_csv(out / "homodyne.csv", ["delta_hz", "signal", "index_variation", "valid"],
                               [hz, trace.values, recovered.values, recovered.valid]))
        if svg:
            files.append(_svg(out / "homodyne.svg", hz / 1e6, [("recovered", recovered.values)],
                              "two-photon detuning (MHz)", "Re n - 1"))

    if "pulse" in stages and scenario.has("pulse"):
        spec = scenario.pulse
        reference = gaussian_pulse(spec.fwhm, spec.window, spec.samples, spec.carrier_detuning)
        output = propagate(reference, resp)
        delay = measure_delay(output, reference)
        metrics = spreading_metrics(output, reference)
        s.update(delay_ns=delay.centroid * 1e9, delay_xcorr_ns=delay.cross_correlation * 1e9,
                 fwhm_ratio=metrics.fwhm_ratio, skewness=metrics.skewness,
                 energy_transmission=metrics.energy_transmission)
        for label, p in (("pulse_reference", reference), ("pulse_output", output)):
            files.append(write_csv(out / f"{label}.csv", ["time_s", "re", "im", "intensity"],
                                   [p.times, p.envelope.real, p.envelope.imag, p.intensity]))
        if svg:
            files.append(_svg(out / "pulse.svg", reference.times * 1e6,
                              [("reference", reference.intensity), ("output", output.intensity)],
                              "time (us)", "intensity"))

    if "fwm" in stages and scenario.has("fwm"):
        cfg = scenario.fwm
        refl = pc_reflectivity_spectrum(cfg)
        s.update(pc_peak=float(refl.values.max()), pc_fwhm_hz=reflectivity_fwhm(refl) / TWO_PI)
        files.append(write_csv(out / "pc_spectrum.csv", ["delta_hz", "reflectivity"],
                               [refl.detunings / TWO_PI, refl.values]))
        if svg:
            files.append(_svg(out / "pc_spectrum.svg", refl.detunings / TWO_PI / 1e6,
                              [("R", refl.values)], "two-photon detuning (MHz)", "PC reflectivity"))

    if "gyro" in stages and scenario.has("gyro"):
        gyro = scenario.gyro_scenario(max(n_g, 1.0))
        vacuum = dataclasses.replace(gyro, group_index=1.0)
        fringe_points = scenario.get("gyro.fringe_points")
        bias = pc_bias(gyro, fringe_points)
        thetas = np.linspace(-math.pi, math.pi, scenario.get("gyro.theta_points"))
        table = bias_versus_theta(gyro, thetas, fringe_points)
        s.update(gyro_group_index=gyro.group_index, sagnac_phase_vacuum_rad=sagnac_phase(vacuum),
                 sagnac_phase_rad=sagnac_phase(gyro), enhancement=sagnac_phase(gyro) / sagnac_phase(vacuum)
                 if sagnac_phase(vacuum) != 0 else float("nan"),
                 pc_phase_bias_rad=bias.phase_bias, pc_rotation_bias_rad_s=bias.rotation_bias,
                 pc_max_phase_bias_rad=float(np.max(np.abs(table))))
        files.append(write_csv(out / "gyro_bias.csv", ["theta_rad", "phase_bias_rad", "rotation_bias_rad_s"],
                               [thetas, table, table / gyro.scale_factor]))
        files.append(write_summary(out / "gyro_summary.txt",
                                   {k: v for k, v in s.items() if k.startswith(("gyro", "sagnac", "enh", "pc_"))}))
        if svg:
            files.append(_svg(out / "gyro_bias.svg", thetas, [("bias", table)], "parasitic phase (rad)",
                              "phase bias (rad)"))

    files.append(write_summary(out / "summary.txt", s))
    return report


def run(scenario: Scenario, output_dir, stages=STAGES, seed: int = 0, svg: bool = False,
        max_workers: int | None = None) -> RunReport:
    """Run every sweep member (concurrently) and write outputs under ``output_dir``.

    A scenario without a sweep writes straight into ``output_dir``; sweep
    members get one subdirectory each and a combined ``summary.txt`` on top.
    """
    out = Path(output_dir)
    out.mkdir(parents=True, exist_ok=True)
    stages = set(stages)
    members = scenario.expand()
    log.info("running %s: %d member(s), stages %s", scenario.name, len(members), sorted(stages))
    if len(members) == 1:
        return RunReport(scenario.name, [_run_member(members[0], out, stages, seed, svg)])
    (out / "scenario.cfg").write_text(dump_scenario(scenario), encoding="utf-8")
    with ThreadPoolExecutor(max_workers=max_workers or len(members)) as pool:
        futures = [pool.submit(_run_member, m, out / m.name, stages, seed, svg) for m in members]
        reports = [f.result() for f in futures]
    report = RunReport(scenario.name, reports)
    write_summary(out / "summary.txt", report.summary)
    return report
