"""Scenario execution: build the fields, write the artifacts, report the numbers.

A run always follows the same road: construct the incident footprint, apply
the scenario's surface operation, dump the reflected field and its spectrum,
then evaluate whatever observation the scenario carries (a far-field sweep,
a stack of propagation planes, or neither).  The returned summary holds every
headline scalar; files under the output directory hold the curves.
"""

from __future__ import annotations

import math
import os

import numpy as np

from . import io
from .beams import ApSpec, GaussianBeamSpec, gaussian_footprint, plane_wave, waist_from_gain
from .farfield import (
    AnalyticReflectedSpectrum,
    FarFieldPattern,
    lobe_masses,
    pattern_sweep,
    theta_factor,
)
from .numerics import ComplexField2D, embed_field, field_power, forward_spectrum
from .propagation import PropagationPlan, line_profile_x, on_axis_profile, propagate_to_planes
from .ris import (
    FilterSpec,
    MultiBeamSpec,
    RISMask,
    SteerSpec,
    WavefrontSpec,
    apply_mask,
    bandpass_reflect,
    multibeam_mask,
    steering_mask,
    wavefront_mask,
)
from .scenarios import (
    ApBeam,
    BandpassOp,
    GaussianBeam,
    MultibeamOp,
    OptimizeOp,
    PlaneBeam,
    Scenario,
    SteerOp,
    WavefrontOp,
)
from .unitcell import OptProblem, UnitCellModel, optimize_mask

__all__ = [
    "run",
    "build_incident",
    "refined_peak",
    "halfmax_width",
    "OP_SUBCOMMANDS",
    "GENERIC_SUBCOMMANDS",
]

OP_SUBCOMMANDS = ("steer", "multibeam", "bandpass", "wavefront", "optimize")
GENERIC_SUBCOMMANDS = ("farfield", "propagate")

SUMMARY_SCHEMA = "ris-kspace-run/1"


# -- small curve utilities (shared with the test suite) ----------------------


def refined_peak(x: np.ndarray, y: np.ndarray) -> tuple[float, float]:
    """Peak location and height with parabolic refinement around the argmax."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    i = int(np.argmax(y))
    if i == 0 or i == y.size - 1:
        return float(x[i]), float(y[i])
    y0, y1, y2 = y[i - 1], y[i], y[i + 1]
    denom = y0 - 2.0 * y1 + y2
    if denom == 0:
        return float(x[i]), float(y[i])
    frac = 0.5 * (y0 - y2) / denom
    frac = float(np.clip(frac, -0.5, 0.5))
    x_star = x[i] + frac * (x[min(i + 1, y.size - 1)] - x[i - 1]) / 2.0
    y_star = y1 - 0.25 * (y0 - y2) * frac
    return float(x_star), float(y_star)


def halfmax_width(x: np.ndarray, y: np.ndarray, i_peak: int | None = None) -> float:
    """Full width at half maximum of the lobe containing the peak sample.

    Crossings are located by linear interpolation; raises when either flank
    never drops below half maximum inside the sampled window.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if i_peak is None:
        i_peak = int(np.argmax(y))
    half = y[i_peak] / 2.0

    def cross(idx_from: int, step: int) -> float:
        j = idx_from
        while 0 <= j + step < y.size:
            if y[j + step] <= half:
                y0, y1 = y[j], y[j + step]
                t = (half - y0) / (y1 - y0)
                return float(x[j] + t * (x[j + step] - x[j]))
            j += step
        raise ValueError("lobe flank never falls below half maximum inside the window")

    return cross(i_peak, 1) - cross(i_peak, -1)


# -- scenario assembly -------------------------------------------------------


def build_incident(sc: Scenario) -> ComplexField2D:
    """Sample the scenario's incident field on its grid (interferers summed in)."""
    beam = sc.beam
    if isinstance(beam, PlaneBeam):
        total = plane_wave(sc.grid, sc.k0, math.radians(beam.theta_i_deg), beam.e0)
        vals = total.values.copy()
        for theta_deg, e0 in beam.interferers:
            vals += plane_wave(sc.grid, sc.k0, math.radians(theta_deg), e0).values
        return ComplexField2D(sc.grid, vals)
    if isinstance(beam, GaussianBeam):
        spec = GaussianBeamSpec(beam.e0, beam.waist_m, math.radians(beam.theta_i_deg), sc.k0)
        return gaussian_footprint(spec, sc.grid)
    if isinstance(beam, ApBeam):
        ap = ApSpec.from_db(beam.power_w, beam.gain_db, beam.distance_m)
        spec = waist_from_gain(ap, sc.k0, math.radians(beam.theta_i_deg))
        return gaussian_footprint(spec, sc.grid)
    raise TypeError(f"unknown beam type {type(beam).__name__}")


def _gaussian_equivalent(sc: Scenario) -> GaussianBeamSpec:
    beam = sc.beam
    if isinstance(beam, GaussianBeam):
        return GaussianBeamSpec(beam.e0, beam.waist_m, math.radians(beam.theta_i_deg), sc.k0)
    if isinstance(beam, ApBeam):
        ap = ApSpec.from_db(beam.power_w, beam.gain_db, beam.distance_m)
        return waist_from_gain(ap, sc.k0, math.radians(beam.theta_i_deg))
    raise ValueError("the analytic sweep route needs a gaussian or ap beam")


def _beam_theta_i(sc: Scenario) -> float:
    return math.radians(sc.beam.theta_i_deg)


def _aperture_sides(sc: Scenario) -> tuple[float, float]:
    if sc.shape.kind == "rect":
        return sc.shape.lx, sc.shape.ly
    if sc.shape.kind == "full":
        return sc.grid.extent_x, sc.grid.extent_y
    raise ValueError("the analytic sweep route needs a rect or full aperture")


def _mapped_theta_deg(theta_in_deg: float, center_k: float, target_k: float, k0: float):
    """Output direction of a plane wave pushed through the steering shift."""
    s = math.sin(math.radians(theta_in_deg)) + (target_k - center_k) / k0
    if abs(s) >= 1.0:
        return None
    return math.degrees(math.asin(s))


def _build_surface(sc: Scenario, incident: ComplexField2D, seed: int):
    """Apply the operation; returns (mask_or_none, reflected, metrics, extras)."""
    op = sc.operation
    theta_i = _beam_theta_i(sc)
    extras: dict = {}

    if isinstance(op, SteerOp):
        spec = SteerSpec(theta_i, math.radians(op.theta_r_deg), sc.k0)
        mask = steering_mask(spec, sc.shape, sc.grid)
        reflected = apply_mask(mask, incident)
        metrics = {
            "theta_r_deg": op.theta_r_deg,
            "carrier_kx_over_k0": math.sin(math.radians(op.theta_r_deg)),
        }
        return mask, reflected, metrics, extras

    if isinstance(op, MultibeamOp):
        angles = tuple(math.radians(t) for t in op.theta_r_deg)
        spec = MultiBeamSpec(theta_i, sc.k0, tuple(zip(angles, op.weights)))
        inc_for_norm = incident if op.normalize == "incident" else None
        mask = multibeam_mask(spec, sc.shape, sc.grid, incident=inc_for_norm)
        reflected = apply_mask(mask, incident)
        metrics = {
            "lobes_theta_deg": list(op.theta_r_deg),
            "weights": list(op.weights),
            "w0": mask.info.get("w0"),
            "peak_abs_gamma": mask.peak_gamma,
        }
        return mask, reflected, metrics, extras

    if isinstance(op, BandpassOp):
        center_deg = op.center_theta_deg if op.center_theta_deg is not None else sc.beam.theta_i_deg
        k_center = sc.k0 * math.sin(math.radians(center_deg))
        k_target = sc.k0 * math.sin(math.radians(op.target_theta_deg))
        k_width = op.width_k0 * sc.k0
        spec = FilterSpec(k_center, k_width, k_target)
        profile = sc.shape.sample(sc.grid)
        windowed = ComplexField2D(sc.grid, incident.values * profile)
        reflected = bandpass_reflect(spec, windowed)
        waves = []
        ths = [sc.beam.theta_i_deg]
        if isinstance(sc.beam, PlaneBeam):
            ths += [t for t, _ in sc.beam.interferers]
        for th in ths:
            k_in = sc.k0 * math.sin(math.radians(th))
            waves.append(
                {
                    "theta_in_deg": th,
                    "mapped_theta_deg": _mapped_theta_deg(th, k_center, k_target, sc.k0),
                    "expected_amplitude_ratio": math.exp(
                        -((k_in - k_center) ** 2) / (2.0 * k_width**2)
                    ),
                }
            )
        metrics = {
            "center_theta_deg": center_deg,
            "target_theta_deg": op.target_theta_deg,
            "width_k0": op.width_k0,
            "waves": waves,
        }
        return None, reflected, metrics, extras

    if isinstance(op, WavefrontOp):
        if op.preset == "focus":
            spec = WavefrontSpec.focus(op.focal_m, sc.k0, theta_i)
        elif op.preset == "bessel":
            spec = WavefrontSpec.bessel(sc.k0, op.cone, theta_i)
        else:
            spec = WavefrontSpec.airy(sc.k0, op.bend_per_m, theta_i)
        mask = wavefront_mask(spec, sc.shape, sc.grid)
        reflected = apply_mask(mask, incident)
        metrics = {
            "preset": op.preset,
            "phase_coefficient": spec.a,
            "phase_exponent": spec.exponent,
        }
        if op.focal_m is not None:
            metrics["focal_m"] = op.focal_m
        if op.cone is not None:
            metrics["cone"] = op.cone
        if op.bend_per_m is not None:
            metrics["bend_per_m"] = op.bend_per_m
        return mask, reflected, metrics, extras

    if isinstance(op, OptimizeOp):
        target = steering_mask(
            SteerSpec(theta_i, math.radians(op.theta_r_deg), sc.k0), sc.shape, sc.grid
        )
        model = UnitCellModel(op.gamma_e_ghz, op.a_e_ghz, sc.frequency_ghz)
        problem = OptProblem(
            incident=incident,
            target=target,
            model=model,
            max_sweeps=op.max_sweeps,
            tol=op.tol,
            seed=seed,
        )
        result = optimize_mask(problem)
        reflected = apply_mask(result.mask, incident)
        ideal = apply_mask(target, incident)

        s_opt = forward_spectrum(reflected)
        s_ideal = forward_spectrum(ideal)
        kx, ky = sc.grid.kxy()
        disk = (kx**2 + ky**2) <= sc.k0**2
        p_opt = np.abs(s_opt.values) ** 2
        p_ideal = np.abs(s_ideal.values) ** 2
        flat = int(np.argmax(np.where(disk, p_opt, -1.0)))
        iy, ix = divmod(flat, sc.grid.nx)
        metrics = {
            "converged": result.converged,
            "sweeps": result.sweeps,
            "objective": result.objective,
            "trace": [float(v) for v in result.trace],
            "peak_kx_over_k0": float(sc.grid.kx[ix] / sc.k0),
            "peak_ky_over_k0": float(sc.grid.ky[iy] / sc.k0),
            "peak_ratio": float(p_opt[iy, ix] / p_ideal.max()),
            "integrated_ratio": float(p_opt[disk].sum() / p_ideal[disk].sum()),
        }
        extras["trace"] = np.asarray(result.trace, dtype=float)
        extras["detunings"] = result.detunings
        return result.mask, reflected, metrics, extras

    raise TypeError(f"unknown operation type {type(op).__name__}")


# -- observations ------------------------------------------------------------


def _pattern_theta_r(sc: Scenario) -> float:
    op = sc.operation
    if isinstance(op, SteerOp):
        return math.radians(op.theta_r_deg)
    if isinstance(op, BandpassOp):
        return math.radians(op.target_theta_deg)
    if isinstance(op, OptimizeOp):
        return math.radians(op.theta_r_deg)
    return 0.0


def _run_sweep(sc: Scenario, reflected, pad: int, out, artifacts, op_metrics, render):
    sw = sc.sweep
    thetas = np.radians(np.linspace(sw.theta_min_deg, sw.theta_max_deg, sw.points))
    step_deg = (sw.theta_max_deg - sw.theta_min_deg) / (sw.points - 1)
    theta_r = _pattern_theta_r(sc)
    phi = math.radians(sw.phi_deg)
    plan = PropagationPlan(sc.grid, sc.k0, pad_factor=pad)
    metrics: dict = {"theta_step_deg": step_deg, "pattern_theta_r_deg": math.degrees(theta_r)}
    patterns: dict[str, FarFieldPattern] = {}

    if "numeric" in sw.routes:
        pat = pattern_sweep(
            reflected, thetas, r=sw.r_m, a_r=sw.a_r_m2, phi=phi, plan=plan, theta_r=theta_r
        )
        patterns["numeric"] = pat
    if "analytic" in sw.routes:
        op = sc.operation
        if not isinstance(op, SteerOp):
            raise ValueError("the analytic sweep route applies to steer scenarios only")
        beam = _gaussian_equivalent(sc)
        lx, ly = _aperture_sides(sc)
        spectrum = AnalyticReflectedSpectrum(beam, lx, ly, math.radians(op.theta_r_deg))
        patterns["analytic"] = pattern_sweep(spectrum, thetas, r=sw.r_m, a_r=sw.a_r_m2, phi=phi)

    for route, pat in patterns.items():
        name = f"pattern_{route}.csv"
        db = pat.db()
        io.write_csv(
            os.path.join(out, name),
            ("theta_deg", "p_r_w", "p_r_db"),
            zip(pat.theta_deg.tolist(), pat.power_w.tolist(), db.tolist()),
        )
        artifacts.append(name)
        th_pk, p_pk = refined_peak(pat.theta_deg, pat.power_w)
        metrics[f"{route}_peak_theta_deg"] = th_pk
        metrics[f"{route}_peak_p_w"] = p_pk

    if len(patterns) == 2:
        pn, pa = patterns["numeric"].power_w, patterns["analytic"].power_w
        metrics["route_l2_rel"] = float(
            np.linalg.norm(pn - pa) / np.linalg.norm(pa)
        )

    pat = patterns.get("numeric") or next(iter(patterns.values()))
    op = sc.operation
    if isinstance(op, MultibeamOp) and "numeric" in patterns:
        angles = np.radians(np.asarray(op.theta_r_deg))
        masses = lobe_masses(pat, sc.k0, angles, theta_r)
        op_metrics["lobe_masses"] = [float(m) for m in masses]
        op_metrics["lobe_masses_rel"] = [float(m / masses.max()) for m in masses]
        weights = np.asarray(op.weights)
        if np.all(weights == weights[0]):
            op_metrics["equal_split_max_dev"] = float(np.abs(masses / masses.mean() - 1).max())
        op_metrics["lobe_peak_theta_deg"] = _window_peaks(pat, sc.k0, angles, theta_r)
    if isinstance(op, BandpassOp) and "numeric" in patterns:
        dens = pat.power_w / theta_factor(pat.theta_rad, pat.phi, theta_r)
        ref_db = None
        for wave in op_metrics["waves"]:
            mapped = wave["mapped_theta_deg"]
            if mapped is None:
                continue
            sel = np.abs(pat.theta_deg - mapped) <= 2.0
            if not np.any(sel):
                continue
            peak = float(dens[sel].max())
            wave["lobe_peak_density"] = peak
            if ref_db is None:
                ref_db = peak  # first wave is the pass-band one
            wave["rel_db"] = float(10.0 * np.log10(max(peak / ref_db, 1e-30)))

    render["patterns"] = patterns
    return metrics


def _window_peaks(pat: FarFieldPattern, k0: float, lobes_rad, sweep_theta_r: float):
    """Per-lobe peak angle of the obliquity-corrected density, tiled windows."""
    centers = k0 * np.sin(np.atleast_1d(lobes_rad))
    kx = k0 * np.sin(pat.theta_rad)
    dens = pat.power_w / theta_factor(pat.theta_rad, pat.phi, sweep_theta_r)
    if centers.size == 1:
        bounds = [(kx[0], kx[-1])]
    else:
        mids = (centers[:-1] + centers[1:]) / 2.0
        lo = np.concatenate([[2 * centers[0] - mids[0]], mids])
        hi = np.concatenate([mids, [2 * centers[-1] - mids[-1]]])
        bounds = list(zip(lo, hi))
    peaks = []
    for a, b in bounds:
        sel = (kx >= a) & (kx <= b)
        th, _ = refined_peak(pat.theta_deg[sel], pat.power_w[sel])
        peaks.append(float(th))
    return peaks


def _run_planes(sc: Scenario, reflected, pad: int, out, artifacts, op_metrics, render):
    zs = np.asarray(sc.planes.z_m, dtype=float)
    op = sc.operation
    field = reflected
    if isinstance(op, WavefrontOp) and op.preset == "airy":
        # the bending lobe and its ballistic tail leave the panel frame long
        # before z_max; profile on a 5x wider window so the peak stays visible
        field = embed_field(reflected, 5)
    plan = PropagationPlan(field.grid, sc.k0, pad_factor=pad)

    axial = np.abs(on_axis_profile(field, zs, plan))
    io.write_csv(
        os.path.join(out, "onaxis.csv"),
        ("z_m", "e_abs"),
        zip(zs.tolist(), axial.tolist()),
    )
    artifacts.append("onaxis.csv")

    x_axis, lines = line_profile_x(field, zs, plan)
    amp = np.abs(lines)
    rows = (
        (float(z), float(x), float(a))
        for z, row in zip(zs, amp)
        for x, a in zip(x_axis, row)
    )
    io.write_csv(os.path.join(out, "profiles.csv"), ("z_m", "x_m", "e_abs"), rows)
    artifacts.append("profiles.csv")

    metrics: dict = {"z_min_m": float(zs.min()), "z_max_m": float(zs.max()), "planes": len(zs)}
    if isinstance(op, WavefrontOp):
        if op.preset == "focus":
            z_pk, _ = refined_peak(zs, axial)
            metrics["axial_peak_z_m"] = z_pk
            metrics["axial_peak_rel_offset"] = z_pk / op.focal_m - 1.0
        elif op.preset == "bessel":
            widths = np.array([halfmax_width(x_axis, row) for row in amp])
            metrics["fwhm_mean_m"] = float(widths.mean())
            metrics["fwhm_min_m"] = float(widths.min())
            metrics["fwhm_max_m"] = float(widths.max())
            metrics["fwhm_variation"] = float((widths.max() - widths.min()) / widths.mean())
        else:  # airy
            rows_out = []
            tracked_until = None
            alive = True
            for z, row in zip(zs, amp):
                x_pk, _ = refined_peak(x_axis, row)
                # the preset's negative phase coefficient launches every local
                # wavenumber toward -x, so the caustic sits on the -x side
                x_exp = -op.bend_per_m * float(z) ** 2
                try:
                    fwhm = halfmax_width(x_axis, row)
                except ValueError:
                    fwhm = None
                within = fwhm is not None and abs(x_pk - x_exp) <= fwhm / 2.0
                if alive and within:
                    tracked_until = float(z)
                elif not within:
                    alive = False
                rows_out.append(
                    (float(z), x_pk, x_exp, "" if fwhm is None else fwhm, int(within))
                )
            io.write_csv(
                os.path.join(out, "tracking.csv"),
                ("z_m", "x_peak_m", "x_expected_m", "fwhm_m", "on_track"),
                rows_out,
            )
            artifacts.append("tracking.csv")
            metrics["tracked_until_z_m"] = tracked_until
            metrics["tracking_max_abs_offset_m"] = float(
                max(abs(r[1] - r[2]) for r in rows_out)
            )

    if sc.planes.save_fields:
        fields = propagate_to_planes(reflected, zs, plan)
        for i, fld in enumerate(fields):
            name = f"plane_{i:04d}.cf64"
            io.save_field(os.path.join(out, name), fld)
            artifacts.append(name)

    render["profiles"] = (zs, x_axis, amp)
    return metrics


# -- the run road ------------------------------------------------------------


def _check_subcommand(subcommand: str, sc: Scenario) -> None:
    if subcommand in GENERIC_SUBCOMMANDS:
        if subcommand == "farfield" and sc.sweep is None:
            raise ValueError(
                f"scenario '{sc.name}' has no far-field sweep; add observation.sweep "
                "or run its own operation subcommand"
            )
        if subcommand == "propagate" and sc.planes is None:
            raise ValueError(
                f"scenario '{sc.name}' has no propagation planes; add observation.planes "
                "or run its own operation subcommand"
            )
        return
    if subcommand not in OP_SUBCOMMANDS:
        raise ValueError(f"unknown subcommand {subcommand!r}")
    if sc.operation.kind != subcommand:
        raise ValueError(
            f"scenario '{sc.name}' carries a '{sc.operation.kind}' operation; run the "
            f"'{sc.operation.kind}' subcommand (or 'farfield'/'propagate' for observations only)"
        )


def run(
    subcommand: str,
    sc: Scenario,
    out: str,
    *,
    seed: int | None = None,
    pad: int | None = None,
    figures: bool = False,
) -> dict:
    """Execute ``sc`` and write all artifacts under ``out``; returns the summary."""
    _check_subcommand(subcommand, sc)
    seed = sc.seed if seed is None else int(seed)
    pad = sc.pad if pad is None else int(pad)
    if pad < 1:
        raise ValueError(f"pad factor must be >= 1, got {pad}")
    os.makedirs(out, exist_ok=True)

    artifacts: list[str] = []
    render: dict = {}

    incident = build_incident(sc)
    mask, reflected, op_metrics, extras = _build_surface(sc, incident, seed)

    if mask is not None:
        io.save_cf64(os.path.join(out, "mask.cf64"), sc.grid, mask.gamma, "mask")
        artifacts.append("mask.cf64")
        render["mask"] = mask
    io.save_field(os.path.join(out, "footprint.cf64"), reflected)
    artifacts.append("footprint.cf64")
    spectrum = forward_spectrum(reflected)
    io.save_spectrum(os.path.join(out, "spectrum.cf64"), spectrum)
    artifacts.append("spectrum.cf64")

    padded = forward_spectrum(embed_field(reflected, pad))
    cut = padded.values[padded.grid.ny // 2, :]
    kx = padded.grid.kx
    io.write_csv(
        os.path.join(out, "spectrum_cut.csv"),
        ("kx_rad_m", "kx_over_k0", "s_abs2"),
        zip(kx.tolist(), (kx / sc.k0).tolist(), (np.abs(cut) ** 2).tolist()),
    )
    artifacts.append("spectrum_cut.csv")
    render["spectrum_cut"] = (kx / sc.k0, np.abs(cut) ** 2)

    if "trace" in extras:
        trace = extras["trace"]
        io.write_csv(
            os.path.join(out, "trace.csv"),
            ("sweep", "objective"),
            enumerate(trace.tolist()),
        )
        artifacts.append("trace.csv")
        render["trace"] = trace
    if "detunings" in extras:
        dmap = extras["detunings"]
        f0 = np.asarray(dmap.f0_ghz, dtype=float)
        gam = mask.gamma
        rows = (
            (ix, iy, float(f0[iy, ix]), float(abs(gam[iy, ix])), float(np.angle(gam[iy, ix])))
            for iy in range(sc.grid.ny)
            for ix in range(sc.grid.nx)
        )
        io.write_csv(
            os.path.join(out, "detunings.csv"),
            ("ix", "iy", "f0_ghz", "gamma_abs", "gamma_arg"),
            rows,
        )
        artifacts.append("detunings.csv")

    p_inc = field_power(incident)
    p_ref = field_power(reflected)

    obs_metrics: dict = {}
    if sc.sweep is not None:
        obs_metrics["sweep"] = _run_sweep(sc, reflected, pad, out, artifacts, op_metrics, render)
    if sc.planes is not None:
        obs_metrics["planes"] = _run_planes(
            sc, reflected, pad, out, artifacts, op_metrics, render
        )

    summary = {
        "schema": SUMMARY_SCHEMA,
        "scenario": {
            "name": sc.name,
            "description": sc.description,
            "frequency_ghz": sc.frequency_ghz,
            "wavelength_m": sc.wavelength_m,
            "k0_rad_m": sc.k0,
            "grid": {"nx": sc.grid.nx, "ny": sc.grid.ny, "dx_m": sc.grid.dx, "dy_m": sc.grid.dy},
            "shape": sc.shape_desc,
            "beam": type(sc.beam).__name__,
            "operation": sc.operation.kind,
        },
        "run": {"subcommand": subcommand, "seed": seed, "pad": pad},
        "power": {
            "incident": p_inc,
            "reflected": p_ref,
            "reflected_over_incident": (p_ref / p_inc) if p_inc > 0 else 0.0,
        },
        "operation": op_metrics,
        "observation": obs_metrics,
        "artifacts": sorted(artifacts + ["summary.json"]),
    }

    if figures:
        from . import figures as figmod

        pngs = figmod.render(out, sc.name, render)
        artifacts.extend(pngs)
        summary["artifacts"] = sorted(artifacts + ["summary.json"])

    io.write_json(os.path.join(out, "summary.json"), summary)
    return summary
