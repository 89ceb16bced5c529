"""Scenario files: versioned JSON descriptions of complete runs.

A scenario pins everything a run needs — frequency, grid, surface shape,
illumination, the operation to program, and optionally where to observe the
result.  Angles are degrees in the files and converted to radians only where
library objects are built; pitches may be given as fractions of the derived
wavelength ("lambda/5") or in meters.  Validation is strict: unknown or
ill-typed fields fail with the dotted path of the offending entry.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass
from importlib import resources

from ..numerics import Grid2D
from ..ris import ShapeMask

C_LIGHT = 299792458.0
SCHEMA_ID = "ris-kspace/1"

OPERATION_KINDS = ("steer", "multibeam", "bandpass", "wavefront", "optimize")
WAVEFRONT_PRESETS = ("focus", "bessel", "airy")
SWEEP_ROUTES = ("numeric", "analytic")


class ScenarioError(ValueError):
    """A scenario file failed validation; the message names the field."""


def _fail(path: str, message: str):
    raise ScenarioError(f"{path}: {message}")


def _require_dict(value, path: str) -> dict:
    if not isinstance(value, dict):
        _fail(path, f"expected an object, got {type(value).__name__}")
    return value


class _Section:
    """One dict level of the file; tracks consumed keys to reject unknowns."""

    def __init__(self, data: dict, path: str):
        self.data = data
        self.path = path
        self.seen: set[str] = set()

    def _get(self, key: str, required: bool, default):
        self.seen.add(key)
        if key not in self.data:
            if required:
                _fail(f"{self.path}.{key}" if self.path else key, "missing required field")
            return default
        return self.data[key]

    def number(self, key, *, required=True, default=None, minimum=None,
               maximum=None, exclusive=False):
        value = self._get(key, required, default)
        if value is default and not required and key not in self.data:
            return default
        where = f"{self.path}.{key}" if self.path else key
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            _fail(where, f"expected a number, got {value!r}")
        value = float(value)
        if minimum is not None and (value <= minimum if exclusive else value < minimum):
            _fail(where, f"must be {'>' if exclusive else '>='} {minimum}, got {value}")
        if maximum is not None and (value >= maximum if exclusive else value > maximum):
            _fail(where, f"must be {'<' if exclusive else '<='} {maximum}, got {value}")
        return value

    def integer(self, key, *, required=True, default=None, minimum=None):
        value = self._get(key, required, default)
        if value is default and not required and key not in self.data:
            return default
        where = f"{self.path}.{key}" if self.path else key
        if isinstance(value, bool) or not isinstance(value, int):
            _fail(where, f"expected an integer, got {value!r}")
        if minimum is not None and value < minimum:
            _fail(where, f"must be >= {minimum}, got {value}")
        return value

    def string(self, key, *, required=True, default=None, choices=None):
        value = self._get(key, required, default)
        if value is default and not required and key not in self.data:
            return default
        where = f"{self.path}.{key}" if self.path else key
        if not isinstance(value, str):
            _fail(where, f"expected a string, got {value!r}")
        if choices is not None and value not in choices:
            _fail(where, f"must be one of {list(choices)}, got {value!r}")
        return value

    def boolean(self, key, *, default=False):
        value = self._get(key, False, default)
        where = f"{self.path}.{key}" if self.path else key
        if not isinstance(value, bool):
            _fail(where, f"expected true/false, got {value!r}")
        return value

    def array(self, key, *, required=True, default=None):
        value = self._get(key, required, default)
        if value is default and not required and key not in self.data:
            return default
        where = f"{self.path}.{key}" if self.path else key
        if not isinstance(value, list):
            _fail(where, f"expected an array, got {value!r}")
        return value

    def section(self, key, *, required=True):
        value = self._get(key, required, None)
        if value is None:
            return None
        where = f"{self.path}.{key}" if self.path else key
        return _Section(_require_dict(value, where), where)

    def finish(self):
        unknown = sorted(set(self.data) - self.seen)
        if unknown:
            _fail(self.path or "top level", f"unknown field(s): {', '.join(unknown)}")


@dataclass(frozen=True)
class PlaneBeam:
    theta_i_deg: float
    e0: float
    interferers: tuple[tuple[float, float], ...] = ()


@dataclass(frozen=True)
class GaussianBeam:
    theta_i_deg: float
    e0: float
    waist_m: float


@dataclass(frozen=True)
class ApBeam:
    theta_i_deg: float
    power_w: float
    gain_db: float
    distance_m: float


@dataclass(frozen=True)
class SteerOp:
    theta_r_deg: float
    kind: str = "steer"


@dataclass(frozen=True)
class MultibeamOp:
    theta_r_deg: tuple[float, ...]
    weights: tuple[float, ...]
    normalize: str
    kind: str = "multibeam"


@dataclass(frozen=True)
class BandpassOp:
    width_k0: float
    target_theta_deg: float
    center_theta_deg: float | None
    kind: str = "bandpass"


@dataclass(frozen=True)
class WavefrontOp:
    preset: str
    focal_m: float | None
    cone: float | None
    bend_per_m: float | None
    kind: str = "wavefront"


@dataclass(frozen=True)
class OptimizeOp:
    theta_r_deg: float
    gamma_e_ghz: float
    a_e_ghz: float
    max_sweeps: int
    tol: float
    kind: str = "optimize"


@dataclass(frozen=True)
class Sweep:
    r_m: float
    a_r_m2: float
    theta_min_deg: float
    theta_max_deg: float
    points: int
    routes: tuple[str, ...]
    phi_deg: float


@dataclass(frozen=True)
class Planes:
    z_m: tuple[float, ...]
    save_fields: bool


@dataclass(frozen=True)
class Scenario:
    name: str
    description: str
    frequency_ghz: float
    wavelength_m: float
    k0: float
    grid: Grid2D
    shape: ShapeMask
    shape_desc: str
    beam: PlaneBeam | GaussianBeam | ApBeam
    operation: SteerOp | MultibeamOp | BandpassOp | WavefrontOp | OptimizeOp
    sweep: Sweep | None
    planes: Planes | None
    pad: int
    seed: int


def _parse_pitch(value, wavelength: float, path: str) -> float:
    if isinstance(value, str):
        head, sep, tail = value.partition("/")
        if head.strip() != "lambda" or not sep:
            _fail(path, f'pitch strings look like "lambda/5", got {value!r}')
        try:
            denom = float(tail)
        except ValueError:
            _fail(path, f"pitch denominator is not a number in {value!r}")
        if denom <= 0:
            _fail(path, f"pitch denominator must be positive, got {denom}")
        return wavelength / denom
    if isinstance(value, bool) or not isinstance(value, (int, float)) or value <= 0:
        _fail(path, f"expected meters or a lambda fraction, got {value!r}")
    return float(value)


def _parse_grid(section: _Section, wavelength: float) -> Grid2D:
    nx = section.integer("nx", minimum=2)
    ny = section.integer("ny", minimum=2)
    pitch = section._get("pitch", True, None)
    dx = _parse_pitch(pitch, wavelength, f"{section.path}.pitch")
    section.finish()
    try:
        return Grid2D(nx, ny, dx, dx)
    except ValueError as exc:
        _fail(section.path, str(exc))


def _parse_shape(section: _Section, grid: Grid2D) -> tuple[ShapeMask, str]:
    kind = section.string("kind", choices=("full", "rect", "circle", "sinc"))
    try:
        if kind == "full":
            shape, desc = ShapeMask.full(), "full"
        elif kind == "rect":
            lx = section.number("lx_m", minimum=0, exclusive=True)
            ly = section.number("ly_m", minimum=0, exclusive=True)
            shape, desc = ShapeMask.rect(lx, ly), f"rect {lx} x {ly} m"
        elif kind == "circle":
            radius = section.number("radius_m", minimum=0, exclusive=True)
            shape, desc = ShapeMask.circle(radius), f"circle r = {radius} m"
        else:
            lx = section.number("lx_m", minimum=0, exclusive=True)
            ly = section.number("ly_m", minimum=0, exclusive=True)
            lobes = section.integer("lobes", required=False, default=1, minimum=1)
            shape = ShapeMask.sinc_taper(lx, ly, lobes)
            desc = f"sinc taper {lx} x {ly} m, {lobes} lobe(s)"
        section.finish()
        shape.sample(grid)  # surfaces "does not fit" errors at load time
    except ScenarioError:
        raise
    except ValueError as exc:
        _fail(section.path, str(exc))
    return shape, desc


def _parse_beam(section: _Section):
    kind = section.string("kind", choices=("plane", "gaussian", "ap"))
    theta = section.number("theta_i_deg", minimum=-90.0, maximum=90.0, exclusive=True)
    if kind == "plane":
        e0 = section.number("e0", required=False, default=1.0, minimum=0, exclusive=True)
        waves = []
        extra = section.array("interferers", required=False, default=[])
        for i, item in enumerate(extra):
            sub = _Section(
                _require_dict(item, f"{section.path}.interferers[{i}]"),
                f"{section.path}.interferers[{i}]",
            )
            th = sub.number("theta_i_deg", minimum=-90.0, maximum=90.0, exclusive=True)
            amp = sub.number("e0", required=False, default=1.0, minimum=0, exclusive=True)
            sub.finish()
            waves.append((th, amp))
        section.finish()
        return PlaneBeam(theta, e0, tuple(waves))
    if kind == "gaussian":
        e0 = section.number("e0", required=False, default=1.0, minimum=0, exclusive=True)
        waist = section.number("waist_m", minimum=0, exclusive=True)
        section.finish()
        return GaussianBeam(theta, e0, waist)
    power = section.number("power_w", minimum=0, exclusive=True)
    gain = section.number("gain_db")
    distance = section.number("distance_m", minimum=0, exclusive=True)
    section.finish()
    return ApBeam(theta, power, gain, distance)


def _parse_operation(section: _Section):
    kind = section.string("kind", choices=OPERATION_KINDS)
    if kind == "steer":
        theta_r = section.number("theta_r_deg", minimum=-90.0, maximum=90.0, exclusive=True)
        section.finish()
        return SteerOp(theta_r)
    if kind == "multibeam":
        angles = section.array("theta_r_deg")
        where = f"{section.path}.theta_r_deg"
        if not angles:
            _fail(where, "needs at least one angle")
        for a in angles:
            if isinstance(a, bool) or not isinstance(a, (int, float)) or abs(a) >= 90:
                _fail(where, f"angles must be numbers inside (-90, 90), got {a!r}")
        weights = section.array("weights", required=False, default=[1.0] * len(angles))
        if len(weights) != len(angles):
            _fail(f"{section.path}.weights", f"expected {len(angles)} weights, got {len(weights)}")
        for w in weights:
            if isinstance(w, bool) or not isinstance(w, (int, float)) or w < 0:
                _fail(f"{section.path}.weights", f"weights must be nonnegative numbers, got {w!r}")
        normalize = section.string("normalize", required=False, default="incident",
                                   choices=("incident", "uniform"))
        section.finish()
        return MultibeamOp(tuple(float(a) for a in angles),
                           tuple(float(w) for w in weights), normalize)
    if kind == "bandpass":
        width = section.number("width_k0", minimum=0, exclusive=True)
        target = section.number("target_theta_deg", minimum=-90.0, maximum=90.0, exclusive=True)
        center = section.number("center_theta_deg", required=False, default=None,
                                minimum=-90.0, maximum=90.0, exclusive=True)
        section.finish()
        return BandpassOp(width, target, center)
    if kind == "wavefront":
        preset = section.string("preset", choices=WAVEFRONT_PRESETS)
        focal = section.number("focal_m", required=(preset == "focus"), default=None,
                               minimum=0, exclusive=True)
        cone = section.number("cone", required=False,
                              default=0.0125 if preset == "bessel" else None,
                              minimum=0, exclusive=True)
        bend = section.number("bend_per_m", required=False,
                              default=0.0025 if preset == "airy" else None,
                              minimum=0, exclusive=True)
        section.finish()
        return WavefrontOp(preset, focal, cone, bend)
    theta_r = section.number("theta_r_deg", minimum=-90.0, maximum=90.0, exclusive=True)
    gamma_e = section.number("gamma_e_ghz", minimum=0, exclusive=True)
    a_e = section.number("a_e_ghz", minimum=0, exclusive=True)
    max_sweeps = section.integer("max_sweeps", required=False, default=50, minimum=1)
    tol = section.number("tol", required=False, default=1e-6, minimum=0, exclusive=True)
    section.finish()
    return OptimizeOp(theta_r, gamma_e, a_e, max_sweeps, tol)


def _parse_observation(section: _Section | None) -> tuple[Sweep | None, Planes | None, int]:
    if section is None:
        return None, None, 2
    sweep = None
    sweep_section = section.section("sweep", required=False)
    if sweep_section is not None:
        r = sweep_section.number("r_m", minimum=0, exclusive=True)
        a_r = sweep_section.number("a_r_m2", minimum=0, exclusive=True)
        t0 = sweep_section.number("theta_min_deg", minimum=-90.0, maximum=90.0, exclusive=True)
        t1 = sweep_section.number("theta_max_deg", minimum=-90.0, maximum=90.0, exclusive=True)
        if t1 <= t0:
            _fail(f"{sweep_section.path}.theta_max_deg", "sweep range is empty")
        points = sweep_section.integer("points", minimum=2)
        routes = sweep_section.array("routes", required=False, default=["numeric"])
        for route in routes:
            if route not in SWEEP_ROUTES:
                _fail(f"{sweep_section.path}.routes", f"must be among {list(SWEEP_ROUTES)}, got {route!r}")
        if not routes:
            _fail(f"{sweep_section.path}.routes", "needs at least one route")
        phi = sweep_section.number("phi_deg", required=False, default=0.0)
        sweep_section.finish()
        sweep = Sweep(r, a_r, t0, t1, points, tuple(dict.fromkeys(routes)), phi)
    planes = None
    planes_section = section.section("planes", required=False)
    if planes_section is not None:
        if "z_m" in planes_section.data:
            zs = planes_section.array("z_m")
            where = f"{planes_section.path}.z_m"
            for z in zs:
                if isinstance(z, bool) or not isinstance(z, (int, float)) or z < 0:
                    _fail(where, f"distances must be nonnegative numbers, got {z!r}")
            if len(zs) < 1:
                _fail(where, "needs at least one plane")
            if any(b <= a for a, b in zip(zs, zs[1:])):
                _fail(where, "distances must be strictly increasing")
            zs = [float(z) for z in zs]
        else:
            z0 = planes_section.number("z_min_m", minimum=0)
            z1 = planes_section.number("z_max_m", minimum=0)
            if z1 <= z0:
                _fail(f"{planes_section.path}.z_max_m", "plane range is empty")
            points = planes_section.integer("points", minimum=2)
            step = (z1 - z0) / (points - 1)
            zs = [z0 + i * step for i in range(points)]
        save_fields = planes_section.boolean("save_fields", default=False)
        planes_section.finish()
        planes = Planes(tuple(zs), save_fields)
    pad = section.integer("pad", required=False, default=2, minimum=1)
    section.finish()
    return sweep, planes, pad


def parse_scenario(data, *, fallback_name: str = "") -> Scenario:
    """Validate a decoded JSON document and resolve it into library terms."""
    top = _Section(_require_dict(data, "top level"), "")
    schema = top.string("schema")
    if schema != SCHEMA_ID:
        _fail("schema", f"expected {SCHEMA_ID!r}, got {schema!r}")
    name = top.string("name", required=not fallback_name, default=fallback_name)
    description = top.string("description", required=False, default="")
    freq = top.number("frequency_ghz", minimum=0, exclusive=True)
    wavelength = C_LIGHT / (freq * 1e9)
    grid = _parse_grid(top.section("grid"), wavelength)
    shape, shape_desc = _parse_shape(top.section("shape"), grid)
    beam = _parse_beam(top.section("beam"))
    operation = _parse_operation(top.section("operation"))
    sweep, planes, pad = _parse_observation(top.section("observation", required=False))
    seed = top.integer("seed", required=False, default=0, minimum=0)
    top.finish()
    return Scenario(
        name=name,
        description=description,
        frequency_ghz=freq,
        wavelength_m=wavelength,
        k0=2.0 * math.pi / wavelength,
        grid=grid,
        shape=shape,
        shape_desc=shape_desc,
        beam=beam,
        operation=operation,
        sweep=sweep,
        planes=planes,
        pad=pad,
        seed=seed,
    )


def bundled_scenarios() -> list[str]:
    """Names of the scenario files shipped inside the package, sorted."""
    root = resources.files("ris_kspace.scenarios")
    return sorted(
        entry.name[: -len(".json")]
        for entry in root.iterdir()
        if entry.name.endswith(".json")
    )


def load_scenario(name_or_path: str) -> Scenario:
    """Load a scenario from a file path or a bundled name."""
    if os.path.exists(name_or_path):
        text = open(name_or_path, "r", encoding="utf-8").read()
        fallback = os.path.splitext(os.path.basename(name_or_path))[0]
    else:
        candidate = resources.files("ris_kspace.scenarios") / f"{name_or_path}.json"
        if not candidate.is_file():
            known = ", ".join(bundled_scenarios())
            raise ScenarioError(
                f"{name_or_path!r} is neither a file nor a bundled scenario "
                f"(bundled: {known})"
            )
        text = candidate.read_text(encoding="utf-8")
        fallback = name_or_path
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(
            f"{name_or_path}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from None
    return parse_scenario(data, fallback_name=fallback)
