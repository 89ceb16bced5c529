"""Per-sample reflection masks: steering, shaped apertures, multi-beam splits,
band-pass filtering in k, and power-law wavefront phases.

A mask is the complex reflection coefficient sampled on the surface lattice,
``gamma(x, y) = gamma0(x, y) * exp(j*phi(x, y))``.  Multiplying an incident
footprint by a mask and transforming gives the reflected plane-wave spectrum:
the amplitude profile convolves (windows) the spectrum, the linear phase ramp
translates it.  All masks here are built from a :class:`ShapeMask` amplitude
profile times an operation-specific phase.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .numerics import ComplexField2D, Grid2D, Spectrum2D, forward_spectrum, inverse_spectrum

__all__ = [
    "ShapeMask",
    "RISMask",
    "SteerSpec",
    "MultiBeamSpec",
    "FilterSpec",
    "WavefrontSpec",
    "steering_mask",
    "apply_mask",
    "reflected_spectrum",
    "multibeam_mask",
    "bandpass_reflect",
    "wavefront_mask",
]


@dataclass(frozen=True)
class ShapeMask:
    """Real amplitude profile of the surface, values in [0, 1].

    Rectangles cover the half-open box ``[-lx/2, lx/2) x [-ly/2, ly/2)`` so a
    length commensurate with the pitch occupies exactly ``lx/dx`` samples —
    this keeps the discrete aperture width, and therefore the spacing of its
    spectral nulls, equal to the requested length.
    """

    kind: str
    lx: float = 0.0
    ly: float = 0.0
    radius: float = 0.0
    lobes: int = 1
    fn: Callable[[np.ndarray, np.ndarray], np.ndarray] | None = None

    @classmethod
    def rect(cls, lx: float, ly: float) -> "ShapeMask":
        if not (lx > 0 and ly > 0):
            raise ValueError(f"rectangle sides must be positive, got {lx} x {ly}")
        return cls("rect", lx=lx, ly=ly)

    @classmethod
    def circle(cls, radius: float) -> "ShapeMask":
        if not radius > 0:
            raise ValueError(f"circle radius must be positive, got {radius}")
        return cls("circle", radius=radius)

    @classmethod
    def sinc_taper(cls, lx: float, ly: float, lobes: int = 1) -> "ShapeMask":
        """|sinc| amplitude taper over a rect aperture; ``lobes`` zeros per half-side."""
        if not (lx > 0 and ly > 0):
            raise ValueError(f"taper sides must be positive, got {lx} x {ly}")
        if lobes < 1:
            raise ValueError(f"taper needs at least one lobe, got {lobes}")
        return cls("sinc", lx=lx, ly=ly, lobes=lobes)

    @classmethod
    def full(cls) -> "ShapeMask":
        """Unit amplitude over the whole grid (effectively unbounded surface)."""
        return cls("full")

    @classmethod
    def custom(cls, fn: Callable[[np.ndarray, np.ndarray], np.ndarray]) -> "ShapeMask":
        """Arbitrary profile ``fn(X, Y) -> values in [0, 1]``."""
        return cls("custom", fn=fn)

    def sample(self, grid: Grid2D) -> np.ndarray:
        """Evaluate the profile on the grid; checks the support fits inside it."""
        X, Y = grid.xy()
        if self.kind == "full":
            out = np.ones((grid.ny, grid.nx))
        elif self.kind == "rect":
            self._check_fits(grid, self.lx, self.ly)
            out = (self._box(X, self.lx) & self._box(Y, self.ly)).astype(float)
        elif self.kind == "circle":
            self._check_fits(grid, 2 * self.radius, 2 * self.radius)
            out = ((X**2 + Y**2) <= self.radius**2).astype(float)
        elif self.kind == "sinc":
            self._check_fits(grid, self.lx, self.ly)
            box = self._box(X, self.lx) & self._box(Y, self.ly)
            taper = np.abs(np.sinc(2 * self.lobes * X / self.lx)) * np.abs(
                np.sinc(2 * self.lobes * Y / self.ly)
            )
            out = np.where(box, taper, 0.0)
        elif self.kind == "custom":
            if self.fn is None:
                raise ValueError("custom shape requires a sampling function")
            out = np.asarray(self.fn(X, Y), dtype=float)
            out = np.broadcast_to(out, (grid.ny, grid.nx)).copy()
            if out.min() < 0 or out.max() > 1:
                raise ValueError(
                    f"shape values must lie in [0, 1], got range "
                    f"[{out.min():.3g}, {out.max():.3g}]"
                )
        else:
            raise ValueError(f"unknown shape kind {self.kind!r}")
        return np.broadcast_to(out, (grid.ny, grid.nx)).astype(float)

    @staticmethod
    def _box(u: np.ndarray, length: float) -> np.ndarray:
        return (u >= -length / 2) & (u < length / 2)

    @staticmethod
    def _check_fits(grid: Grid2D, lx: float, ly: float) -> None:
        if lx > grid.extent_x + 1e-12 * grid.extent_x or ly > grid.extent_y + 1e-12 * grid.extent_y:
            raise ValueError(
                f"shape support {lx:.4g} x {ly:.4g} m does not fit inside the "
                f"grid extent {grid.extent_x:.4g} x {grid.extent_y:.4g} m"
            )


@dataclass(frozen=True)
class RISMask:
    """Complex reflection coefficient per sample plus an operation descriptor."""

    grid: Grid2D
    gamma: np.ndarray
    info: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        vals = np.asarray(self.gamma)
        if vals.shape != (self.grid.ny, self.grid.nx):
            raise ValueError(
                f"mask shape {vals.shape} does not match grid ({self.grid.ny}, {self.grid.nx})"
            )
        vals = np.ascontiguousarray(vals, dtype=np.complex128).copy()
        if not np.all(np.isfinite(vals.real) & np.isfinite(vals.imag)):
            raise ValueError("mask contains non-finite samples")
        vals.setflags(write=False)
        object.__setattr__(self, "gamma", vals)

    @property
    def peak_gamma(self) -> float:
        """Largest |gamma| on the surface; > 1 flags a locally active mask."""
        return float(np.max(np.abs(self.gamma)))


def _check_tilt(grid: Grid2D, k: float, what: str) -> None:
    if abs(k) >= grid.kx_nyquist:
        raise ValueError(
            f"grid cannot resolve {what}: |k| = {abs(k):.6g} rad/m >= "
            f"Nyquist pi/dx = {grid.kx_nyquist:.6g} rad/m"
        )


@dataclass(frozen=True)
class SteerSpec:
    """Single-beam anomalous reflection theta_i -> theta_r at amplitude gamma0."""

    theta_i: float
    theta_r: float
    k0: float
    gamma0: float = 1.0

    def __post_init__(self) -> None:
        for name, th in (("theta_i", self.theta_i), ("theta_r", self.theta_r)):
            if not abs(th) < np.pi / 2:
                raise ValueError(f"|{name}| must be below pi/2, got {th}")
        if not self.k0 > 0:
            raise ValueError(f"carrier wavenumber must be positive, got {self.k0}")
        if not 0 < self.gamma0 <= 1:
            raise ValueError(f"gamma0 must lie in (0, 1], got {self.gamma0}")

    @property
    def k_i(self) -> float:
        return self.k0 * np.sin(self.theta_i)

    @property
    def k_r(self) -> float:
        return self.k0 * np.sin(self.theta_r)


def steering_mask(spec: SteerSpec, shape: ShapeMask, grid: Grid2D) -> RISMask:
    """gamma = gamma0 * shape * exp(+j (k_r - k_i) x).

    The ramp translates the incident spectrum by ``k_r - k_i``; the shape
    window convolves it.  Both the ramp and the steered carrier must be
    resolvable on the grid.
    """
    dk = spec.k_r - spec.k_i
    _check_tilt(grid, dk, "the steering phase ramp")
    _check_tilt(grid, spec.k_r, "the steered carrier")
    profile = shape.sample(grid)
    X, _ = grid.xy()
    gamma = spec.gamma0 * profile * np.exp(1j * dk * X)
    info = {
        "operation": "steer",
        "theta_i_deg": float(np.degrees(spec.theta_i)),
        "theta_r_deg": float(np.degrees(spec.theta_r)),
        "gamma0": spec.gamma0,
        "shape": shape.kind,
    }
    return RISMask(grid, gamma, info)


def apply_mask(mask: RISMask, incident: ComplexField2D) -> ComplexField2D:
    """Pointwise reflection: E_r = gamma * E_i on the shared grid."""
    if incident.grid != mask.grid:
        raise ValueError("mask and incident field live on different grids")
    return ComplexField2D(mask.grid, mask.gamma * incident.values)


def reflected_spectrum(mask: RISMask, incident: ComplexField2D) -> Spectrum2D:
    """Plane-wave spectrum of the reflected field (modulation of the incident one)."""
    return forward_spectrum(apply_mask(mask, incident))


@dataclass(frozen=True)
class MultiBeamSpec:
    """Split one incident beam into weighted beams toward several angles.

    ``beams`` is a sequence of ``(theta_r, weight)`` pairs; weights are
    relative amplitudes (>= 0, at least one positive).
    """

    theta_i: float
    k0: float
    beams: tuple[tuple[float, float], ...]

    def __post_init__(self) -> None:
        beams = tuple((float(t), float(w)) for t, w in self.beams)
        if len(beams) < 1:
            raise ValueError("need at least one outgoing beam")
        if not abs(self.theta_i) < np.pi / 2:
            raise ValueError(f"|theta_i| must be below pi/2, got {self.theta_i}")
        if not self.k0 > 0:
            raise ValueError(f"carrier wavenumber must be positive, got {self.k0}")
        for t, w in beams:
            if not abs(t) < np.pi / 2:
                raise ValueError(f"|theta_r| must be below pi/2, got {t}")
            if w < 0:
                raise ValueError(f"beam weights must be nonnegative, got {w}")
        if not any(w > 0 for _, w in beams):
            raise ValueError("at least one beam weight must be positive")
        object.__setattr__(self, "beams", beams)

    @property
    def k_i(self) -> float:
        return self.k0 * np.sin(self.theta_i)


def multibeam_mask(
    spec: MultiBeamSpec,
    shape: ShapeMask,
    grid: Grid2D,
    incident: ComplexField2D | None = None,
) -> RISMask:
    """Superpose steering ramps and normalize so reflection conserves power.

    gamma = (shape / w0) * sum_n w_n exp(+j (k_{r,n} - k_i) x)

    ``w0`` is chosen so the reflected power over the mask support equals the
    incident power over the support.  With ``incident`` given, the incident
    footprint weights the normalization integral; without it the illumination
    is taken as uniform over the support.  The composite may exceed |gamma|=1
    in spots; the peak is recorded in ``info`` rather than clipped, since
    clipping would break the power equality.
    """
    profile = shape.sample(grid)
    support = profile > 0
    if not np.any(support):
        raise ValueError("shape support is empty on this grid")
    X, _ = grid.xy()
    ramp_sum = np.zeros((grid.ny, grid.nx), dtype=np.complex128)
    for theta_r, w in spec.beams:
        k_r = spec.k0 * np.sin(theta_r)
        _check_tilt(grid, k_r - spec.k_i, "a multibeam phase ramp")
        _check_tilt(grid, k_r, "a steered carrier")
        if w > 0:
            ramp_sum += w * np.exp(1j * (k_r - spec.k_i) * X)
    composite = profile * ramp_sum

    if incident is not None:
        if incident.grid != grid:
            raise ValueError("incident field grid does not match the mask grid")
        weight = np.abs(incident.values) ** 2
    else:
        weight = np.ones((grid.ny, grid.nx))
    denom = float(np.sum(weight[support]))
    if denom <= 0:
        raise ValueError("incident field carries no power on the mask support")
    w0_sq = float(np.sum(weight[support] * np.abs(composite[support]) ** 2)) / denom
    if w0_sq <= 0:
        raise ValueError("composite mask vanishes on the support; cannot normalize")
    gamma = composite / np.sqrt(w0_sq)

    info = {
        "operation": "multibeam",
        "theta_i_deg": float(np.degrees(spec.theta_i)),
        "beams": [
            {"theta_r_deg": float(np.degrees(t)), "weight": w} for t, w in spec.beams
        ],
        "w0": float(np.sqrt(w0_sq)),
        "normalization": "footprint-weighted" if incident is not None else "uniform",
        "shape": shape.kind,
        "peak_gamma": float(np.max(np.abs(gamma))),
    }
    return RISMask(grid, gamma, info)


@dataclass(frozen=True)
class FilterSpec:
    """Gaussian pass-band in kx: admit content near ``k_center`` with 1-sigma
    width ``k_width``, then send it toward ``k_target``."""

    k_center: float
    k_width: float
    k_target: float

    def __post_init__(self) -> None:
        if not self.k_width > 0:
            raise ValueError(f"filter width must be positive, got {self.k_width}")


def bandpass_reflect(spec: FilterSpec, incident: ComplexField2D) -> ComplexField2D:
    """Filter the incident spectrum around ``k_center``, then steer to ``k_target``.

    Spectral route: forward transform, multiply by
    ``exp(-(kx - k_center)^2 / (2 k_width^2))``, inverse transform, apply the
    ``k_target - k_center`` ramp.  A plane wave exactly at the pass center is
    steered losslessly; one offset by ``dk`` is attenuated by
    ``exp(-dk^2 / (2 k_width^2))``.
    """
    grid = incident.grid
    if spec.k_width < grid.dkx:
        raise ValueError(
            f"filter width {spec.k_width:.6g} rad/m is below one spectral bin "
            f"dkx = {grid.dkx:.6g} rad/m and cannot be resolved; enlarge the grid"
        )
    _check_tilt(grid, spec.k_center, "the filter pass center")
    _check_tilt(grid, spec.k_target, "the steered carrier")
    _check_tilt(grid, spec.k_target - spec.k_center, "the steering phase ramp")

    spectrum = forward_spectrum(incident)
    h = np.exp(-((grid.kx - spec.k_center) ** 2) / (2.0 * spec.k_width**2))
    filtered = inverse_spectrum(Spectrum2D(grid, spectrum.values * h[None, :]))
    X, _ = grid.xy()
    out = filtered.values * np.exp(1j * (spec.k_target - spec.k_center) * X)
    return ComplexField2D(grid, out)


@dataclass(frozen=True)
class WavefrontSpec:
    """Power-law phase profile ``a * rho**exponent`` written onto the surface.

    ``symmetry='radial'`` uses rho = sqrt(x^2+y^2); ``'x_only'`` uses
    sign(x)*|x|**exponent, the antisymmetric continuation that makes
    non-integer exponents well defined for x < 0.  The incident tilt
    ``k0 sin(theta_i)`` is removed by the mask so the profile is imposed on a
    flattened wavefront.
    """

    a: float
    exponent: float
    symmetry: str
    theta_i: float
    k0: float

    def __post_init__(self) -> None:
        if not self.exponent > 0:
            raise ValueError(f"phase exponent must be positive, got {self.exponent}")
        if self.symmetry not in ("radial", "x_only"):
            raise ValueError(f"symmetry must be 'radial' or 'x_only', got {self.symmetry!r}")
        if not abs(self.theta_i) < np.pi / 2:
            raise ValueError(f"|theta_i| must be below pi/2, got {self.theta_i}")
        if not self.k0 > 0:
            raise ValueError(f"carrier wavenumber must be positive, got {self.k0}")

    @property
    def k_i(self) -> float:
        return self.k0 * np.sin(self.theta_i)

    # -- presets --------------------------------------------------------

    @classmethod
    def focus(cls, focal_distance: float, k0: float, theta_i: float = 0.0) -> "WavefrontSpec":
        """Parabolic phase that converges at ``focal_distance`` (paraxially)."""
        if not focal_distance > 0:
            raise ValueError(f"focal distance must be positive, got {focal_distance}")
        return cls(a=-k0 / (2.0 * focal_distance), exponent=2.0, symmetry="radial",
                   theta_i=theta_i, k0=k0)

    @classmethod
    def bessel(cls, k0: float, cone: float = 0.0125, theta_i: float = 0.0) -> "WavefrontSpec":
        """Conical (axicon) phase: non-diffracting core over a finite range.

        ``cone`` is the transverse tilt sin(alpha) ~ alpha of the cone rays.
        """
        if not cone > 0:
            raise ValueError(f"cone slope must be positive, got {cone}")
        return cls(a=-k0 * cone, exponent=1.0, symmetry="radial", theta_i=theta_i, k0=k0)

    @classmethod
    def airy(cls, k0: float, bend: float = 0.0025, theta_i: float = 0.0) -> "WavefrontSpec":
        """3/2-power phase: one-sided beam whose lobe drifts along x = bend * z^2."""
        if not bend > 0:
            raise ValueError(f"bend rate must be positive, got {bend}")
        return cls(a=-(4.0 / 3.0) * k0 * np.sqrt(bend), exponent=1.5, symmetry="x_only",
                   theta_i=theta_i, k0=k0)


def wavefront_mask(spec: WavefrontSpec, shape: ShapeMask, grid: Grid2D) -> RISMask:
    """gamma = shape * exp(-j k_i x) * exp(+j a rho^exponent).

    The local transverse wavenumber ``|a| * exponent * rho^(exponent-1)`` plus
    the flattening tilt must stay below Nyquist everywhere on the support.
    """
    profile = shape.sample(grid)
    support = profile > 0
    X, Y = grid.xy()
    if spec.symmetry == "radial":
        rho = np.sqrt(X**2 + Y**2)
        phase_arg = rho**spec.exponent
    else:
        rho = np.abs(X) * np.ones_like(Y)
        phase_arg = np.sign(X) * np.abs(X) ** spec.exponent

    # steepest local k the phase asks for, over the illuminated support
    rho_sup = np.broadcast_to(rho, (grid.ny, grid.nx))[support]
    grad = np.abs(spec.a) * spec.exponent * rho_sup ** (spec.exponent - 1.0)
    worst = float(np.max(grad)) if grad.size else 0.0
    k_limit = min(grid.kx_nyquist, grid.ky_nyquist)
    if worst + abs(spec.k_i) >= k_limit:
        r_bad = float(rho_sup[np.argmax(grad)])
        raise ValueError(
            f"wavefront phase is undersampled at rho = {r_bad:.4g} m: local "
            f"|grad phi| = {worst + abs(spec.k_i):.6g} rad/m >= Nyquist "
            f"{k_limit:.6g} rad/m; shrink the support or refine the pitch"
        )

    gamma = profile * np.exp(1j * (spec.a * phase_arg - spec.k_i * X))
    info = {
        "operation": "wavefront",
        "a": spec.a,
        "exponent": spec.exponent,
        "symmetry": spec.symmetry,
        "theta_i_deg": float(np.degrees(spec.theta_i)),
        "shape": shape.kind,
    }
    return RISMask(grid, np.broadcast_to(gamma, (grid.ny, grid.nx)), info)
