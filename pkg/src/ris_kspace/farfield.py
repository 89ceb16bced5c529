"""Received power far from the surface: closed-form path and FFT cross-check.

For an observer at (r, theta, phi) beyond the Fraunhofer distance, the
received power follows from a single sample of the reflected plane-wave
spectrum at the observation direction:

    P_r = A_r * (k0^2 / 2 Z0) * Theta(theta, phi; theta_r)
          * |(2 pi)^2 * S(kx, ky)|^2 / (4 pi r)^2,

with kx = k0 sin(theta) cos(phi), ky = k0 sin(theta) sin(phi).  ``S`` is a
spectrum in the 1/(2 pi)^2 convention of :mod:`ris_kspace.numerics`; the
(2 pi)^2 factor converts it to the unnormalized transform the radiation
integral wants.  ``Theta`` is the polarization/obliquity weight of the
aperture radiation problem.

Two interchangeable spectrum sources exist: the closed-form one for a
Gaussian beam on a rectangular surface (erf window), and bilinear
interpolation of a zero-padded FFT of any reflected footprint.  Their
agreement is the package's central validation.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dfield
from typing import Callable

import numpy as np

from .beams import GaussianBeamSpec, Z0, gaussian_spectrum
from .numerics import (
    ComplexField2D,
    ERF_IMAG_LIMIT,
    Spectrum2D,
    complex_erf,
    embed_field,
    forward_spectrum,
)
from .propagation import PropagationPlan

__all__ = [
    "Observation",
    "FarFieldPattern",
    "theta_factor",
    "fraunhofer_distance",
    "AnalyticReflectedSpectrum",
    "analytic_reflected_spectrum",
    "numeric_reflected_spectrum",
    "received_power_analytic",
    "received_power_numeric",
    "pattern_sweep",
    "lobe_masses",
]


@dataclass(frozen=True)
class Observation:
    """Receiver location in spherical coordinates plus its effective aperture."""

    r: float
    theta: float
    phi: float
    a_r: float

    def __post_init__(self) -> None:
        if not self.r > 0:
            raise ValueError(f"observation distance must be positive, got {self.r}")
        if not (0 <= self.theta < np.pi / 2):
            raise ValueError(f"theta must lie in [0, pi/2), got {self.theta}")
        if not self.a_r > 0:
            raise ValueError(f"receiver aperture must be positive, got {self.a_r}")

    @property
    def kxy(self) -> tuple[float, float]:
        """Transverse wavevector direction of the observation ray, per unit k0."""
        return (
            float(np.sin(self.theta) * np.cos(self.phi)),
            float(np.sin(self.theta) * np.sin(self.phi)),
        )


def theta_factor(theta, phi, theta_r):
    """Obliquity/polarization weight of the radiating aperture.

    Theta = sin^2(phi) (1 + cos(theta) cos(theta_r))^2
          + cos^2(phi) (cos(theta) + cos(theta_r))^2
    """
    ct, cr = np.cos(theta), np.cos(theta_r)
    return np.sin(phi) ** 2 * (1 + ct * cr) ** 2 + np.cos(phi) ** 2 * (ct + cr) ** 2


def fraunhofer_distance(lx: float, ly: float, wavelength: float) -> float:
    """2 D^2 / lambda with D the larger aperture side."""
    if not (lx > 0 and ly > 0 and wavelength > 0):
        raise ValueError("aperture sides and wavelength must be positive")
    return 2.0 * max(lx, ly) ** 2 / wavelength


@dataclass(frozen=True)
class AnalyticReflectedSpectrum:
    """Closed-form reflected spectrum: Gaussian beam, rectangular surface, steering.

    ``S(kx, ky) = gamma0 * S_i(kx + k_i - k_r, ky) * R(kx, ky)``

    ``S_i`` is the incident Gaussian spectrum and ``R`` the real erf window
    expressing the finite aperture.  Callable on scalars or arrays.
    """

    beam: GaussianBeamSpec
    lx: float
    ly: float
    theta_r: float
    gamma0: float = 1.0

    def __post_init__(self) -> None:
        if not (self.lx > 0 and self.ly > 0):
            raise ValueError(f"aperture sides must be positive, got {self.lx} x {self.ly}")
        if not abs(self.theta_r) < np.pi / 2:
            raise ValueError(f"|theta_r| must be below pi/2, got {self.theta_r}")
        if not 0 < self.gamma0 <= 1:
            raise ValueError(f"gamma0 must lie in (0, 1], got {self.gamma0}")

    @property
    def k_r(self) -> float:
        return self.beam.k0 * np.sin(self.theta_r)

    @property
    def fraunhofer(self) -> float:
        return fraunhofer_distance(self.lx, self.ly, 2 * np.pi / self.beam.k0)

    def window(self, kx, ky):
        """Aperture window R: real, -> 1 when the aperture dwarfs the beam."""
        w = self.beam.w_ris
        ct = np.cos(self.beam.theta_i)
        im_x = np.asarray((np.asarray(kx) - self.k_r) * w / (2 * ct))
        im_y = np.asarray(np.asarray(ky) * w / 2)
        for name, im, kvals in (("kx", im_x, kx), ("ky", im_y, ky)):
            bad = np.abs(im) > ERF_IMAG_LIMIT
            if np.any(bad):
                k_off = float(np.asarray(kvals, dtype=float).ravel()[np.argmax(bad.ravel())])
                raise ValueError(
                    f"aperture window overflows at {name} = {k_off:.6g} rad/m: "
                    f"|Im q| = {float(np.max(np.abs(im))):.3g} exceeds "
                    f"{ERF_IMAG_LIMIT:g}; the beam is too wide relative to the "
                    f"aperture at this angle offset"
                )
        qx = 0.5 * (self.lx * ct / w) + 1j * im_x
        qy = 0.5 * (self.ly / w) + 1j * im_y
        rx = np.real(complex_erf(qx))
        ry = np.real(complex_erf(qy))
        return rx * ry

    def __call__(self, kx, ky):
        s = self.beam
        shifted = gaussian_spectrum(s)(np.asarray(kx) + s.k_i - self.k_r, ky)
        return self.gamma0 * shifted * self.window(kx, ky)


def analytic_reflected_spectrum(
    beam: GaussianBeamSpec, lx: float, ly: float, theta_r: float, gamma0: float = 1.0
) -> AnalyticReflectedSpectrum:
    return AnalyticReflectedSpectrum(beam, lx, ly, theta_r, gamma0)


@dataclass(frozen=True)
class _BilinearSpectrum:
    """Bilinear interpolation of a sampled spectrum at arbitrary (kx, ky)."""

    spectrum: Spectrum2D

    def __call__(self, kx, ky):
        g = self.spectrum.grid
        v = self.spectrum.values
        fx = (np.asarray(kx, dtype=float) - g.kx[0]) / g.dkx
        fy = (np.asarray(ky, dtype=float) - g.ky[0]) / g.dky
        if np.any(fx < 0) or np.any(fx > g.nx - 1) or np.any(fy < 0) or np.any(fy > g.ny - 1):
            raise ValueError("observation wavevector falls outside the spectral lattice")
        ix = np.clip(np.floor(fx).astype(int), 0, g.nx - 2)
        iy = np.clip(np.floor(fy).astype(int), 0, g.ny - 2)
        tx, ty = fx - ix, fy - iy
        return (
            v[iy, ix] * (1 - tx) * (1 - ty)
            + v[iy, ix + 1] * tx * (1 - ty)
            + v[iy + 1, ix] * (1 - tx) * ty
            + v[iy + 1, ix + 1] * tx * ty
        )


def numeric_reflected_spectrum(field: ComplexField2D, plan: PropagationPlan):
    """FFT the footprint on the plan's padded lattice; return an interpolant.

    The padding refines the k-lattice by ``pad_factor`` so bilinear sampling
    between bins stays below far-field acceptance tolerances.
    """
    if field.grid != plan.grid:
        raise ValueError("field grid does not match the propagation plan grid")
    padded = embed_field(field, plan.pad_factor)
    return _BilinearSpectrum(forward_spectrum(padded))


def _power_sample(s_value, theta, phi, theta_r, r, a_r, k0):
    e_unnorm = (2 * np.pi) ** 2 * np.abs(s_value)
    return (
        a_r * k0**2 / (2 * Z0) * theta_factor(theta, phi, theta_r) * e_unnorm**2
        / (4 * np.pi * r) ** 2
    )


def _check_far_field(r: float, spectrum) -> None:
    bound = getattr(spectrum, "fraunhofer", None)
    if bound is not None and r < bound:
        raise ValueError(
            f"observation distance r = {r:.6g} m is inside the Fraunhofer bound "
            f"{bound:.6g} m; the far-field formula does not apply there"
        )


def received_power_analytic(
    obs: Observation, spectrum: Callable, k0: float, theta_r: float | None = None
) -> float:
    """Single-point received power from a closed-form (or any callable) spectrum."""
    _check_far_field(obs.r, spectrum)
    if theta_r is None:
        theta_r = getattr(spectrum, "theta_r", None)
        if theta_r is None:
            raise ValueError("theta_r is required when the spectrum does not carry one")
    sx, sy = obs.kxy
    s_val = spectrum(k0 * sx, k0 * sy)
    return float(_power_sample(s_val, obs.theta, obs.phi, theta_r, obs.r, obs.a_r, k0))


def _check_far_field_numeric(r: float, reflected: ComplexField2D, k0: float) -> None:
    """Fraunhofer guard against the bounding box of the lit footprint."""
    occupied = np.abs(reflected.values) > 0
    if not np.any(occupied):
        return
    g = reflected.grid
    xs = g.x[occupied.any(axis=0)]
    ys = g.y[occupied.any(axis=1)]
    lx = float(xs.max() - xs.min()) + g.dx
    ly = float(ys.max() - ys.min()) + g.dy
    bound = fraunhofer_distance(lx, ly, 2 * np.pi / k0)
    if r < bound:
        raise ValueError(
            f"observation distance r = {r:.6g} m is inside the Fraunhofer "
            f"bound {bound:.6g} m of the illuminated footprint"
        )


def received_power_numeric(
    obs: Observation, reflected: ComplexField2D, plan: PropagationPlan, theta_r: float
) -> float:
    """Same quadrature with the spectrum sampled from the FFT of the footprint."""
    _check_far_field_numeric(obs.r, reflected, plan.k0)
    interp = numeric_reflected_spectrum(reflected, plan)
    sx, sy = obs.kxy
    s_val = interp(plan.k0 * sx, plan.k0 * sy)
    return float(_power_sample(s_val, obs.theta, obs.phi, theta_r, obs.r, obs.a_r, plan.k0))


@dataclass(frozen=True)
class FarFieldPattern:
    """Received power versus theta at fixed (r, phi, A_r)."""

    theta_rad: np.ndarray
    power_w: np.ndarray
    r: float
    phi: float
    a_r: float
    metadata: dict = dfield(default_factory=dict)

    def __post_init__(self) -> None:
        th = np.asarray(self.theta_rad, dtype=float)
        pw = np.asarray(self.power_w, dtype=float)
        if th.ndim != 1 or th.shape != pw.shape:
            raise ValueError("theta and power arrays must be 1-D and equal length")
        if np.any(np.diff(th) <= 0):
            raise ValueError("theta sweep must be strictly increasing")
        if not np.all(np.isfinite(pw)) or np.any(pw < 0):
            raise ValueError("pattern powers must be finite and nonnegative")
        th.setflags(write=False)
        pw.setflags(write=False)
        object.__setattr__(self, "theta_rad", th)
        object.__setattr__(self, "power_w", pw)

    @property
    def theta_deg(self) -> np.ndarray:
        return np.degrees(self.theta_rad)

    def db(self) -> np.ndarray:
        """Power in dB relative to the sweep maximum (floor at -300 dB)."""
        peak = float(self.power_w.max())
        if peak <= 0:
            return np.full_like(self.power_w, -300.0)
        ratio = np.maximum(self.power_w / peak, 1e-30)
        return 10.0 * np.log10(ratio)

    def peak_theta_deg(self) -> float:
        return float(self.theta_deg[int(np.argmax(self.power_w))])

    def lobe_power(self, center_deg: float, halfwidth_deg: float) -> float:
        """Trapezoid-integrated power (W*rad) inside a theta window — a lobe mass."""
        lo, hi = np.radians(center_deg - halfwidth_deg), np.radians(center_deg + halfwidth_deg)
        sel = (self.theta_rad >= lo) & (self.theta_rad <= hi)
        if sel.sum() < 2:
            raise ValueError(f"lobe window [{lo}, {hi}] rad contains fewer than 2 sweep points")
        return float(np.trapezoid(self.power_w[sel], self.theta_rad[sel]))


def pattern_sweep(
    source,
    thetas_rad,
    *,
    r: float,
    a_r: float,
    phi: float = 0.0,
    plan: PropagationPlan | None = None,
    theta_r: float | None = None,
    k0: float | None = None,
    metadata: dict | None = None,
) -> FarFieldPattern:
    """Received power over a theta sweep (signed angles; phi fixed).

    ``source`` is either an :class:`AnalyticReflectedSpectrum`, a reflected
    footprint (:class:`ComplexField2D`, requires ``plan`` and ``theta_r``),
    or any spectrum callable (requires ``k0`` and ``theta_r``).  Negative
    theta means the mirror azimuth phi + pi.
    """
    thetas = np.asarray(thetas_rad, dtype=float)
    if thetas.ndim != 1 or thetas.size < 2:
        raise ValueError("theta sweep needs a 1-D array of at least 2 angles")
    if np.any(np.abs(thetas) >= np.pi / 2):
        raise ValueError("sweep angles must satisfy |theta| < pi/2")
    if not (r > 0 and a_r > 0):
        raise ValueError("observation distance and receiver aperture must be positive")

    if isinstance(source, ComplexField2D):
        if plan is None or theta_r is None:
            raise ValueError("numeric sweeps need a propagation plan and theta_r")
        k0 = plan.k0
        _check_far_field_numeric(r, source, k0)
        spectrum = numeric_reflected_spectrum(source, plan)
    else:
        spectrum = source
        if k0 is None:
            beam = getattr(source, "beam", None)
            if beam is None:
                raise ValueError("k0 is required when the spectrum does not carry a beam")
            k0 = beam.k0
        if theta_r is None:
            theta_r = getattr(source, "theta_r", None)
            if theta_r is None:
                raise ValueError("theta_r is required when the spectrum does not carry one")
        _check_far_field(r, spectrum)

    kx = k0 * np.sin(thetas) * np.cos(phi)
    ky = k0 * np.sin(thetas) * np.sin(phi)
    s_vals = spectrum(kx, ky)
    power = _power_sample(s_vals, thetas, phi, theta_r, r, a_r, k0)
    return FarFieldPattern(
        thetas, np.asarray(power, dtype=float), r, phi, a_r, dict(metadata or {})
    )


def lobe_masses(
    pattern: FarFieldPattern, k0: float, lobe_thetas_rad, sweep_theta_r: float
) -> np.ndarray:
    """Obliquity-corrected spectral mass of each lobe in a pattern sweep.

    The received power is divided by the obliquity weight the sweep was
    computed with (``sweep_theta_r``), leaving a quantity proportional to
    |spectrum|^2, which is then integrated over kx = k0 sin(theta) inside
    windows tiled at the midpoints between adjacent lobe centers (edge
    windows mirror the inner half-gap).  Raw power integrals would scale
    each lobe by cos(theta_n) and could never come out equal for lobes the
    surface splits evenly; the corrected masses track the design weights
    squared once the aperture resolves the lobes.
    """
    lobes = np.atleast_1d(np.asarray(lobe_thetas_rad, dtype=float))
    if lobes.ndim != 1 or lobes.size < 1:
        raise ValueError("need a 1-D array of at least one lobe angle")
    if lobes.size > 1 and np.any(np.diff(lobes) <= 0):
        raise ValueError("lobe angles must be strictly increasing")
    if not k0 > 0:
        raise ValueError(f"carrier wavenumber must be positive, got {k0}")

    weight = theta_factor(pattern.theta_rad, pattern.phi, sweep_theta_r)
    density = pattern.power_w / weight
    kx = k0 * np.sin(pattern.theta_rad)

    centers = k0 * np.sin(lobes)
    if lobes.size == 1:
        lo = np.array([kx[0]])
        hi = np.array([kx[-1]])
    else:
        mids = (centers[:-1] + centers[1:]) / 2.0
        lo = np.concatenate([[2.0 * centers[0] - mids[0]], mids])
        hi = np.concatenate([mids, [2.0 * centers[-1] - mids[-1]]])

    masses = np.empty(lobes.size)
    for n in range(lobes.size):
        sel = (kx >= lo[n]) & (kx <= hi[n])
        if sel.sum() < 2:
            raise ValueError(
                f"lobe window around {np.degrees(lobes[n]):.3g} deg covers fewer "
                "than 2 sweep points; widen or refine the sweep"
            )
        masses[n] = np.trapezoid(density[sel], kx[sel])
    return masses
