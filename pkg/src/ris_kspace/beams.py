"""Incident beams on the surface: footprints, analytic spectra, source models.

A beam arriving in the xz-plane at angle ``theta_i`` from broadside carries
transverse wavenumber ``k_i = k0*sin(theta_i)``.  Footprints here use the
phase ``exp(+j*k_i*x)`` so that, under the forward transform of
:mod:`ris_kspace.numerics` (kernel ``exp(-j k.x)``), the spectrum peaks at
``kx = +k_i`` — i.e. spectra live where the beam actually points.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .numerics import ComplexField2D, Grid2D

__all__ = [
    "GaussianBeamSpec",
    "ApSpec",
    "gaussian_footprint",
    "gaussian_spectrum",
    "plane_wave",
    "waist_from_gain",
    "k_content_width",
]

# free-space wave impedance, ohms
Z0 = 376.730313412


@dataclass(frozen=True)
class GaussianBeamSpec:
    """Gaussian beam as seen on the surface plane.

    Parameters
    ----------
    e0 : float
        Peak field amplitude at the footprint center, V/m.
    w_ris : float
        1/e amplitude radius on the surface at normal incidence, meters.
        Off normal the footprint stretches to ``w_ris/cos(theta_i)`` along x.
    theta_i : float
        Incidence angle in the xz-plane, radians, ``|theta_i| < pi/2``.
    k0 : float
        Carrier wavenumber, rad/m.
    """

    e0: float
    w_ris: float
    theta_i: float
    k0: float

    def __post_init__(self) -> None:
        if not self.w_ris > 0:
            raise ValueError(f"beam radius must be positive, got {self.w_ris}")
        if not abs(self.theta_i) < np.pi / 2:
            raise ValueError(f"|theta_i| must be below pi/2, got {self.theta_i}")
        if not self.k0 > 0:
            raise ValueError(f"carrier wavenumber must be positive, got {self.k0}")

    @property
    def k_i(self) -> float:
        """Transverse wavenumber of the carrier, ``k0*sin(theta_i)``."""
        return self.k0 * np.sin(self.theta_i)


@dataclass(frozen=True)
class ApSpec:
    """Access-point antenna: transmit power, boresight gain, distance to the surface."""

    power_w: float
    gain: float
    distance_m: float

    def __post_init__(self) -> None:
        if not self.power_w > 0:
            raise ValueError(f"transmit power must be positive, got {self.power_w}")
        if not self.gain >= 1:
            raise ValueError(f"gain must be >= 1 (linear), got {self.gain}")
        if not self.distance_m > 0:
            raise ValueError(f"distance must be positive, got {self.distance_m}")

    @classmethod
    def from_db(cls, power_w: float, gain_db: float, distance_m: float) -> "ApSpec":
        return cls(power_w, 10.0 ** (gain_db / 10.0), distance_m)


def gaussian_footprint(spec: GaussianBeamSpec, grid: Grid2D) -> ComplexField2D:
    """Sample the tilted-Gaussian footprint on ``grid``.

    ``E(x, y) = e0 * exp(-(x^2 cos^2(theta_i) + y^2)/w_ris^2) * exp(+j k_i x)``

    The carrier tilt must be resolvable by the grid, ``|k_i| < pi/dx``.
    """
    k_i = spec.k_i
    if abs(k_i) >= grid.kx_nyquist:
        raise ValueError(
            f"grid cannot resolve the incidence tilt: |k_i| = {abs(k_i):.6g} rad/m "
            f">= Nyquist pi/dx = {grid.kx_nyquist:.6g} rad/m; refine dx or reduce theta_i"
        )
    ct = np.cos(spec.theta_i)
    X, Y = grid.xy()
    env = np.exp(-((X * ct) ** 2 + Y**2) / spec.w_ris**2)
    vals = spec.e0 * env * np.exp(1j * k_i * X)
    return ComplexField2D(grid, np.broadcast_to(vals, (grid.ny, grid.nx)))


@dataclass(frozen=True)
class GaussianSpectrum:
    """Closed-form plane-wave spectrum of a tilted Gaussian footprint.

    Normalized to the 1/(2*pi)**2 forward-transform convention, so values are
    directly comparable with :func:`ris_kspace.numerics.forward_spectrum`
    output.  Callable on scalars or broadcastable arrays.
    """

    spec: GaussianBeamSpec

    @property
    def peak_kx(self) -> float:
        return self.spec.k_i

    def __call__(self, kx, ky):
        s = self.spec
        ct = np.cos(s.theta_i)
        amp = s.e0 * s.w_ris**2 / (4.0 * np.pi * ct)
        arg = -(s.w_ris**2 / 4.0) * (((kx - s.k_i) / ct) ** 2 + np.asarray(ky) ** 2)
        return amp * np.exp(arg)


def gaussian_spectrum(spec: GaussianBeamSpec) -> GaussianSpectrum:
    """Analytic spectrum of :func:`gaussian_footprint` as a callable."""
    return GaussianSpectrum(spec)


def plane_wave(grid: Grid2D, k0: float, theta_i: float, e0: float = 1.0) -> ComplexField2D:
    """Unit-envelope tilted plane wave ``e0 * exp(+j k0 sin(theta_i) x)``."""
    if not k0 > 0:
        raise ValueError(f"carrier wavenumber must be positive, got {k0}")
    k_i = k0 * np.sin(theta_i)
    if abs(k_i) >= grid.kx_nyquist:
        raise ValueError(
            f"grid cannot resolve the incidence tilt: |k_i| = {abs(k_i):.6g} rad/m "
            f">= Nyquist pi/dx = {grid.kx_nyquist:.6g} rad/m"
        )
    X, _ = grid.xy()
    vals = e0 * np.exp(1j * k_i * X) * np.ones((grid.ny, grid.nx))
    return ComplexField2D(grid, vals)


def waist_from_gain(ap: ApSpec, k0: float, theta_i: float = 0.0) -> GaussianBeamSpec:
    """Turn an access-point description into the Gaussian beam it launches.

    The antenna is modeled as a Gaussian aperture of effective area
    ``pi*w0^2/2``, so ``gain = 2*pi^2*w0^2/lambda^2`` fixes the waist ``w0``.
    The waist then spreads over the standoff distance by standard
    Gaussian-beam divergence (Rayleigh range ``z_R = pi*w0^2/lambda``), and
    the amplitude is set so the beam carries ``ap.power_w`` watts.
    """
    if not k0 > 0:
        raise ValueError(f"carrier wavenumber must be positive, got {k0}")
    lam = 2.0 * np.pi / k0
    w0 = lam * np.sqrt(ap.gain / (2.0 * np.pi**2))
    z_r = np.pi * w0**2 / lam
    w_ris = w0 * np.sqrt(1.0 + (ap.distance_m / z_r) ** 2)
    e0_waist = np.sqrt(4.0 * Z0 * ap.power_w / (np.pi * w0**2))
    e0 = e0_waist * w0 / w_ris
    return GaussianBeamSpec(e0=e0, w_ris=w_ris, theta_i=theta_i, k0=k0)


def k_content_width(
    kind: str,
    wavelength: float,
    *,
    waist: float | None = None,
    diameter: float | None = None,
    n_elements: int | None = None,
    spacing: float | None = None,
) -> float:
    """Fractional spectral width ``delta_k / k0`` of a source's k-content.

    kind = 'gaussian'      : lambda / (2 * waist)
    kind = 'dish'          : 1.22 * lambda / diameter
    kind = 'phased_array'  : 1.2 * lambda / (n_elements * spacing)

    A source narrower than a surface's pass-band in k means the surface
    reflects it essentially undistorted.
    """
    if not wavelength > 0:
        raise ValueError(f"wavelength must be positive, got {wavelength}")
    if kind == "gaussian":
        if waist is None or not waist > 0:
            raise ValueError(f"gaussian k-content needs a positive waist, got {waist!r}")
        return wavelength / (2.0 * waist)
    if kind == "dish":
        if diameter is None or not diameter > 0:
            raise ValueError(f"dish k-content needs a positive diameter, got {diameter!r}")
        return 1.22 * wavelength / diameter
    if kind == "phased_array":
        if n_elements is None or n_elements < 1:
            raise ValueError(f"phased array needs n_elements >= 1, got {n_elements!r}")
        if spacing is None or not spacing > 0:
            raise ValueError(f"phased array needs a positive spacing, got {spacing!r}")
        return 1.2 * wavelength / (n_elements * spacing)
    raise ValueError(f"unknown source kind {kind!r}; expected gaussian|dish|phased_array")
