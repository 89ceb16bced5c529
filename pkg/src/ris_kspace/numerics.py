"""Centered 2-D sampling grids, the scaled Fourier pair, and the complex error function.

Conventions used throughout the package:

* the forward transform carries the 1/(2*pi)**2 normalization,
  ``S(kx, ky) = (1/2pi)**2 * integral E(x, y) exp(-j(kx*x + ky*y)) dx dy``,
  so the inverse carries none;
* real-space samples sit at ``x_p = (p - n/2) * dx`` for ``p = 0..n-1`` with
  even ``n``, i.e. the grid is centered and index ``n//2`` is the origin;
* the matching spectral lattice has bin pitch ``dk = 2*pi/(n*dx)`` and its
  DC bin at index ``n//2``.

With these choices a discrete transform of ``exp(j*k1*x)`` puts all energy in
the bin at ``kx = k1`` whenever ``k1`` lies on the lattice, and Parseval reads
``sum |E|^2 dx dy == (2*pi)**2 * sum |S|^2 dkx dky`` exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy import special

__all__ = [
    "Grid2D",
    "ComplexField2D",
    "Spectrum2D",
    "forward_spectrum",
    "inverse_spectrum",
    "field_power",
    "spectrum_power",
    "embed_field",
    "complex_erf",
    "ERF_IMAG_LIMIT",
]

# Beyond |Im z| ~ 30 the erf(z) magnitude passes exp(900) and float64 is long
# gone; refuse early with a clear message instead of returning inf/nan.
ERF_IMAG_LIMIT = 30.0


@dataclass(frozen=True)
class Grid2D:
    """Uniform centered sampling of a transverse plane.

    Parameters
    ----------
    nx, ny : int
        Number of samples along x and y.  Must be even so the origin is a
        sample point and the spectral DC bin sits at ``(ny//2, nx//2)``.
    dx, dy : float
        Sample pitch in meters.

    Arrays indexed on this grid are laid out ``[iy, ix]``.
    """

    nx: int
    ny: int
    dx: float
    dy: float

    def __post_init__(self) -> None:
        if self.nx < 2 or self.ny < 2:
            raise ValueError(f"grid must be at least 2x2, got {self.nx}x{self.ny}")
        if self.nx % 2 or self.ny % 2:
            raise ValueError(
                f"grid dimensions must be even so the origin is a sample, got {self.nx}x{self.ny}"
            )
        if not (self.dx > 0 and self.dy > 0):
            raise ValueError(f"grid pitch must be positive, got dx={self.dx}, dy={self.dy}")

    # -- real-space lattice -------------------------------------------------

    @cached_property
    def x(self) -> np.ndarray:
        """Sample positions along x, origin at index ``nx//2``."""
        return (np.arange(self.nx) - self.nx // 2) * self.dx

    @cached_property
    def y(self) -> np.ndarray:
        return (np.arange(self.ny) - self.ny // 2) * self.dy

    @property
    def extent_x(self) -> float:
        """Physical width ``nx*dx`` covered by the grid."""
        return self.nx * self.dx

    @property
    def extent_y(self) -> float:
        return self.ny * self.dy

    def xy(self) -> tuple[np.ndarray, np.ndarray]:
        """Sparse ``(X, Y)`` meshgrid pair that broadcasts to ``(ny, nx)``."""
        return np.meshgrid(self.x, self.y, sparse=True)

    # -- spectral lattice ---------------------------------------------------

    @property
    def dkx(self) -> float:
        return 2.0 * np.pi / (self.nx * self.dx)

    @property
    def dky(self) -> float:
        return 2.0 * np.pi / (self.ny * self.dy)

    @cached_property
    def kx(self) -> np.ndarray:
        """Spectral bin centers along kx; DC at index ``nx//2``."""
        return (np.arange(self.nx) - self.nx // 2) * self.dkx

    @cached_property
    def ky(self) -> np.ndarray:
        return (np.arange(self.ny) - self.ny // 2) * self.dky

    @property
    def kx_nyquist(self) -> float:
        """Largest transverse wavenumber the x sampling can represent."""
        return np.pi / self.dx

    @property
    def ky_nyquist(self) -> float:
        return np.pi / self.dy

    def kxy(self) -> tuple[np.ndarray, np.ndarray]:
        """Sparse ``(KX, KY)`` meshgrid pair that broadcasts to ``(ny, nx)``."""
        return np.meshgrid(self.kx, self.ky, sparse=True)

    def scaled(self, factor: int) -> "Grid2D":
        """Same pitch, ``factor`` times the samples per side."""
        if factor < 1 or int(factor) != factor:
            raise ValueError(f"scale factor must be a positive integer, got {factor!r}")
        return Grid2D(self.nx * int(factor), self.ny * int(factor), self.dx, self.dy)


def _as_complex_samples(values: np.ndarray, grid: Grid2D, what: str) -> np.ndarray:
    values = np.asarray(values)
    if values.shape != (grid.ny, grid.nx):
        raise ValueError(
            f"{what} shape {values.shape} does not match grid ({grid.ny}, {grid.nx})"
        )
    out = np.ascontiguousarray(values, dtype=np.complex128)
    if out is values:
        out = values.copy()
    if not np.all(np.isfinite(out.real) & np.isfinite(out.imag)):
        raise ValueError(f"{what} contains non-finite samples")
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class ComplexField2D:
    """Complex scalar field samples on a :class:`Grid2D`, indexed ``[iy, ix]``.

    ``values`` is validated, cast to complex128 and frozen read-only.
    """

    grid: Grid2D
    values: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", _as_complex_samples(self.values, self.grid, "field"))

    def power(self) -> float:
        """Surface integral of ``|E|^2`` as a Riemann sum (W per ohm-normalized unit)."""
        return float(np.sum(np.abs(self.values) ** 2)) * self.grid.dx * self.grid.dy


@dataclass(frozen=True)
class Spectrum2D:
    """Plane-wave spectrum samples on the k-lattice of a :class:`Grid2D`."""

    grid: Grid2D
    values: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", _as_complex_samples(self.values, self.grid, "spectrum"))

    def power(self) -> float:
        """Parseval partner of :meth:`ComplexField2D.power`."""
        return (
            float(np.sum(np.abs(self.values) ** 2))
            * self.grid.dkx
            * self.grid.dky
            * (2.0 * np.pi) ** 2
        )


def forward_spectrum(field: ComplexField2D) -> Spectrum2D:
    """Field samples -> plane-wave spectrum on the matching centered k-lattice.

    Scaling is ``dx*dy/(2*pi)**2`` so the result approximates the continuous
    transform with the 1/(2*pi)**2 normalization.
    """
    g = field.grid
    raw = np.fft.fftshift(np.fft.fft2(np.fft.ifftshift(field.values)))
    return Spectrum2D(g, raw * (g.dx * g.dy / (2.0 * np.pi) ** 2))


def inverse_spectrum(spectrum: Spectrum2D) -> ComplexField2D:
    """Exact inverse of :func:`forward_spectrum` on the same grid."""
    g = spectrum.grid
    raw = np.fft.fftshift(np.fft.ifft2(np.fft.ifftshift(spectrum.values)))
    return ComplexField2D(g, raw * (g.nx * g.ny * g.dkx * g.dky))


def field_power(field: ComplexField2D) -> float:
    return field.power()


def spectrum_power(spectrum: Spectrum2D) -> float:
    return spectrum.power()


def embed_field(field: ComplexField2D, factor: int) -> ComplexField2D:
    """Zero-pad a field into a grid ``factor`` times larger per side.

    The pitch is unchanged, so the spectral lattice gets ``factor`` times
    finer.  Useful before propagating when the beam is expected to spread
    beyond the original frame.
    """
    g = field.grid
    big = g.scaled(factor)
    if factor == 1:
        return ComplexField2D(big, field.values)
    out = np.zeros((big.ny, big.nx), dtype=np.complex128)
    oy = (big.ny - g.ny) // 2
    ox = (big.nx - g.nx) // 2
    out[oy : oy + g.ny, ox : ox + g.nx] = field.values
    return ComplexField2D(big, out)


def complex_erf(z):
    """Error function for complex argument.

    Evaluated through the scaled complementary error function (the Faddeeva
    route), which stays accurate along the whole strip this package needs.
    The useful domain is ``|Im z| <= 30``: beyond that the true value
    overflows float64 and the call raises instead of returning inf.

    Accepts scalars or arrays; returns the same shape.
    """
    z = np.asarray(z, dtype=np.complex128)
    im_max = float(np.max(np.abs(z.imag))) if z.size else 0.0
    if im_max > ERF_IMAG_LIMIT:
        raise ValueError(
            f"complex_erf: |Im z| = {im_max:.3g} exceeds the supported strip "
            f"|Im z| <= {ERF_IMAG_LIMIT:g}; the result would overflow float64"
        )
    out = special.erf(z)
    bad = ~(np.isfinite(out.real) & np.isfinite(out.imag))
    if np.any(bad):
        zb = np.asarray(z)[bad].ravel()[0]
        raise ValueError(f"complex_erf overflowed at z = {zb}")
    if out.ndim == 0:
        return complex(out)
    return out
