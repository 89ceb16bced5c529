"""Angular-spectrum propagation against exact single-bin results, the
closed-form Gaussian beam, and a direct Rayleigh-Sommerfeld quadrature."""

import os

import numpy as np
import pytest

from ris_kspace.beams import GaussianBeamSpec, gaussian_footprint
from ris_kspace.numerics import ComplexField2D, Grid2D, embed_field, forward_spectrum
from ris_kspace.propagation import (
    PropagationPlan,
    line_profile_x,
    on_axis_profile,
    propagate,
    propagate_to_planes,
)

LAM = 299792458.0 / 150e9
K0 = 2 * np.pi / LAM


def rayleigh_sommerfeld(field: ComplexField2D, z: float, k0: float) -> np.ndarray:
    """Direct Green's-function quadrature: first Rayleigh-Sommerfeld solution,

        E(x, y, z) = integral E(x', y', 0) * (z / 2pi) e^{j k R}
                     * (1/R^3 - j k / R^2) dx' dy',   R = |r - r'|.

    O(N^4); only for tiny grids.
    """
    g = field.grid
    X, Y = np.meshgrid(g.x, g.y)
    out = np.zeros((g.ny, g.nx), dtype=complex)
    for iy in range(g.ny):
        for ix in range(g.nx):
            R = np.sqrt((g.x[ix] - X) ** 2 + (g.y[iy] - Y) ** 2 + z**2)
            kern = (z / (2 * np.pi)) * np.exp(1j * k0 * R) * (1.0 / R**3 - 1j * k0 / R**2)
            out[iy, ix] = np.sum(field.values * kern) * g.dx * g.dy
    return out


def bandlimited_noise(grid: Grid2D, k0: float, seed: int) -> ComplexField2D:
    """Random field with spectral support strictly inside the propagating disk."""
    rng = np.random.default_rng(seed)
    KX, KY = grid.kxy()
    keep = (KX**2 + KY**2) < (0.8 * k0) ** 2
    spec = (rng.standard_normal((grid.ny, grid.nx))
            + 1j * rng.standard_normal((grid.ny, grid.nx))) * keep
    vals = np.fft.fftshift(np.fft.ifft2(np.fft.ifftshift(spec)))
    return ComplexField2D(grid, vals)


class TestPlan:
    def test_validation(self):
        g = Grid2D(32, 32, LAM / 2, LAM / 2)
        with pytest.raises(ValueError, match="pad_factor"):
            PropagationPlan(g, K0, pad_factor=0)
        with pytest.raises(ValueError, match="evanescent"):
            PropagationPlan(g, K0, evanescent="reflect")
        with pytest.raises(ValueError, match="carrier wavenumber"):
            PropagationPlan(g, -K0)

    def test_pitch_must_resolve_carrier(self):
        g = Grid2D(32, 32, LAM, LAM)
        with pytest.raises(ValueError, match="lambda/2"):
            PropagationPlan(g, K0)

    def test_padded_grid(self):
        g = Grid2D(32, 32, LAM / 2, LAM / 2)
        p = PropagationPlan(g, K0, pad_factor=4)
        assert (p.padded_grid.nx, p.padded_grid.ny) == (128, 128)
        assert p.padded_grid.dx == g.dx


class TestPropagate:
    def test_zero_distance_identity(self):
        g = Grid2D(32, 32, LAM / 2, LAM / 2)
        f = bandlimited_noise(g, K0, 0)
        out = propagate(f, 0.0, PropagationPlan(g, K0))
        assert np.max(np.abs(out.values - f.values)) < 1e-12

    def test_negative_distance_rejected(self):
        g = Grid2D(32, 32, LAM / 2, LAM / 2)
        f = bandlimited_noise(g, K0, 0)
        with pytest.raises(ValueError, match="nonnegative"):
            propagate(f, -1e-3, PropagationPlan(g, K0))

    def test_grid_mismatch_rejected(self):
        g = Grid2D(32, 32, LAM / 2, LAM / 2)
        other = Grid2D(32, 32, LAM / 4, LAM / 4)
        f = bandlimited_noise(g, K0, 0)
        with pytest.raises(ValueError, match="plan grid"):
            propagate(f, 1e-3, PropagationPlan(other, K0))

    def test_on_lattice_plane_wave_gets_global_phase(self):
        g = Grid2D(64, 64, LAM / 2, LAM / 2)
        k1 = 9 * g.dkx
        vals = np.exp(1j * k1 * g.x)[None, :] * np.ones((64, 1))
        f = ComplexField2D(g, vals)
        dz = 7.3 * LAM
        out = propagate(f, dz, PropagationPlan(g, K0, pad_factor=1))
        want = vals * np.exp(1j * np.sqrt(K0**2 - k1**2) * dz)
        assert np.max(np.abs(out.values - want)) < 1e-10
        assert np.max(np.abs(np.abs(out.values) - 1.0)) < 1e-10

    def test_gaussian_waist_growth(self):
        w0 = 8 * LAM
        z_r = np.pi * w0**2 / LAM
        g = Grid2D(256, 256, LAM / 2, LAM / 2)
        f = gaussian_footprint(GaussianBeamSpec(1.0, w0, 0.0, K0), g)
        plan = PropagationPlan(g, K0, pad_factor=2)
        for z in (0.5 * z_r, z_r, 2 * z_r):
            out = propagate(f, z, plan)
            inten = np.abs(out.values) ** 2
            x2 = float(np.sum(inten * g.x[None, :] ** 2) / np.sum(inten))
            w_meas = 2 * np.sqrt(x2)
            w_want = w0 * np.sqrt(1 + (z / z_r) ** 2)
            assert w_meas == pytest.approx(w_want, rel=0.01)

    def test_matches_rayleigh_sommerfeld_quadrature(self):
        # localized aperture field on a small grid, z = 50 lambda
        g = Grid2D(32, 32, LAM / 2, LAM / 2)
        X, Y = np.meshgrid(g.x, g.y)
        vals = np.exp(-(X**2 + Y**2) / (4 * LAM) ** 2) * np.exp(1j * 0.2 * K0 * X)
        f = ComplexField2D(g, vals)
        z = 50 * LAM
        got = propagate(f, z, PropagationPlan(g, K0, pad_factor=8)).values
        want = rayleigh_sommerfeld(f, z, K0)
        l2 = np.linalg.norm(got - want) / np.linalg.norm(want)
        assert l2 <= 0.01

    def test_evanescent_decay_kills_superoscillation(self):
        g = Grid2D(64, 64, LAM / 4, LAM / 4)
        # put all energy beyond the propagating disk
        k_ev = 1.5 * K0
        bin_k = round(k_ev / g.dkx) * g.dkx
        vals = np.exp(1j * bin_k * g.x)[None, :] * np.ones((64, 1))
        f = ComplexField2D(g, vals)
        out = propagate(f, 2 * LAM, PropagationPlan(g, K0, pad_factor=1, evanescent="decay"))
        gamma = np.sqrt(bin_k**2 - K0**2)
        assert np.max(np.abs(out.values)) == pytest.approx(np.exp(-gamma * 2 * LAM), rel=1e-9)
        out_t = propagate(f, 2 * LAM, PropagationPlan(g, K0, pad_factor=1, evanescent="truncate"))
        assert np.max(np.abs(out_t.values)) < 1e-14


class TestInvariants:
    def test_semigroup(self):
        g = Grid2D(64, 64, LAM / 2, LAM / 2)
        f = bandlimited_noise(g, K0, 11)
        plan = PropagationPlan(g, K0, pad_factor=1)
        a = propagate(propagate(f, 3.7 * LAM, plan), 9.1 * LAM, plan)
        b = propagate(f, 12.8 * LAM, plan)
        assert np.max(np.abs(a.values - b.values)) < 1e-10 * np.max(np.abs(b.values))

    def test_propagating_band_power_conserved_with_truncate(self):
        g = Grid2D(64, 64, LAM / 2, LAM / 2)
        rng = np.random.default_rng(13)
        f = ComplexField2D(
            g, rng.standard_normal((64, 64)) + 1j * rng.standard_normal((64, 64))
        )
        plan = PropagationPlan(g, K0, pad_factor=1, evanescent="truncate")
        KX, KY = g.kxy()
        band = (KX**2 + KY**2) < K0**2
        p0 = np.sum(np.abs(forward_spectrum(f).values[band]) ** 2)
        for z in (LAM, 10 * LAM, 123 * LAM):
            s = forward_spectrum(propagate(f, z, plan))
            pz = np.sum(np.abs(s.values[band]) ** 2)
            assert pz == pytest.approx(p0, rel=1e-10)

    def test_per_bin_magnitude_invariant_in_band(self):
        g = Grid2D(64, 64, LAM / 2, LAM / 2)
        f = bandlimited_noise(g, K0, 5)
        plan = PropagationPlan(g, K0, pad_factor=1, evanescent="truncate")
        m0 = np.abs(forward_spectrum(f).values)
        mz = np.abs(forward_spectrum(propagate(f, 40 * LAM, plan)).values)
        assert np.max(np.abs(mz - m0)) < 1e-10 * m0.max()

    def test_steered_beam_spreads_more(self):
        g = Grid2D(512, 512, LAM / 2, LAM / 2)
        w = 6 * LAM
        z = 50 * LAM
        f0 = gaussian_footprint(GaussianBeamSpec(1.0, w, 0.0, K0), g)
        f60 = gaussian_footprint(GaussianBeamSpec(1.0, w, np.deg2rad(60), K0), g)
        plan = PropagationPlan(g, K0, pad_factor=4)

        def width_about_centroid(field):
            inten = np.abs(field.values) ** 2
            x = field.grid.x[None, :]
            c = np.sum(inten * x) / np.sum(inten)
            return 2 * np.sqrt(np.sum(inten * (x - c) ** 2) / np.sum(inten))

        w_straight = width_about_centroid(propagate(f0, z, plan))
        w_steered = width_about_centroid(propagate(f60, z, plan))
        assert w_steered > 1.5 * w_straight

    def test_peak_drops_as_beam_spreads(self):
        g = Grid2D(256, 256, LAM / 2, LAM / 2)
        w0 = 8 * LAM
        z_r = np.pi * w0**2 / LAM
        f = gaussian_footprint(GaussianBeamSpec(1.0, w0, 0.0, K0), g)
        plan = PropagationPlan(g, K0)
        peaks = [np.abs(propagate(f, z, plan).values).max() for z in (0.0, z_r, 2 * z_r)]
        assert peaks[0] > peaks[1] > peaks[2]
        # power in the frame is conserved while the peak falls
        powers = [propagate(f, z, plan).power() for z in (0.0, z_r)]
        assert powers[1] == pytest.approx(powers[0], rel=1e-6)


class TestWalkoffGuard:
    def test_steep_beam_far_plane_refused(self):
        g = Grid2D(128, 128, LAM / 2, LAM / 2)
        f = gaussian_footprint(GaussianBeamSpec(1.0, 5 * LAM, np.deg2rad(60), K0), g)
        plan = PropagationPlan(g, K0, pad_factor=1)
        with pytest.raises(RuntimeError, match="pad_factor"):
            propagate(f, 500 * LAM, plan)

    def test_same_case_passes_when_embedded(self):
        g = Grid2D(128, 128, LAM / 2, LAM / 2)
        f = gaussian_footprint(GaussianBeamSpec(1.0, 10 * LAM, np.deg2rad(60), K0), g)
        big = embed_field(f, 8)
        plan = PropagationPlan(big.grid, K0, pad_factor=2)
        out = propagate(big, 100 * LAM, plan)
        # energy actually arrived off-axis where the ray says it should
        inten = np.abs(out.values) ** 2
        x_c = np.sum(inten * big.grid.x[None, :]) / np.sum(inten)
        assert x_c == pytest.approx(100 * LAM * np.tan(np.deg2rad(60)), rel=0.05)

    def test_plane_wave_exempt_from_guard(self):
        g = Grid2D(64, 64, LAM / 2, LAM / 2)
        k1 = 20 * g.dkx
        vals = np.exp(1j * k1 * g.x)[None, :] * np.ones((64, 1))
        f = ComplexField2D(g, vals)
        out = propagate(f, 1000 * LAM, PropagationPlan(g, K0, pad_factor=1))
        assert np.max(np.abs(np.abs(out.values) - 1.0)) < 1e-9


class TestBatchAndProfiles:
    def test_planes_match_single_calls(self):
        g = Grid2D(64, 64, LAM / 2, LAM / 2)
        f = bandlimited_noise(g, K0, 21)
        plan = PropagationPlan(g, K0, pad_factor=2)
        zs = [0.0, 3 * LAM, 11 * LAM]
        batch = propagate_to_planes(f, zs, plan)
        for z, plane in zip(zs, batch):
            single = propagate(f, z, plan)
            assert np.max(np.abs(plane.values - single.values)) < 1e-13

    def test_threaded_batch_identical(self):
        g = Grid2D(64, 64, LAM / 2, LAM / 2)
        f = bandlimited_noise(g, K0, 22)
        plan = PropagationPlan(g, K0, pad_factor=2)
        zs = [LAM, 5 * LAM, 9 * LAM, 14 * LAM]
        serial = propagate_to_planes(f, zs, plan)
        os.environ["RIS_KSPACE_THREADS"] = "4"
        try:
            threaded = propagate_to_planes(f, zs, plan)
        finally:
            del os.environ["RIS_KSPACE_THREADS"]
        for a, b in zip(serial, threaded):
            np.testing.assert_array_equal(a.values, b.values)

    def test_bad_thread_env_rejected(self):
        g = Grid2D(32, 32, LAM / 2, LAM / 2)
        f = bandlimited_noise(g, K0, 1)
        plan = PropagationPlan(g, K0)
        os.environ["RIS_KSPACE_THREADS"] = "many"
        try:
            with pytest.raises(ValueError, match="RIS_KSPACE_THREADS"):
                propagate_to_planes(f, [LAM, 2 * LAM], plan)
        finally:
            del os.environ["RIS_KSPACE_THREADS"]

    def test_line_profile_matches_center_row(self):
        g = Grid2D(64, 64, LAM / 2, LAM / 2)
        f = bandlimited_noise(g, K0, 31)
        plan = PropagationPlan(g, K0, pad_factor=2)
        zs = [2 * LAM, 8 * LAM]
        x, lines = line_profile_x(f, zs, plan)
        np.testing.assert_array_equal(x, g.x)
        planes = propagate_to_planes(f, zs, plan)
        for line, plane in zip(lines, planes):
            row = plane.values[g.ny // 2, :]
            assert np.max(np.abs(line - row)) < 1e-12 * np.max(np.abs(row))

    def test_on_axis_matches_center_sample(self):
        g = Grid2D(64, 64, LAM / 2, LAM / 2)
        f = bandlimited_noise(g, K0, 33)
        plan = PropagationPlan(g, K0, pad_factor=2)
        zs = [LAM, 4 * LAM, 16 * LAM]
        axial = on_axis_profile(f, zs, plan)
        for z, val in zip(zs, axial):
            center = propagate(f, z, plan).values[g.ny // 2, g.nx // 2]
            assert val == pytest.approx(center, rel=1e-12)

    def test_negative_z_rejected(self):
        g = Grid2D(32, 32, LAM / 2, LAM / 2)
        f = bandlimited_noise(g, K0, 2)
        plan = PropagationPlan(g, K0)
        with pytest.raises(ValueError, match="nonnegative"):
            propagate_to_planes(f, [LAM, -LAM], plan)
        with pytest.raises(ValueError, match="nonnegative"):
            line_profile_x(f, [-1.0], plan)
