"""Lorentzian element reflectivity and phase-profile realization.

A single resonant element reflects with

    gamma_uc = 1 - 2*a_e*f / ((a_e + gamma_e)*f + j*(f^2 - f0^2))

so its amplitude and phase are tied together: detuning the resonance f0
away from the operation frequency f walks gamma_uc along a fixed curve in
the complex plane.  This module models that curve, inverts it (phase ->
detuning lookup), and fits a whole surface of detunings so that the
reflected plane-wave spectrum comes as close as possible to the spectrum
an ideal (unit-amplitude, free-phase) profile would produce.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .numerics import ComplexField2D, Grid2D, forward_spectrum
from .ris import RISMask, apply_mask

C_LIGHT = 299792458.0

TABLE_POINTS_PER_SIDE = 2048
TABLE_DETUNING_SPAN = (1e-4, 1e2)  # in units of gamma_e


@dataclass(frozen=True)
class UnitCellModel:
    """Lorentzian element response: damping, resonance strength, operation frequency.

    All three are in GHz.  ``a_e > gamma_e`` gives elements whose phase spans
    the full circle as the resonance is detuned; weaker resonances cover less.
    """

    gamma_e_ghz: float
    a_e_ghz: float
    f_ghz: float

    def __post_init__(self) -> None:
        for name in ("gamma_e_ghz", "a_e_ghz", "f_ghz"):
            v = getattr(self, name)
            if not np.isfinite(v) or v <= 0:
                raise ValueError(f"{name} must be positive and finite, got {v!r}")

    @property
    def k0(self) -> float:
        """Free-space wavenumber of the operation frequency, rad/m."""
        return 2.0 * np.pi * self.f_ghz * 1e9 / C_LIGHT


def gamma_uc(model: UnitCellModel, f0_ghz):
    """Complex element reflectivity for resonance frequency ``f0_ghz`` (GHz).

    Vectorized over ``f0_ghz``.
    """
    f0 = np.asarray(f0_ghz, dtype=np.float64)
    f = model.f_ghz
    d = f * f - f0 * f0
    out = 1.0 - 2.0 * model.a_e_ghz * f / ((model.a_e_ghz + model.gamma_e_ghz) * f + 1j * d)
    return np.asarray(out) if f0.ndim else complex(out)


def gamma_uc_magnitude(model: UnitCellModel, f0_ghz):
    """|gamma_uc| in closed form (no complex arithmetic)."""
    f0 = np.asarray(f0_ghz, dtype=np.float64)
    f, a, g = model.f_ghz, model.a_e_ghz, model.gamma_e_ghz
    d2 = (f * f - f0 * f0) ** 2
    out = np.sqrt(((g - a) ** 2 * f * f + d2) / ((g + a) ** 2 * f * f + d2))
    return np.asarray(out) if f0.ndim else float(out)


def gamma_uc_phase(model: UnitCellModel, f0_ghz):
    """arg(gamma_uc) in closed form, principal branch (-pi, pi]."""
    f0 = np.asarray(f0_ghz, dtype=np.float64)
    f, a, g = model.f_ghz, model.a_e_ghz, model.gamma_e_ghz
    d = f * f - f0 * f0
    out = np.arctan2(2.0 * a * f * d, (g * g - a * a) * f * f + d * d)
    return np.asarray(out) if f0.ndim else float(out)


def _circular_gap(a, b):
    """Shortest angular distance between phases ``a`` and ``b``."""
    return np.abs(np.mod(a - b + np.pi, 2.0 * np.pi) - np.pi)


@dataclass(frozen=True)
class PhaseTable:
    """Dense sampling of the element curve, sorted by phase.

    Detunings are log-spaced (the phase varies fastest near resonance),
    mirrored about zero, with the exact on-resonance point included.
    ``step`` is each entry's phase resolution: the larger circular gap to its
    neighbors along the detuning axis, so a coverage hole in phase (phases the
    curve never visits) does not count as a neighbor.
    """

    model: UnitCellModel
    f0_ghz: np.ndarray
    gamma: np.ndarray
    phase: np.ndarray
    step: np.ndarray

    def __len__(self) -> int:
        return self.f0_ghz.size


@lru_cache(maxsize=8)
def phase_table(model: UnitCellModel) -> PhaseTable:
    """Tabulated element curve used by lookups and the optimizer."""
    g = model.gamma_e_ghz
    span = np.geomspace(TABLE_DETUNING_SPAN[0] * g, TABLE_DETUNING_SPAN[1] * g,
                        TABLE_POINTS_PER_SIDE)
    f0 = np.concatenate((model.f_ghz - span[::-1], [model.f_ghz], model.f_ghz + span))
    values = gamma_uc(model, f0)
    ph = np.angle(values)
    gaps = _circular_gap(ph[1:], ph[:-1])
    step = np.maximum(np.concatenate(([0.0], gaps)), np.concatenate((gaps, [0.0])))
    order = np.argsort(ph, kind="stable")
    f0, values, ph, step = f0[order], values[order], ph[order], step[order]
    for arr in (f0, values, ph, step):
        arr.setflags(write=False)
    return PhaseTable(model, f0, values, ph, step)


@dataclass(frozen=True)
class LookupResult:
    """One point on the element curve; ``clamped`` marks an unreachable target phase."""

    f0_ghz: float
    gamma: complex
    clamped: bool


def uc_lookup(model: UnitCellModel, phi_target: float) -> LookupResult:
    """Table entry whose phase is nearest ``phi_target`` (radians, (-pi, pi]).

    Ties break toward the smaller |f - f0|.  Weakly resonant elements cannot
    reach every phase; a target in such a gap returns the nearest achievable
    entry with ``clamped=True``.
    """
    phi = float(phi_target)
    if not np.isfinite(phi) or phi <= -np.pi or phi > np.pi:
        raise ValueError(f"target phase must lie in (-pi, pi], got {phi!r}")
    table = phase_table(model)
    dphi = _circular_gap(table.phase, phi)
    detuning = np.abs(table.f0_ghz - model.f_ghz)
    idx = int(np.lexsort((detuning, dphi))[0])
    clamped = bool(dphi[idx] > 0.75 * table.step[idx])
    return LookupResult(float(table.f0_ghz[idx]), complex(table.gamma[idx]), clamped)


@dataclass(frozen=True)
class DetuningMap:
    """Per-element resonance frequencies (GHz) on a sampling grid."""

    grid: Grid2D
    f0_ghz: np.ndarray

    def __post_init__(self) -> None:
        vals = np.asarray(self.f0_ghz, dtype=np.float64)
        if vals.shape != (self.grid.ny, self.grid.nx):
            raise ValueError(
                f"detuning shape {vals.shape} does not match grid "
                f"({self.grid.ny}, {self.grid.nx})"
            )
        if not np.all(np.isfinite(vals)) or np.any(vals <= 0):
            raise ValueError("resonance frequencies must be positive and finite")
        vals = vals.copy()
        vals.setflags(write=False)
        object.__setattr__(self, "f0_ghz", vals)


def mask_from_detunings(model: UnitCellModel, detunings: DetuningMap) -> RISMask:
    """Surface reflection coefficient realized by a detuning map."""
    gamma = gamma_uc(model, detunings.f0_ghz)
    return RISMask(detunings.grid, gamma, info={"operation": "unit-cell curve"})


@dataclass(frozen=True)
class OptProblem:
    """Fit a realizable mask to a target mask by its reflected spectrum.

    The objective is the discrete L2 distance between reflected spectra,
    restricted to the propagating bins |k| <= k_limit of the shared grid
    (``k_limit`` defaults to the model's free-space wavenumber).
    """

    incident: ComplexField2D
    target: RISMask
    model: UnitCellModel
    k_limit: float | None = None
    max_sweeps: int = 50
    tol: float = 1e-6
    seed: int = 0

    def __post_init__(self) -> None:
        if self.incident.grid != self.target.grid:
            raise ValueError("incident field and target mask live on different grids")
        if self.k_limit is not None and self.k_limit <= 0:
            raise ValueError(f"k_limit must be positive, got {self.k_limit!r}")
        if self.max_sweeps < 1:
            raise ValueError(f"max_sweeps must be >= 1, got {self.max_sweeps!r}")
        if not (self.tol > 0):
            raise ValueError(f"tol must be positive, got {self.tol!r}")


@dataclass(frozen=True)
class OptResult:
    """Optimized surface plus the per-sweep objective trace.

    ``trace[0]`` is the objective at initialization; one entry follows per
    completed sweep.  ``converged`` is False when the sweep cap was hit while
    improvements were still being accepted.
    """

    detunings: DetuningMap
    mask: RISMask
    trace: np.ndarray
    converged: bool
    sweeps: int

    @property
    def objective(self) -> float:
        return float(self.trace[-1])


def _euclidean_init(table: PhaseTable, target_gamma: np.ndarray) -> np.ndarray:
    """Index of the table entry nearest each target value in the complex plane."""
    flat = target_gamma.ravel()
    tg = table.gamma
    tg_sq = np.abs(tg) ** 2
    best = np.empty(flat.size, dtype=np.intp)
    chunk = 2048
    for start in range(0, flat.size, chunk):
        block = flat[start:start + chunk, None]
        # |block - tg|^2 up to the constant |block|^2, which argmin ignores
        dist = tg_sq[None, :] - 2.0 * (block * np.conj(tg)[None, :]).real
        best[start:start + chunk] = np.argmin(dist, axis=1)
    return best


def optimize_mask(problem: OptProblem) -> OptResult:
    """Coordinate descent over per-element detunings.

    Each element starts at the curve point nearest its target reflection
    coefficient; sweeps then revisit elements in seeded random order and move
    any element to the table entry that most lowers the objective, accepting
    improving moves only.  The spectrum residual is updated incrementally
    (one rank-1 update per accepted move) and recomputed fresh at the end of
    each sweep.
    """
    grid = problem.incident.grid
    model = problem.model
    table = phase_table(model)
    k_limit = model.k0 if problem.k_limit is None else problem.k_limit

    kxg, kyg = grid.kxy()
    disk = (kxg * kxg + kyg * kyg) <= k_limit * k_limit
    kxd = np.broadcast_to(kxg, disk.shape)[disk]
    kyd = np.broadcast_to(kyg, disk.shape)[disk]
    n_disk = kxd.size

    target_spec = forward_spectrum(apply_mask(problem.target, problem.incident))
    t_disk = target_spec.values[disk]

    idx = _euclidean_init(table, problem.target.gamma)
    gamma_flat = table.gamma[idx].copy()

    scale = grid.dx * grid.dy / (2.0 * np.pi) ** 2
    amp = problem.incident.values.ravel() * scale

    def fresh_residual() -> np.ndarray:
        field = ComplexField2D(grid, gamma_flat.reshape(grid.ny, grid.nx)
                               * problem.incident.values)
        return forward_spectrum(field).values[disk] - t_disk

    residual = fresh_residual()
    j2 = float(np.sum(np.abs(residual) ** 2))
    trace = [np.sqrt(j2)]

    # element-position phase factors, one column per x (or y) sample
    exb = np.exp(-1j * np.outer(kxd, grid.x))
    eyb = np.exp(-1j * np.outer(kyd, grid.y))

    active = np.flatnonzero(amp != 0)
    rng = np.random.default_rng(problem.seed)
    tg = table.gamma

    converged = j2 == 0.0 or active.size == 0
    sweeps = 0
    while not converged and sweeps < problem.max_sweeps:
        accept_floor = 1e-11 * j2
        n_accepted = 0
        for i in rng.permutation(active):
            iy, ix = divmod(int(i), grid.nx)
            phases = exb[:, ix] * eyb[:, iy]
            u = np.vdot(residual, phases)  # conjugates the residual
            cu = amp[i] * u
            delta = tg - gamma_flat[i]
            dj2 = 2.0 * (delta * cu).real + np.abs(delta) ** 2 * (
                abs(amp[i]) ** 2 * n_disk
            )
            j = int(np.argmin(dj2))
            if dj2[j] < -accept_floor:
                step = delta[j]
                residual += step * amp[i] * phases
                j2 += dj2[j]
                gamma_flat[i] = tg[j]
                idx[i] = j
                n_accepted += 1
        sweeps += 1
        if n_accepted == 0:
            converged = True
            break
        residual = fresh_residual()
        j2_new = float(np.sum(np.abs(residual) ** 2))
        j_prev, j_new = trace[-1], np.sqrt(j2_new)
        trace.append(j_new)
        j2 = j2_new
        if abs(j_prev - j_new) < problem.tol * max(j_prev, np.finfo(float).tiny):
            converged = True

    detunings = DetuningMap(grid, table.f0_ghz[idx].reshape(grid.ny, grid.nx))
    mask = RISMask(
        grid,
        gamma_flat.reshape(grid.ny, grid.nx),
        info={
            "operation": "unit-cell fit",
            "converged": converged,
            "sweeps": sweeps,
            "objective": float(trace[-1]),
        },
    )
    return OptResult(detunings, mask, np.asarray(trace), converged, sweeps)
