"""Finite reconfigurable surfaces as spatial filters in k-space."""

__version__ = "0.1.0"

from .beams import ApSpec, GaussianBeamSpec, gaussian_footprint, plane_wave
from .farfield import Observation, lobe_masses, pattern_sweep
from .numerics import (
    ComplexField2D,
    Grid2D,
    Spectrum2D,
    complex_erf,
    embed_field,
    forward_spectrum,
    inverse_spectrum,
)
from .propagation import PropagationPlan, propagate, propagate_to_planes
from .ris import (
    FilterSpec,
    MultiBeamSpec,
    RISMask,
    ShapeMask,
    SteerSpec,
    WavefrontSpec,
    apply_mask,
    bandpass_reflect,
    multibeam_mask,
    reflected_spectrum,
    steering_mask,
    wavefront_mask,
)
from .scenarios import Scenario, bundled_scenarios, load_scenario
from .unitcell import UnitCellModel, gamma_uc, optimize_mask, uc_lookup

__all__ = [
    "__version__",
    # numerics
    "Grid2D",
    "ComplexField2D",
    "Spectrum2D",
    "forward_spectrum",
    "inverse_spectrum",
    "embed_field",
    "complex_erf",
    # beams
    "GaussianBeamSpec",
    "ApSpec",
    "gaussian_footprint",
    "plane_wave",
    # surface masks
    "ShapeMask",
    "RISMask",
    "SteerSpec",
    "MultiBeamSpec",
    "FilterSpec",
    "WavefrontSpec",
    "steering_mask",
    "multibeam_mask",
    "wavefront_mask",
    "apply_mask",
    "reflected_spectrum",
    "bandpass_reflect",
    # propagation and observation
    "PropagationPlan",
    "propagate",
    "propagate_to_planes",
    "Observation",
    "pattern_sweep",
    "lobe_masses",
    # unit cells
    "UnitCellModel",
    "gamma_uc",
    "uc_lookup",
    "optimize_mask",
    # scenarios
    "Scenario",
    "bundled_scenarios",
    "load_scenario",
]
