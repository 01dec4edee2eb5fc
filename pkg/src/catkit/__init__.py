"""Cavity mode spectra, Mie phase shifts, and ground-state overlap scaling.

The pipeline: permittivity models (`media`) feed TE phase shifts
(`scattering`), which shift the empty-cavity spectrum (`modes`); mode
overlaps assemble into a matrix (`overlap`) whose determinant and Gaussian
ground-state overlap (`gaussian`) decay as a power of the mode count,
quantified by the scans in `analysis`.
"""

from .analysis import (
    ExponentFit,
    ScalingRun,
    contour_scan,
    exponent_vs_phase_shift,
    fit_power_law,
    pc_overlap_check,
    scan_fixed_ratio,
)
from .gaussian import (
    OverlapResult,
    log_abs_det,
    log_partial_overlap,
    overlap_quadrature_oracle,
    partial_overlap_S,
)
from .media import (
    Dielectric,
    Drude,
    Medium,
    PerfectConductor,
    Vacuum,
    index_squared,
    medium_spec,
    parse_medium,
    permittivity,
)
from .modes import (
    CavityGeometry,
    ModeSpectrum,
    build_spectrum,
    empty_cavity_wavevectors,
    perturbed_wavevectors_exact,
    perturbed_wavevectors_shift,
)
from .overlap import (
    OverlapMatrix,
    build_overlap_matrix,
    mode_overlap_asymptotic,
    mode_overlap_quadrature,
    radial_mode_function,
)
from .scattering import (
    PhaseShiftCurve,
    delta_oracle,
    interior_log_derivative,
    phase_shift,
    phase_shift_curve,
    unwrap_branch,
)
from .specfun import BesselPair, mod_sph_bessel_i, riccati, sph_bessel

__version__ = "0.1.0"

__all__ = [
    "BesselPair",
    "CavityGeometry",
    "Dielectric",
    "Drude",
    "ExponentFit",
    "Medium",
    "ModeSpectrum",
    "OverlapMatrix",
    "OverlapResult",
    "PerfectConductor",
    "PhaseShiftCurve",
    "ScalingRun",
    "Vacuum",
    "build_overlap_matrix",
    "build_spectrum",
    "contour_scan",
    "delta_oracle",
    "empty_cavity_wavevectors",
    "exponent_vs_phase_shift",
    "fit_power_law",
    "index_squared",
    "interior_log_derivative",
    "log_abs_det",
    "log_partial_overlap",
    "medium_spec",
    "mod_sph_bessel_i",
    "mode_overlap_asymptotic",
    "mode_overlap_quadrature",
    "overlap_quadrature_oracle",
    "parse_medium",
    "partial_overlap_S",
    "pc_overlap_check",
    "permittivity",
    "perturbed_wavevectors_exact",
    "perturbed_wavevectors_shift",
    "phase_shift",
    "phase_shift_curve",
    "radial_mode_function",
    "riccati",
    "scan_fixed_ratio",
    "sph_bessel",
    "unwrap_branch",
]
