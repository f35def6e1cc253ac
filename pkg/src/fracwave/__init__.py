"""Fundamental solutions of distributed-order fractional wave equations.

The public API is re-exported here; see the submodules for details.
"""
from __future__ import annotations

from ._backend import BACKEND_NAME
from .admissibility import (
    A2ScanReport,
    CaseLabel,
    check_ratio_chain,
    classify,
    im_psi_closed_form,
    psi,
    scan_a2prime,
)
from .constitutive import (
    DiscreteModel,
    FractionalTerm,
    PowerTypeModel,
    elastic,
    eval_on_cut,
    fractional_zener,
    maxwell,
    modified_maxwell,
    modified_zener,
    omega_at,
    phi_at,
    power_type,
    ratio_at,
    reference_models,
)
from .errors import (
    DomainError,
    FracwaveError,
    GridMismatch,
    InfiniteSpeed,
    NotAdmissible,
    NumericalError,
    ParseError,
    ValidationError,
)
from .kernel import (
    KernelGrid,
    KernelPoint,
    PointStatus,
    QuadratureSettings,
    check_a5_a6,
    kernel_grid,
    kernel_mass,
    kernel_point,
    oracle_invert,
)
from .material import (
    MaterialSummary,
    TypeLabel,
    creep_compliance,
    creep_growth_diagnostic,
    relaxation_modulus,
    slowness,
    summary,
    wave_speed_dimensional,
)
from .solver import DiracAt, InitialData, Sampled, ZERO, Zero, s_kernel_point, solve_profile

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "A2ScanReport",
    "BACKEND_NAME",
    "CaseLabel",
    "check_a5_a6",
    "check_ratio_chain",
    "classify",
    "creep_compliance",
    "creep_growth_diagnostic",
    "DiracAt",
    "DiscreteModel",
    "DomainError",
    "elastic",
    "eval_on_cut",
    "fractional_zener",
    "FractionalTerm",
    "FracwaveError",
    "GridMismatch",
    "im_psi_closed_form",
    "InfiniteSpeed",
    "InitialData",
    "kernel_grid",
    "kernel_mass",
    "kernel_point",
    "KernelGrid",
    "KernelPoint",
    "MaterialSummary",
    "maxwell",
    "modified_maxwell",
    "modified_zener",
    "NotAdmissible",
    "NumericalError",
    "omega_at",
    "oracle_invert",
    "ParseError",
    "phi_at",
    "PointStatus",
    "power_type",
    "PowerTypeModel",
    "psi",
    "QuadratureSettings",
    "ratio_at",
    "reference_models",
    "relaxation_modulus",
    "s_kernel_point",
    "Sampled",
    "scan_a2prime",
    "slowness",
    "solve_profile",
    "summary",
    "TypeLabel",
    "ValidationError",
    "wave_speed_dimensional",
    "Zero",
    "ZERO",
]
