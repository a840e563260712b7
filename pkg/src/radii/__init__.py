"""Radii of lemniscate and Janowski starlikeness and convexity for normalized special functions."""

from .certify import Certificate, boundary_max, brute_force_radius, certify
from .errors import (BracketFailure, CapReached, CertificationFailure, InvalidProblem, InvalidSpec,
                     NoSignChange, NonConvergence, NumericalFailure, PoleAtZero, RadiiError)
from .series import (Family, FamilySpec, Normalization, SeriesConfig, convex_ratio, eval_family,
                     phi_ratio, q_pochhammer)
from .solver import (KindName, RadiusKind, RadiusProblem, RadiusResult, domain_cap, radius_table,
                     solve_radius, target_value)
from .zeros import ZeroTarget, first_positive_zero, zero_ladder

__all__ = [
    "BracketFailure", "CapReached", "Certificate", "CertificationFailure", "Family", "FamilySpec",
    "InvalidProblem", "InvalidSpec", "KindName", "NoSignChange", "NonConvergence", "Normalization",
    "NumericalFailure", "PoleAtZero", "RadiiError", "RadiusKind", "RadiusProblem", "RadiusResult",
    "SeriesConfig", "ZeroTarget", "boundary_max", "brute_force_radius", "certify", "convex_ratio",
    "domain_cap", "eval_family", "first_positive_zero", "phi_ratio", "q_pochhammer", "radius_table",
    "solve_radius", "target_value", "zero_ladder",
]
