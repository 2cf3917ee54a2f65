"""Exact error-distribution tools for postselected bit-flip fault tolerance."""

from .distributions import (
    FLOAT,
    RATIONAL,
    DomainError,
    ErrorDistribution,
    make_distribution,
    point_mass,
    product_distribution,
    total_variation,
)
from .gadgets import (
    GadgetConfig,
    GadgetResult,
    build_bell_prep,
    build_plus_prep,
    build_teleported_cnot,
    run_exact,
)
from .mixing import check_hull_membership, min_uniform_parameter, mixing_coefficients, reconstruct
from .montecarlo import sample_pauli_frame
from .quotient import embed_distribution, quotient_of
from .threshold import LevelParams, iterate_levels, level_map, sweep_threshold

__all__ = [
    "FLOAT",
    "RATIONAL",
    "DomainError",
    "ErrorDistribution",
    "GadgetConfig",
    "GadgetResult",
    "LevelParams",
    "build_bell_prep",
    "build_plus_prep",
    "build_teleported_cnot",
    "check_hull_membership",
    "embed_distribution",
    "iterate_levels",
    "level_map",
    "make_distribution",
    "min_uniform_parameter",
    "mixing_coefficients",
    "point_mass",
    "product_distribution",
    "quotient_of",
    "reconstruct",
    "run_exact",
    "sample_pauli_frame",
    "sweep_threshold",
    "total_variation",
]
