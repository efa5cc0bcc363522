"""Maximum-entropy inference over projected convex state spaces.

The package computes the inference map that assigns to a mean value the
unique disorderliness-maximizing state in its fiber, and numerically
certifies where that map is continuous by probing openness of the
projection restricted to the state space.
"""

from __future__ import annotations

__version__ = "0.1.0"

from .errors import (
    ConvergenceError,
    DensityCheckError,
    InfeasibleMeanError,
    MaxentProbeError,
    SolverError,
    ValidationError,
)
from .hermitian import (
    DensityCheck,
    Hermitian,
    Spectrum,
    direct_sum,
    gibbs_state,
    hs_distance,
    hs_inner,
    hs_norm,
    identity,
    is_density,
    pauli,
    spectrum,
    von_neumann_entropy,
    zero,
)

__all__ = [
    "ConvergenceError",
    "DensityCheck",
    "DensityCheckError",
    "Hermitian",
    "InfeasibleMeanError",
    "MaxentProbeError",
    "SolverError",
    "Spectrum",
    "ValidationError",
    "direct_sum",
    "gibbs_state",
    "hs_distance",
    "hs_inner",
    "hs_norm",
    "identity",
    "is_density",
    "pauli",
    "spectrum",
    "von_neumann_entropy",
    "zero",
]
