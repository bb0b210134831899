"""Flag-and-flip QUBO annealing with exact encoders for constrained problems."""

from .annealer import AnnealConfig, AnnealResult, anneal, anneal_normal, anneal_parallel
from .qubo import (
    EqualitySystem,
    QuboModel,
    apply_flip,
    delta_energy,
    delta_energy_all,
    dualize,
    energy,
    permute,
    scale,
)

__version__ = "0.1.0"

__all__ = [
    "AnnealConfig",
    "AnnealResult",
    "EqualitySystem",
    "QuboModel",
    "anneal",
    "anneal_normal",
    "anneal_parallel",
    "apply_flip",
    "delta_energy",
    "delta_energy_all",
    "dualize",
    "energy",
    "permute",
    "scale",
]
