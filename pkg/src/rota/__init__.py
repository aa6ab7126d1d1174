"""Disjoint transversal bases from n bases of a rank-n matroid."""

from .errors import (
    BudgetExceeded,
    ContractError,
    InputError,
    PreconditionViolation,
    RotaError,
    StaleCertificateError,
    TheoremViolation,
)
from .matroid import GraphicMatroid, LinearMatroid, Matroid, UniformMatroid, augment, extend_to_size, rank_of
from .rainbow import RIS, Coloured, Family, Instance, is_ris
from .solver import Decomposition, SolverConfig, solve, verify

__all__ = [
    "BudgetExceeded",
    "Coloured",
    "ContractError",
    "Decomposition",
    "Family",
    "GraphicMatroid",
    "InputError",
    "Instance",
    "LinearMatroid",
    "Matroid",
    "PreconditionViolation",
    "RIS",
    "RotaError",
    "SolverConfig",
    "StaleCertificateError",
    "TheoremViolation",
    "UniformMatroid",
    "augment",
    "extend_to_size",
    "is_ris",
    "rank_of",
    "solve",
    "verify",
]
