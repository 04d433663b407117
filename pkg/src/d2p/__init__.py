"""Deterministic two-phase Grover search with a fixed oracle.

Submodules:

``subspace``     exact 2x2 model, closed-form iterate powers, Bloch coordinates
``solver``       query counts and the two-phase schedule solver
``statevector``  n-qubit statevector simulation and dense amplitude amplification
``circuit``      gate-list circuits, MCPhase lowering, OpenQASM 3 export
``experiments``  lambda and oracle-phase sweeps, CSV/JSON export
``cli``          command-line interface (``python -m d2p``)
"""

from .errors import DomainError, NoConvergence, OutOfSubspace, PoleError
from .solver import PhaseSchedule, QueryPlan, k_opt, k_prime_opt, solve, solve_min_k, theta0
from .statevector import SearchSpec
from .subspace import BlochVector, RotationDecomposition, SubspaceState

__version__ = "0.1.0"

__all__ = [
    "BlochVector",
    "DomainError",
    "NoConvergence",
    "OutOfSubspace",
    "PhaseSchedule",
    "PoleError",
    "QueryPlan",
    "RotationDecomposition",
    "SearchSpec",
    "SubspaceState",
    "k_opt",
    "k_prime_opt",
    "solve",
    "solve_min_k",
    "theta0",
]
