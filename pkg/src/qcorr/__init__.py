"""Compact quantum subgroups and left invariant subalgebras of finite quantum groups.

Every object is a finite-dimensional structure-constant model; every claim
is a residual compared against a tolerance.
"""
from .algebra import StarAlgebra, Subalgebra, ValidationReport, validate_star_algebra
from .cocommutative import build_function_algebra, build_group_algebra
from .config import DEFAULT_TOL, get_tol, rng
from .correspondence import (build_quotient_subgroup, correspond, covariant_expectation,
                             enumerate_quantum_subgroups, invariant_closure,
                             invariant_subalgebra_of, is_left_invariant, is_symmetric,
                             roundtrip_subalgebra, roundtrip_subgroup)
from .errors import QCorrError
from .groups import FiniteGroup, enumerate_subgroups, named_group
from .instances import build_instance, build_kac_paljutkin, corpus
from .qgroup import QuantumGroup, build_dual, validate_quantum_group

__version__ = "0.1.0"

__all__ = [
    "StarAlgebra", "Subalgebra", "ValidationReport", "validate_star_algebra",
    "build_function_algebra", "build_group_algebra", "DEFAULT_TOL", "get_tol", "rng",
    "build_quotient_subgroup", "correspond", "covariant_expectation",
    "enumerate_quantum_subgroups", "invariant_closure", "invariant_subalgebra_of",
    "is_left_invariant", "is_symmetric", "roundtrip_subalgebra", "roundtrip_subgroup",
    "QCorrError", "FiniteGroup", "enumerate_subgroups", "named_group", "build_instance",
    "build_kac_paljutkin", "corpus", "QuantumGroup", "build_dual", "validate_quantum_group",
]
