"""Isometric actions of quantum permutation groups on finite metric spaces.

The core test: a magic unitary grid ``a`` acts 1-isometrically on ``(X, d)``
iff ``a`` commutes with the distance matrix ``d``. The package checks this
criterion two ways and corroborates verdicts with transport certificates or
explicit witness states.
"""

from __future__ import annotations

from .classical_group import PermutationGroup, generated_group, isometry_group, largest_isometric_subgroup
from .errors import ConsistencyError, InputError, QmiError
from .isometry_check import Verdict, Witness, certify_pair, decide_isometric, lipdefect, witness_search
from .magic_unitary import (
    CommutationReport,
    MagicUnitary,
    check_commutation,
    from_permutation,
    star_product,
    two_block_quantum,
    validate_magic,
)
from .matrix_core import State
from .metric_space import FiniteMetricSpace, lipnorm, validate_metric
from .transport import CouplingProblem, CutCertificate, TransportPlan, coupling_for_pair, hall_check, solve_transport

__all__ = [
    "CommutationReport", "ConsistencyError", "CouplingProblem", "CutCertificate", "FiniteMetricSpace",
    "InputError", "MagicUnitary", "PermutationGroup", "QmiError", "State", "TransportPlan", "Verdict",
    "Witness", "certify_pair", "check_commutation", "coupling_for_pair", "decide_isometric",
    "from_permutation", "generated_group", "hall_check", "isometry_group", "largest_isometric_subgroup",
    "lipdefect", "lipnorm", "solve_transport", "star_product", "two_block_quantum", "validate_magic",
    "validate_metric", "witness_search",
]
