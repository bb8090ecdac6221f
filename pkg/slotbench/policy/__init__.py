from __future__ import absolute_import, division, print_function

from slotbench.policy.bc import (
    BCPolicy,
    ExpertPolicy,
    load_policy,
    train_policy,
)
from slotbench.policy.dfo import DerivativeFreeOptimizer, grid_energies
from slotbench.policy.evaluate import (
    PolicyEvalReport,
    evaluate_policy,
    evaluation_seeds,
)
from slotbench.policy.observation import (
    VARIANTS,
    ObservationBuilder,
    build_observation,
    target_planes,
)

__all__ = [
    "BCPolicy",
    "DerivativeFreeOptimizer",
    "ExpertPolicy",
    "ObservationBuilder",
    "PolicyEvalReport",
    "VARIANTS",
    "build_observation",
    "evaluate_policy",
    "evaluation_seeds",
    "grid_energies",
    "load_policy",
    "target_planes",
    "train_policy",
]
