from __future__ import absolute_import, division, print_function

from .expert import scripted_expert
from .raster import GroundTruthMasks, ground_truth_masks, render
from .roster import BlockSpec, roster
from .state import SceneState
from .trajectory import TrajectoryRecord, rollout, rollout_expert
from .world import OverDenseSceneError, sample_scene, step

__all__ = [
    "BlockSpec",
    "GroundTruthMasks",
    "OverDenseSceneError",
    "SceneState",
    "TrajectoryRecord",
    "ground_truth_masks",
    "render",
    "rollout",
    "rollout_expert",
    "roster",
    "sample_scene",
    "scripted_expert",
    "step",
]
