from __future__ import absolute_import, division, print_function

from slotbench.localize.centroids import EMPTY_CENTROID, mask_centroids
from slotbench.localize.localizer import (
    FrozenParametersError,
    Localizer,
    localizer_variant,
    representation_features,
    train_localizer,
)
from slotbench.localize.pck import DEFAULT_THRESHOLD, PCKReport, pck

__all__ = [
    "DEFAULT_THRESHOLD",
    "EMPTY_CENTROID",
    "FrozenParametersError",
    "Localizer",
    "PCKReport",
    "localizer_variant",
    "mask_centroids",
    "pck",
    "representation_features",
    "train_localizer",
]
