from __future__ import absolute_import, division, print_function

from slotbench.training.checkpoint import (
    CheckpointError,
    FrozenParametersError,
    build_model,
    freeze,
    load_checkpoint,
    load_model,
    parameter_checksum,
    save_checkpoint,
)
from slotbench.training.trainers import (
    DivergenceError,
    ImageData,
    Trainer,
    TrainingResult,
    images_to_tensor,
    seed_everything,
    train_representation,
    trainer_for,
)

__all__ = [
    "CheckpointError",
    "DivergenceError",
    "FrozenParametersError",
    "ImageData",
    "Trainer",
    "TrainingResult",
    "build_model",
    "freeze",
    "images_to_tensor",
    "load_checkpoint",
    "load_model",
    "parameter_checksum",
    "save_checkpoint",
    "seed_everything",
    "train_representation",
    "trainer_for",
]
