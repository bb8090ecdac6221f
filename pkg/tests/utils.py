from __future__ import absolute_import, division, print_function

import os

import numpy as np

from slotbench.models import SlotAttentionAutoEncoder, SlotConfig
from slotbench.scenegen.dataset import generate_dataset


def resource_file(filepath):
    return os.path.join(test_directory(), "resources", filepath)


def test_directory():
    """Helper function to return path to the tests directory"""
    return os.path.dirname(__file__)


def micro_dataset(root, episodes=2, n_blocks=1, resolution=(16, 16), seed=0):
    return generate_dataset(
        root, episodes, n_blocks=n_blocks, resolution=resolution, seed=seed
    )


def micro_slot_model(num_slots=3, resolution=(16, 16)):
    config = SlotConfig(
        num_slots=num_slots,
        slot_dim=16,
        iters=2,
        resolution=resolution,
        encoder_channels=(8, 8),
        decoder_resolution=(4, 4),
        decoder_hidden=8,
        mlp_hidden=16,
        kernel_size=3,
    )
    return SlotAttentionAutoEncoder(config)


def random_images(n, resolution=(16, 16), seed=0):
    rng = np.random.default_rng(seed)
    return rng.integers(0, 256, size=(n,) + tuple(resolution) + (3,), dtype=np.uint8)
