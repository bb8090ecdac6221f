from __future__ import absolute_import, division, print_function

import unittest

import numpy as np
import torch

from slotbench.policy.observation import ObservationBuilder, build_observation, target_planes
from slotbench.scenegen.raster import render
from slotbench.scenegen.world import sample_scene
from slotbench.training.checkpoint import CheckpointError
from tests.models.test_baselines import small_autoencoder
from tests.utils import micro_slot_model


class ObservationTest(unittest.TestCase):
    def setUp(self):
        torch.manual_seed(0)
        self.states = [sample_scene(s, 3) for s in range(2)]
        self.images = np.stack([render(s, (16, 16)) for s in self.states])

    def test_rgb(self):
        builder = ObservationBuilder("rgb", n_blocks=3)
        obs = builder.build(self.images)
        assert obs.shape == (2, 3, 16, 16)
        assert builder.input_channels() == 6

    def test_ground_truth_segmentation(self):
        builder = ObservationBuilder("rgb_plus_gt_segmentation", n_blocks=3)
        obs = builder.build(self.images, self.states)
        assert obs.shape == (2, builder.channels(), 16, 16)
        assert builder.channels() == 9
        assert torch.all(obs[:, 3:].sum(dim=1) == 1)
        with self.assertRaises(ValueError):
            builder.build(self.images)

    def test_slot_variants(self):
        model = micro_slot_model(num_slots=3)
        masks = ObservationBuilder("slot_masks", model, n_blocks=3).build(self.images)
        assert masks.shape == (2, 3, 16, 16)
        assert torch.allclose(masks.sum(dim=1), torch.ones(2, 16, 16), atol=1e-5)
        both = ObservationBuilder("rgb_plus_slot", model, n_blocks=3)
        assert both.build(self.images).shape == (2, 3 + 8, 16, 16)
        assert both.verify_frozen()

    def test_autoencoder_variants(self):
        model = small_autoencoder()
        assert ObservationBuilder("autoencoder_features", model, 3).channels() == 8
        assert ObservationBuilder("rgb_plus_autoencoder", model, 3).channels() == 11

    def test_representation_required(self):
        with self.assertRaises(CheckpointError):
            ObservationBuilder("slot_masks")
        with self.assertRaises(CheckpointError):
            ObservationBuilder("slot_masks", small_autoencoder())
        with self.assertRaises(ValueError):
            ObservationBuilder("depth")

    def test_frozen_check(self):
        model = micro_slot_model()
        builder = ObservationBuilder("slot_masks", model, 3)
        with torch.no_grad():
            next(model.parameters()).add_(1.0)
        assert not builder.verify_frozen()

    def test_target_planes(self):
        planes = target_planes([2, 0], 3, (4, 5))
        assert planes.shape == (2, 3, 4, 5)
        assert torch.all(planes[0, 2] == 1) and torch.all(planes[0, :2] == 0)
        assert torch.all(planes[1, 0] == 1)

    def test_policy_input(self):
        builder = ObservationBuilder("rgb", n_blocks=3)
        x = builder.policy_input(self.images, self.states, [1, 2])
        assert x.shape == (2, 6, 16, 16)

    def test_single_frame(self):
        obs = build_observation(self.images[0], "rgb_plus_gt_segmentation", state=self.states[0])
        assert obs.shape == (9, 16, 16)
