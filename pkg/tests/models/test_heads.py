from __future__ import absolute_import, division, print_function

import os
import shutil
import tempfile
import unittest

import numpy as np
import torch

from slotbench.models import (
    EnergyNet,
    ExplicitPolicyNet,
    LocalizerConfig,
    LocalizerMLP,
    PolicyConfig,
    export_masks,
    read_masks,
)
from slotbench.models.export import MASK_SCALE


class PolicyNetsTest(unittest.TestCase):
    def setUp(self):
        self.config = PolicyConfig(in_channels=5, resolution=(16, 16), channels=(8, 8), hidden=32)
        self.obs = torch.rand(3, 5, 16, 16)

    def test_explicit(self):
        assert ExplicitPolicyNet(self.config)(self.obs).shape == (3, 2)

    def test_energies(self):
        net = EnergyNet(self.config)
        actions = torch.rand(3, 7, 2) * 2 - 1
        assert net(self.obs, actions).shape == (3, 7)

    def test_odd_resolution(self):
        config = PolicyConfig(in_channels=3, resolution=(15, 9), channels=(4, 4), hidden=8)
        assert ExplicitPolicyNet(config)(torch.rand(1, 3, 15, 9)).shape == (1, 2)

    def test_bad_config(self):
        with self.assertRaises(ValueError):
            PolicyConfig(in_channels=0)


class LocalizerMLPTest(unittest.TestCase):
    def test_standardisation(self):
        mlp = LocalizerMLP(LocalizerConfig(in_features=3, n_entities=2, hidden=8))
        features = np.array([[0.0, 5.0, 1.0], [2.0, 5.0, 3.0]], dtype=np.float32)
        mlp.set_statistics(features)
        assert torch.allclose(mlp.input_mean, torch.tensor([1.0, 5.0, 2.0]))
        # a constant column keeps unit scale
        assert torch.allclose(mlp.input_std, torch.tensor([1.0, 1.0, 1.0]))
        assert mlp(torch.as_tensor(features)).shape == (2, 2, 2)

    def test_bad_config(self):
        with self.assertRaises(ValueError):
            LocalizerConfig(in_features=0)


class ExportMasksTest(unittest.TestCase):
    def setUp(self):
        self.tmp = tempfile.mkdtemp()

    def tearDown(self):
        shutil.rmtree(self.tmp)

    def test_pages_and_sidecar(self):
        masks = np.random.default_rng(0).dirichlet(np.ones(3), size=(8, 6)).transpose(2, 0, 1)
        sidecar = export_masks(masks, self.tmp, meta={"scene": 4})
        assert sorted(os.listdir(self.tmp)) == [
            "masks.json",
            "masks_slot_00.png",
            "masks_slot_01.png",
            "masks_slot_02.png",
        ]
        back, info = read_masks(sidecar)
        assert info["num_slots"] == 3
        assert info["resolution"] == [8, 6]
        assert info["meta"] == {"scene": 4}
        assert np.abs(back - masks).max() <= 0.5 / MASK_SCALE + 1e-12

    def test_rejects_flat(self):
        with self.assertRaises(ValueError):
            export_masks(np.zeros((4, 4)), self.tmp)
