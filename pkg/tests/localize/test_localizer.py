from __future__ import absolute_import, division, print_function

import os
import shutil
import tempfile
import unittest

import numpy as np
import torch

from slotbench.localize.localizer import (
    Localizer,
    localizer_variant,
    representation_features,
    train_localizer,
)
from slotbench.models import ContrastiveConfig, MomentumContrast
from slotbench.scenegen.dataset import to_uint8
from slotbench.scenegen.raster import render
from slotbench.scenegen.roster import entity_names
from slotbench.scenegen.world import sample_scene
from slotbench.training.checkpoint import FrozenParametersError, parameter_checksum
from tests.models.test_baselines import small_autoencoder
from tests.utils import micro_slot_model, random_images


class RepresentationFeaturesTest(unittest.TestCase):
    def setUp(self):
        torch.manual_seed(0)
        self.images = random_images(5)

    def test_slot_centroids(self):
        model = micro_slot_model(num_slots=3)
        assert localizer_variant(model) == "slot_centroids"
        features = representation_features(model, self.images, batch_size=2)
        assert features.shape == (5, 6)
        assert np.all((features >= 0) & (features <= 1))

    def test_autoencoder_pooled(self):
        model = small_autoencoder()
        assert localizer_variant(model) == "autoencoder_pooled"
        assert representation_features(model, self.images).shape == (5, 8)

    def test_moco_embedding(self):
        model = MomentumContrast(
            ContrastiveConfig(resolution=(16, 16), encoder_channels=(4,), kernel_size=3, embedding_dim=8)
        )
        features = representation_features(model, self.images)
        assert features.shape == (5, 8)
        assert np.allclose(np.linalg.norm(features, axis=1), 1.0, atol=1e-5)


class LocalizerTest(unittest.TestCase):
    def setUp(self):
        self.tmp = tempfile.mkdtemp()
        torch.manual_seed(0)
        self.images = random_images(12)
        rng = np.random.default_rng(0)
        self.targets = rng.random((12, 2, 2))
        self.names = ["blue_cube", "effector"]

    def tearDown(self):
        shutil.rmtree(self.tmp)

    def test_overfits_features(self):
        loc = Localizer(None, self.names, steps=3000, batch_size=12, lr=1e-3, hidden=64)
        features = np.random.default_rng(1).normal(size=(12, 4)).astype(np.float32)
        result = loc.fit_features(features, self.targets)
        assert result.final_loss < 1e-3
        assert loc.regression_loss(features, self.targets) < 1e-3
        assert loc.predict_features(features).shape == (12, 2, 2)

    def test_upstream_untouched(self):
        model = micro_slot_model()
        before = parameter_checksum(model)
        loc, result = train_localizer(model, self.images, self.targets, self.names, steps=5, batch_size=4)
        assert parameter_checksum(model) == before
        assert loc.upstream_checksum == before
        assert all(not p.requires_grad for p in model.parameters())
        report = loc.evaluate(self.images, self.targets, threshold=0.5)
        assert list(report.per_object) == self.names

    def test_save_and_load(self):
        model = micro_slot_model()
        loc, _ = train_localizer(model, self.images, self.targets, self.names, steps=3, batch_size=4)
        path = loc.save(os.path.join(self.tmp, "loc.pt"))
        again = Localizer.load(path, model)
        assert again.names == self.names
        assert np.allclose(again.predict(self.images), loc.predict(self.images))

        with torch.no_grad():
            next(model.parameters()).add_(1.0)
        with self.assertRaises(FrozenParametersError):
            Localizer.load(path, model)

    def test_misaligned(self):
        loc = Localizer(None, ["effector"], steps=1)
        with self.assertRaises(ValueError):
            loc.fit_features(np.zeros((12, 3), dtype=np.float32), self.targets)
        with self.assertRaises(ValueError):
            loc.predict_features(np.zeros((1, 3)))


class SingleSceneTest(unittest.TestCase):
    def test_overfit(self):
        torch.manual_seed(0)
        state = sample_scene(2, 1)
        images = to_uint8(render(state, (16, 16)))[np.newaxis]
        targets = state.positions()[np.newaxis]
        loc, result = train_localizer(
            micro_slot_model(),
            images,
            targets,
            entity_names(state.blocks),
            steps=3000,
            batch_size=1,
            lr=1e-3,
            hidden=64,
        )
        assert result.final_loss < 1e-6
        assert loc.regression_loss(loc.features(images), targets) < 1e-6
