from __future__ import absolute_import, division, print_function

import os
import shutil
import tempfile
import unittest

import numpy as np
import torch

from slotbench.models import ContrastiveConfig, MomentumContrast
from slotbench.training.checkpoint import load_checkpoint
from slotbench.training.trainers import (
    ContrastiveTrainer,
    DivergenceError,
    ImageData,
    ReconstructionTrainer,
    Trainer,
    images_to_tensor,
    train_representation,
    trainer_for,
)
from tests.utils import micro_slot_model, random_images


class ExplodingTrainer(Trainer):
    def compute_loss(self, batch):
        loss = self.model.reconstruction_loss(batch)
        if self.calls == 2:
            loss = loss * float("nan")
        self.calls += 1
        return loss, None


class ImagesToTensorTest(unittest.TestCase):
    def test_uint8(self):
        images = np.full((2, 4, 5, 3), 255, dtype=np.uint8)
        x = images_to_tensor(images)
        assert x.shape == (2, 3, 4, 5)
        assert torch.all(x == 1.0)

    def test_float(self):
        images = np.full((1, 4, 4, 3), 0.25, dtype=np.float32)
        assert torch.all(images_to_tensor(images) == 0.25)


class TrainerTest(unittest.TestCase):
    def setUp(self):
        self.tmp = tempfile.mkdtemp()
        self.images = random_images(6)

    def tearDown(self):
        shutil.rmtree(self.tmp)

    def test_fit_writes_checkpoints(self):
        result = train_representation(
            micro_slot_model,
            self.images,
            steps=4,
            batch_size=2,
            warmup=2,
            checkpoint_every=2,
            output_dir=self.tmp,
        )
        assert len(result.losses) == 4
        assert sorted(os.listdir(self.tmp)) == ["best.pt", "step_000002.pt", "step_000004.pt"]
        best = load_checkpoint(os.path.join(self.tmp, "best.pt"))
        assert best["step"] == result.best_step
        assert abs(best["loss"] - result.best_loss) < 1e-12
        assert result.initial_loss == result.losses[0]
        assert not result.model.training

    def test_seeded_runs_repeat(self):
        a = train_representation(micro_slot_model, self.images, steps=3, batch_size=2, seed=5)
        b = train_representation(micro_slot_model, self.images, steps=3, batch_size=2, seed=5)
        assert a.losses == b.losses

    def test_divergence(self):
        torch.manual_seed(0)
        trainer = ExplodingTrainer(micro_slot_model(), steps=5, batch_size=2)
        trainer.calls = 0
        with self.assertRaises(DivergenceError) as cm:
            trainer.fit(ImageData(self.images))
        assert cm.exception.step == 3
        assert np.isfinite(cm.exception.last_loss)

    def test_bad_arguments(self):
        with self.assertRaises(ValueError):
            ReconstructionTrainer(micro_slot_model(), steps=0)
        with self.assertRaises(ValueError):
            ImageData(np.zeros((0, 4, 4, 3), dtype=np.uint8))

    def test_contrastive_trainer_fills_queue(self):
        model = MomentumContrast(
            ContrastiveConfig(resolution=(16, 16), encoder_channels=(4,), kernel_size=3, embedding_dim=8, queue_size=64, batch_size=3)
        )
        trainer = trainer_for(model, steps=2)
        assert isinstance(trainer, ContrastiveTrainer)
        assert trainer.batch_size == 3
        trainer.fit(ImageData(self.images))
        assert int(model.queue_count) == 6
        assert model.queued_keys().shape == (6, 8)
