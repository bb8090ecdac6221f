from __future__ import absolute_import, division, print_function

import os
import shutil
import tempfile
import unittest

import torch

from slotbench.training.checkpoint import (
    CheckpointError,
    freeze,
    load_checkpoint,
    load_model,
    parameter_checksum,
    save_checkpoint,
)
from tests.utils import micro_slot_model


class CheckpointTest(unittest.TestCase):
    def setUp(self):
        self.tmp = tempfile.mkdtemp()
        torch.manual_seed(0)
        self.model = micro_slot_model()

    def tearDown(self):
        shutil.rmtree(self.tmp)

    def test_save_and_load(self):
        path = save_checkpoint(os.path.join(self.tmp, "sub", "m.pt"), self.model, step=7, loss=0.5)
        payload = load_checkpoint(path)
        assert payload["step"] == 7
        assert payload["loss"] == 0.5
        model = load_model(path, expected_kind="slot_attention")
        assert parameter_checksum(model) == parameter_checksum(self.model)
        images = torch.rand(1, 3, 16, 16)
        with torch.no_grad():
            assert torch.equal(model(images)[1].combined, self.model.eval()(images)[1].combined)
        assert os.listdir(os.path.join(self.tmp, "sub")) == ["m.pt"]

    def test_wrong_kind(self):
        path = save_checkpoint(os.path.join(self.tmp, "m.pt"), self.model)
        with self.assertRaises(CheckpointError):
            load_model(path, expected_kind="autoencoder")

    def test_missing_and_garbage(self):
        with self.assertRaises(CheckpointError):
            load_checkpoint(os.path.join(self.tmp, "nothing.pt"))
        bad = os.path.join(self.tmp, "bad.pt")
        with open(bad, "wb") as f:
            f.write(b"not a checkpoint")
        with self.assertRaises(CheckpointError):
            load_checkpoint(bad)
        # CheckpointError stays catchable as an IOError
        with self.assertRaises(IOError):
            load_checkpoint(bad)

    def test_checksum_tracks_parameters(self):
        before = parameter_checksum(self.model)
        assert parameter_checksum(self.model) == before
        with torch.no_grad():
            next(self.model.parameters()).add_(1e-3)
        assert parameter_checksum(self.model) != before

    def test_freeze(self):
        frozen = freeze(self.model)
        assert not frozen.training
        assert all(not p.requires_grad for p in frozen.parameters())
