from __future__ import absolute_import, division, print_function

import json
import unittest

import numpy as np

from slotbench.collectors.expert.expert_collector import ExpertCollector, ExpertQuotaError


class ExpertCollectorTest(unittest.TestCase):
    def setUp(self):
        self.c = ExpertCollector(n_blocks=1, resolution=(16, 16), seed=0)

    def test_needs_range(self):
        with self.assertRaises(ValueError):
            self.c.collect()

    def test_collect(self):
        records = self.c.filter(seeds=(0, 2)).collect()
        assert len(records) == 2
        for record in records:
            assert record.success
            assert record.frames[0].image.shape == (16, 16, 3)

    def test_range_is_a_slice(self):
        full = self.c.filter(seeds=(0, 3)).collect(rendered=False)
        tail = ExpertCollector(n_blocks=1, seed=0).filter(seeds=(1, 3)).collect(rendered=False)
        assert [r.seed for r in full[1:]] == [r.seed for r in tail]
        assert np.array_equal(full[2].actions(), tail[1].actions())

    def test_raw(self):
        lines = self.c.filter(seeds=(0, 1)).raw()[0]
        first = json.loads(lines[0])
        assert first["t"] == 0
        assert first["success"] is True

    def test_features(self):
        assert self.c.list_features() == ["blue_cube", "effector"]
        assert "rgb" in self.c.list_variables()

    def test_quota(self):
        # episodes of one step cannot reach the pole
        c = ExpertCollector(n_blocks=1, max_steps=1, attempt_factor=1).filter(seeds=(0, 2))
        with self.assertRaises(ExpertQuotaError):
            c.collect(rendered=False)
