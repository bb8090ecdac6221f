from __future__ import absolute_import, division, print_function

import json
import os
import shutil
import tempfile
import unittest

import numpy as np
import pandas as pd

from slotbench.localize.centroids import mask_centroids
from slotbench.localize.pck import PCKReport, pck


class CentroidsTest(unittest.TestCase):
    def test_single_pixel(self):
        masks = np.zeros((2, 4, 8))
        masks[0, 1, 6] = 1.0
        c = mask_centroids(masks)
        assert np.allclose(c[0], [6.5 / 8, 1.5 / 4])
        # empty slot sits in the middle
        assert np.allclose(c[1], [0.5, 0.5])

    def test_weighted_mean_closed_form(self):
        rng = np.random.default_rng(3)
        masks = rng.random((2, 3, 5, 7))
        c = mask_centroids(masks)
        assert c.shape == (2, 3, 2)
        ys, xs = np.mgrid[0:5, 0:7]
        for b in range(2):
            for k in range(3):
                m = masks[b, k]
                x = (m * (xs + 0.5) / 7).sum() / m.sum()
                y = (m * (ys + 0.5) / 5).sum() / m.sum()
                assert abs(c[b, k, 0] - x) < 1e-6
                assert abs(c[b, k, 1] - y) < 1e-6

    def test_bad_shape(self):
        with self.assertRaises(ValueError):
            mask_centroids(np.zeros((4, 4)))


class PCKTest(unittest.TestCase):
    def setUp(self):
        rng = np.random.default_rng(0)
        self.gt = rng.random((50, 3, 2))
        self.names = ["red_moon", "red_cube", "effector"]

    def test_perfect(self):
        report = pck(self.gt, self.gt, names=self.names)
        assert report.mean == 100.0
        assert list(report.per_object) == self.names
        assert report.n_eval == 50

    def test_monotone_in_threshold(self):
        noisy = self.gt + np.random.default_rng(1).normal(scale=0.08, size=self.gt.shape)
        means = [pck(noisy, self.gt, t).mean for t in (0.02, 0.05, 0.1, 0.2, 0.5)]
        assert means == sorted(means)
        assert means[-1] > means[0]

    def test_threshold_is_inclusive(self):
        gt = np.round(self.gt * 64) / 64
        pred = gt.copy()
        pred[:, :, 0] += 0.0625
        report = pck(pred, gt, threshold=0.0625)
        assert report.mean == 100.0
        assert pck(pred, gt, threshold=0.0624).mean == 0.0

    def test_table_length_scales(self):
        pred = self.gt + [0.15, 0.0]
        assert pck(pred, self.gt, 0.1).mean == 0.0
        assert pck(pred, self.gt, 0.1, table_length=2.0).mean == 100.0

    def test_errors(self):
        with self.assertRaises(ValueError):
            pck(self.gt[:, :2], self.gt)
        with self.assertRaises(ValueError):
            pck(self.gt[:0], self.gt[:0])
        with self.assertRaises(ValueError):
            pck(self.gt, self.gt, threshold=0)
        with self.assertRaises(ValueError):
            pck(self.gt, self.gt, names=["a"])

    def test_group_means(self):
        pred = self.gt.copy()
        pred[:, 1] += 1.0
        report = pck(pred, self.gt, names=self.names)
        assert report.group_means == {"red": 50.0}
        assert abs(report.mean - 200.0 / 3) < 1e-9

    def test_write(self):
        tmp = tempfile.mkdtemp()
        try:
            report = pck(self.gt, self.gt, names=self.names)
            csv_path, json_path = report.write(tmp)
            frame = pd.read_csv(csv_path)
            assert list(frame["object"]) == self.names
            with open(json_path) as f:
                again = PCKReport.from_dict(json.load(f))
            assert again.to_dict() == report.to_dict()
            assert sorted(os.listdir(tmp)) == ["pck.csv", "pck.json"]
        finally:
            shutil.rmtree(tmp)
