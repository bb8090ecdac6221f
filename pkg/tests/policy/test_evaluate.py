from __future__ import absolute_import, division, print_function

import json
import os
import shutil
import tempfile
import unittest

import numpy as np

from slotbench.parsers.manifest import frame_path
from slotbench.policy.bc import ExpertPolicy
from slotbench.policy.evaluate import PolicyEvalReport, evaluate_policy, evaluation_seeds
from slotbench.scenegen.trajectory import episode_seed


def idle(image, state, target):
    return np.zeros(2)


class EvaluationSeedsTest(unittest.TestCase):
    def test_streams_apart(self):
        evaluation = evaluation_seeds(50)
        validation = evaluation_seeds(50, "validation")
        training = [episode_seed(0, i) for i in range(100)]
        assert not set(evaluation) & set(validation)
        assert not set(evaluation) & set(training)
        assert evaluation == evaluation_seeds(50)
        with self.assertRaises(ValueError):
            evaluation_seeds(3, "test")


class EvaluatePolicyTest(unittest.TestCase):
    def setUp(self):
        self.tmp = tempfile.mkdtemp()

    def tearDown(self):
        shutil.rmtree(self.tmp)

    def test_seed_statistics(self):
        report = evaluate_policy({0: ExpertPolicy(), 1: idle}, 1, n_episodes=4, max_steps=5)
        assert report.seeds == [0, 1]
        assert report.success_rates[1] == 0.0
        rates = list(report.success_rates.values())
        assert report.mean == np.mean(rates)
        assert report.sd == np.std(rates)

    def test_idle_never_succeeds(self):
        report = evaluate_policy(idle, 3, n_episodes=3, max_steps=4, resolution=(8, 8))
        assert report.mean == 0.0
        assert report.sd == 0.0

    def test_reproducible_and_threaded(self):
        a = evaluate_policy(ExpertPolicy(), 1, n_episodes=4)
        b = evaluate_policy(ExpertPolicy(), 1, n_episodes=4, workers=2)
        assert a.to_dict() == b.to_dict()

    def test_overlap_rejected(self):
        with self.assertRaises(ValueError):
            evaluate_policy(idle, 1, n_episodes=2, training_seeds=evaluation_seeds(1))

    def test_frame_dumps(self):
        evaluate_policy(
            {3: idle}, 1, n_episodes=2, max_steps=3, resolution=(8, 8), dump_dir=self.tmp, dump_episodes=1
        )
        root = os.path.join(self.tmp, "seed_3")
        assert os.path.isfile(frame_path(root, 0, 3))
        assert not os.path.exists(frame_path(root, 1, 0))

    def test_write(self):
        report = evaluate_policy({0: idle, 1: idle}, 1, n_episodes=2, max_steps=2, variant="rgb")
        csv_path, json_path = report.write(self.tmp)
        with open(json_path) as f:
            data = json.load(f)
        assert data["variant"] == "rgb"
        assert data["success_rate_mean"] == 0.0
        assert PolicyEvalReport.from_dict(data).to_dict() == report.to_dict()
        assert os.path.isfile(csv_path)
