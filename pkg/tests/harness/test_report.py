from __future__ import absolute_import, division, print_function

import json
import os
import shutil
import tempfile
import unittest

from pandas.testing import assert_frame_equal

from slotbench.harness.ledger import Ledger
from slotbench.harness.report import (
    EmptyResultsError,
    SUMMARY_COLUMNS,
    read_summary,
    report,
)


def policy_metrics(episodes, mean, variant="rgb"):
    return {
        "variant": variant,
        "training_episodes": episodes,
        "success_rate_mean": mean,
        "success_rate_sd": 0.05,
        "success_rates": {"0": mean},
    }


class ReportTest(unittest.TestCase):
    def setUp(self):
        self.root = tempfile.mkdtemp()
        self.ledger = Ledger(self.root)

    def tearDown(self):
        shutil.rmtree(self.root)

    def append(self, stage, config_hash, metrics, wall_clock=1.5):
        run_dir = os.path.join(self.root, stage, config_hash)
        return self.ledger.append("micro", config_hash, stage, run_dir, metrics, wall_clock)

    def test_empty(self):
        with self.assertRaises(EmptyResultsError):
            report(self.root)

    def test_single_result(self):
        self.append("eval-pck", "aaa", {"mean": 0.75, "n_blocks": 3, "model_kind": "slot_attention"})
        result = report(self.root)

        out = result.output_dir
        assert out == os.path.join(self.root, "report")
        for name in ("summary.csv", "success_vs_episodes.csv", "success_vs_episodes.png", "pck_vs_blocks.csv", "pck_vs_blocks.png", "k_sweep.csv", "report.json"):
            assert os.path.isfile(os.path.join(out, name)), name

        assert list(result.summary.columns) == SUMMARY_COLUMNS
        # the model_kind string is not a numeric metric
        assert sorted(result.summary["metric"]) == ["mean", "n_blocks"]
        assert result.summary["config_hash"].nunique() == 1
        assert len(result.blocks) == 1
        assert result.blocks["pck_mean"][0] == 0.75
        assert len(result.episodes) == 0

        with open(os.path.join(out, "report.json")) as f:
            assert json.load(f)["runs"] == 1

    def test_summary_reloads(self):
        self.append("eval-pck", "aaa", {"mean": 0.1 + 0.2, "n_blocks": 3, "model_kind": "slot_attention"}, 0.1)
        self.append("train-repr", "0123", {"best_loss": 1e-7, "checksum": "ff", "k": 8}, 2.0 / 3)
        result = report(self.root)
        again = read_summary(os.path.join(result.output_dir, "summary.csv"))
        assert_frame_equal(again, result.summary, check_dtype=False)
        # hashes made of digits stay strings
        assert "0123" in set(again["config_hash"])

    def test_episode_ordering(self):
        for i, episodes in enumerate([10000, 1000, 3000, 2000]):
            self.append("eval-policy", "h{}".format(i), policy_metrics(episodes, episodes / 20000.0))
        self.append("eval-policy", "s0", policy_metrics(1000, 0.2, variant="slot_masks"))
        result = report(self.root)
        rgb = result.episodes[result.episodes["variant"] == "rgb"]
        assert list(rgb["training_episodes"]) == [1000, 2000, 3000, 10000]
        assert list(result.episodes["variant"]) == ["rgb"] * 4 + ["slot_masks"]

    def test_latest_run_wins(self):
        self.append("eval-pck", "aaa", {"mean": 0.25, "n_blocks": 1, "model_kind": "slot_attention"})
        self.append("eval-pck", "aaa", {"mean": 0.5, "n_blocks": 1, "model_kind": "slot_attention"})
        result = report(self.root)
        assert list(result.blocks["pck_mean"]) == [0.5]

    def test_k_sweep(self):
        rows = [
            {"parameter": "k", "value": 12, "best_loss": 0.2},
            {"parameter": "k", "value": 4, "best_loss": 0.4},
        ]
        self.append("sweep", "sss", {"parameter": "k", "rows": rows, "selected_by_loss": 12})
        result = report(self.root, os.path.join(self.root, "elsewhere"))
        assert list(result.k_sweep["value"]) == [4, 12]
        assert os.path.isfile(os.path.join(self.root, "elsewhere", "k_sweep.csv"))
