from __future__ import absolute_import, division, print_function

import os
import shutil
import tempfile
import unittest

from slotbench.harness.cli import build_parser, main
from tests.utils import resource_file


class CliTest(unittest.TestCase):
    def setUp(self):
        self.root = tempfile.mkdtemp()

    def tearDown(self):
        shutil.rmtree(self.root)

    def test_parser(self):
        args = build_parser().parse_args(["eval-pck", "--k", "4", "--pck-threshold", "0.05", "--force"])
        assert args.stage == "eval-pck"
        assert args.k == 4
        assert args.pck_threshold == 0.05
        assert args.force
        with self.assertRaises(SystemExit):
            build_parser().parse_args(["deploy"])

    def test_gen_data(self):
        code = main(["gen-data", "--config", resource_file("micro_config.yaml"), "--root", self.root])
        assert code == 0
        assert os.path.isfile(os.path.join(self.root, "ledger.jsonl"))

    def test_errors_exit_nonzero(self):
        config = resource_file("micro_config.yaml")
        # no dataset yet
        assert main(["train-repr", "--config", config, "--root", self.root]) == 2
        assert main(["gen-data", "--config", config, "--root", self.root, "--data-fraction", "2"]) == 2
        assert main(["report", "--root", self.root]) == 2
