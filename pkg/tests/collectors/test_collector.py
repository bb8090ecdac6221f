from __future__ import absolute_import, division, print_function

import unittest

from slotbench.collectors.collector import Collector


class CollectorTest(unittest.TestCase):
    def test_filter_chains(self):
        c = Collector()
        assert c.filter(n_blocks=4, seeds=(0, 10), data_fraction=0.5) is c
        assert c.n_blocks == 4
        assert c.seeds == (0, 10)
        assert c.data_fraction == 0.5

        c.filter(features=("red_moon", "effector"), variables=["rgb"])
        assert c.features == ["red_moon", "effector"]
        assert c.variables == ["rgb"]

    def test_rejects_bad_values(self):
        c = Collector()
        with self.assertRaises(ValueError):
            c.filter(n_blocks=5)
        with self.assertRaises(ValueError):
            c.filter(seeds=(10, 10))
        with self.assertRaises(ValueError):
            c.filter(seeds=(-1, 3))
        with self.assertRaises(ValueError):
            c.filter(data_fraction=1.5)
        with self.assertRaises(ValueError):
            c.filter(features="effector")

    def test_clear(self):
        c = Collector().filter(seeds=(0, 3), data_fraction=0.25, features=["effector"])
        c.clear()
        assert c.seeds is None
        assert c.data_fraction is None
        assert c.features is None

    def test_abstract(self):
        c = Collector()
        for method in (c.collect, c.raw, c.list_features, c.list_variables):
            with self.assertRaises(NotImplementedError):
                method()
