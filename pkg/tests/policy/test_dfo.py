from __future__ import absolute_import, division, print_function

import unittest

import torch
import torch.nn as nn

from slotbench.policy.dfo import DerivativeFreeOptimizer, grid_energies


class BowlEnergy(nn.Module):
    """Squared distance to a fixed action."""

    def __init__(self, best):
        super(BowlEnergy, self).__init__()
        self.best = torch.tensor(best)

    def trunk(self, obs):
        return obs.flatten(1)

    def energies(self, embedding, actions):
        return ((actions - self.best) ** 2).sum(-1)


class DerivativeFreeOptimizerTest(unittest.TestCase):
    def setUp(self):
        self.net = BowlEnergy([0.3, -0.6])
        self.obs = torch.zeros(1, 1, 2, 2)

    def test_finds_minimum(self):
        dfo = DerivativeFreeOptimizer(samples=256, iters=3)
        action, energy, pool, energies = dfo.infer(self.net, self.obs, torch.Generator().manual_seed(0))
        assert torch.allclose(action, self.net.best, atol=0.05)
        assert energy == float(energies.min())
        assert pool.shape == (256, 2)
        assert (pool.abs() <= 1).all()

    def test_refinement_never_worse(self):
        coarse = DerivativeFreeOptimizer(samples=64, iters=0)
        fine = DerivativeFreeOptimizer(samples=64, iters=3)
        e0 = coarse.infer(self.net, self.obs, torch.Generator().manual_seed(4))[1]
        e3 = fine.infer(self.net, self.obs, torch.Generator().manual_seed(4))[1]
        assert e3 <= e0

    def test_seeded(self):
        dfo = DerivativeFreeOptimizer(samples=32, iters=2)
        a = dfo.infer(self.net, self.obs, torch.Generator().manual_seed(9))[0]
        b = dfo.infer(self.net, self.obs, torch.Generator().manual_seed(9))[0]
        assert torch.equal(a, b)

    def test_bad_arguments(self):
        with self.assertRaises(ValueError):
            DerivativeFreeOptimizer(samples=0)
        with self.assertRaises(ValueError):
            DerivativeFreeOptimizer(top_fraction=0)

    def test_grid(self):
        grid, energies = grid_energies(self.net, self.obs, n=5)
        assert grid.shape == (25, 2)
        assert energies.shape == (25,)
        best = grid[int(energies.argmin())]
        assert torch.allclose(best, torch.tensor([0.5, -0.5]))
