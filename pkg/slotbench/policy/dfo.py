from __future__ import absolute_import, division, print_function

import torch


class DerivativeFreeOptimizer(object):
    """
    Iterated sampling over the normalized action box [-1, 1]^2: draw a
    uniform pool, keep the lowest-energy fraction, resample around it in a
    region that shrinks every round, repeat. The returned action is the
    argmin of the final pool.
    """

    def __init__(self, samples=1024, iters=3, top_fraction=0.1, noise=0.33, shrink=0.5):
        if samples < 1 or iters < 0:
            raise ValueError(
                "DFO needs samples >= 1 and iters >= 0, got {!r} and {!r}".format(
                    samples, iters
                )
            )
        if not 0 < top_fraction <= 1:
            raise ValueError(
                "top_fraction must be in (0, 1], got {!r}".format(top_fraction)
            )
        self.samples = int(samples)
        self.iters = int(iters)
        self.top_fraction = float(top_fraction)
        self.noise = float(noise)
        self.shrink = float(shrink)

    def _uniform(self, shape, generator, device):
        return torch.rand(shape, generator=generator).to(device) * 2.0 - 1.0

    @torch.no_grad()
    def infer(self, net, obs, generator=None):
        """
        obs: (1, C, H, W). Returns (action (2,), energy, final pool (N, 2),
        pool energies (N,)).
        """
        device = obs.device
        embedding = net.trunk(obs)
        pool = self._uniform((1, self.samples, 2), generator, device)
        keep = max(1, int(round(self.top_fraction * self.samples)))
        scale = self.noise

        for _ in range(self.iters):
            energies = net.energies(embedding, pool)
            elite_idx = torch.topk(-energies[0], keep).indices
            elites = pool[:, elite_idx]
            pick = torch.randint(keep, (self.samples,), generator=generator).to(device)
            jitter = self._uniform((1, self.samples, 2), generator, device) * scale
            pool = (elites[:, pick] + jitter).clamp(-1.0, 1.0)
            pool[:, :keep] = elites
            scale *= self.shrink

        energies = net.energies(embedding, pool)[0]
        best = int(torch.argmin(energies))
        assert bool((energies[best] <= energies).all())
        return pool[0, best], float(energies[best]), pool[0], energies


@torch.no_grad()
def grid_energies(net, obs, n=41):
    """
        Energies on an n x n grid over [-1, 1]^2; returns (grid (n*n, 2), energies).
    """
    axis = torch.linspace(-1.0, 1.0, n, device=obs.device)
    gx, gy = torch.meshgrid(axis, axis, indexing="ij")
    grid = torch.stack([gx.reshape(-1), gy.reshape(-1)], dim=-1)
    energies = net.energies(net.trunk(obs), grid.unsqueeze(0))[0]
    return grid, energies
