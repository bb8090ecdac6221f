from __future__ import absolute_import, division, print_function

import math

import torch
import torch.nn as nn


class PolicyConfig(object):
    def __init__(self, **kwargs):
        self.in_channels = int(kwargs.get("in_channels", 3))
        self.resolution = tuple(int(v) for v in kwargs.get("resolution", (64, 64)))
        self.channels = tuple(kwargs.get("channels", (32, 64, 64)))
        self.hidden = int(kwargs.get("hidden", 256))
        self.max_step = float(kwargs.get("max_step", 0.02))
        if self.in_channels < 1:
            raise ValueError(
                "in_channels must be >= 1, got {!r}".format(self.in_channels)
            )

    def to_dict(self):
        return {
            "in_channels": self.in_channels,
            "resolution": list(self.resolution),
            "channels": list(self.channels),
            "hidden": self.hidden,
            "max_step": self.max_step,
        }

    @classmethod
    def from_dict(cls, d):
        return cls(**d)


class ObservationTrunk(nn.Module):
    """
        Stride-2 3x3 convs, flattened (keeps position) into a dense embedding.
    """

    def __init__(self, config):
        super(ObservationTrunk, self).__init__()
        layers = []
        c_in = config.in_channels
        h, w = config.resolution
        for c_out in config.channels:
            layers.extend([nn.Conv2d(c_in, c_out, 3, stride=2, padding=1), nn.ReLU()])
            c_in = c_out
            h, w = int(math.ceil(h / 2.0)), int(math.ceil(w / 2.0))
        self.convs = nn.Sequential(*layers)
        self.fc = nn.Sequential(nn.Linear(c_in * h * w, config.hidden), nn.ReLU())
        self.out_features = config.hidden

    def forward(self, obs):
        return self.fc(torch.flatten(self.convs(obs), 1))


class ExplicitPolicyNet(nn.Module):
    """
        Regresses the action divided by max_step.
    """

    model_kind = "bc_explicit"

    def __init__(self, config):
        super(ExplicitPolicyNet, self).__init__()
        self.config = config
        self.trunk = ObservationTrunk(config)
        self.head = nn.Sequential(
            nn.Linear(self.trunk.out_features, config.hidden),
            nn.ReLU(),
            nn.Linear(config.hidden, 2),
        )

    def forward(self, obs):
        return self.head(self.trunk(obs))


class EnergyNet(nn.Module):
    """
    E(observation, action) over actions normalized to [-1, 1]^2. Lower is
    better.
    """

    model_kind = "bc_implicit"

    def __init__(self, config):
        super(EnergyNet, self).__init__()
        self.config = config
        self.trunk = ObservationTrunk(config)
        self.head = nn.Sequential(
            nn.Linear(self.trunk.out_features + 2, config.hidden),
            nn.ReLU(),
            nn.Linear(config.hidden, config.hidden),
            nn.ReLU(),
            nn.Linear(config.hidden, 1),
        )

    def energies(self, embedding, actions):
        """
            embedding (B, F), actions (B, N, 2) -> (B, N)
        """
        n = actions.shape[1]
        tiled = embedding.unsqueeze(1).expand(-1, n, -1)
        return self.head(torch.cat([tiled, actions], dim=-1)).squeeze(-1)

    def forward(self, obs, actions):
        return self.energies(self.trunk(obs), actions)
