from __future__ import absolute_import, division, print_function

import torch
import torch.nn as nn

# Inputs whose spread is below this are only centred, not scaled up
STD_FLOOR = 1e-3


class LocalizerConfig(object):
    def __init__(self, **kwargs):
        self.in_features = int(kwargs.get("in_features", 16))
        self.n_entities = int(kwargs.get("n_entities", 9))
        self.hidden = int(kwargs.get("hidden", 256))
        self.variant = kwargs.get("variant", "slot_centroids")
        if self.in_features < 1 or self.n_entities < 1:
            raise ValueError(
                "Localizer needs in_features >= 1 and n_entities >= 1, "
                "got {!r} and {!r}".format(self.in_features, self.n_entities)
            )

    def to_dict(self):
        return {
            "in_features": self.in_features,
            "n_entities": self.n_entities,
            "hidden": self.hidden,
            "variant": self.variant,
        }

    @classmethod
    def from_dict(cls, d):
        return cls(**d)


class LocalizerMLP(nn.Module):
    """
    Two hidden layers of 256 regressing (x, y) of every entity from a flat
    representation vector. Input standardisation statistics are buffers so
    they travel with the checkpoint.
    """

    model_kind = "localizer"

    def __init__(self, config=None):
        super(LocalizerMLP, self).__init__()
        self.config = config or LocalizerConfig()
        c = self.config
        self.register_buffer("input_mean", torch.zeros(c.in_features))
        self.register_buffer("input_std", torch.ones(c.in_features))
        self.net = nn.Sequential(
            nn.Linear(c.in_features, c.hidden),
            nn.ReLU(),
            nn.Linear(c.hidden, c.hidden),
            nn.ReLU(),
            nn.Linear(c.hidden, 2 * c.n_entities),
        )

    @torch.no_grad()
    def set_statistics(self, features):
        features = torch.as_tensor(features, dtype=self.input_mean.dtype)
        self.input_mean.copy_(features.mean(dim=0))
        std = features.std(dim=0, unbiased=False)
        self.input_std.copy_(torch.where(std < STD_FLOOR, torch.ones_like(std), std))

    def forward(self, features):
        x = (features - self.input_mean) / self.input_std
        return self.net(x).reshape(-1, self.config.n_entities, 2)
