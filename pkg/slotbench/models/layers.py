from __future__ import absolute_import, division, print_function

import math

import torch
import torch.nn as nn
import torch.nn.functional as F


def build_grid(resolution):
    """
        (1, H, W, 4) grid of (x, y, 1 - x, 1 - y) coordinates in [0, 1].
    """
    h, w = resolution
    ys = torch.linspace(0.0, 1.0, h)
    xs = torch.linspace(0.0, 1.0, w)
    gy, gx = torch.meshgrid(ys, xs, indexing="ij")
    grid = torch.stack([gx, gy], dim=-1)
    return torch.cat([grid, 1.0 - grid], dim=-1).unsqueeze(0)


class SoftPositionEmbed(nn.Module):
    """Adds a learned linear projection of the coordinate grid."""

    def __init__(self, hidden_size, resolution):
        super(SoftPositionEmbed, self).__init__()
        self.dense = nn.Linear(4, hidden_size)
        self.register_buffer("grid", build_grid(resolution), persistent=False)

    def projection(self):
        return self.dense(self.grid.to(self.dense.weight.dtype))

    def forward(self, inputs):
        # inputs: (B, H, W, C)
        return inputs + self.projection()


class ConvTrunk(nn.Module):
    """
    Stride-1 5x5 conv stack with ReLU after every layer; the spatial size
    is preserved. Shared by the slot model, the autoencoder and MoCo.
    """

    def __init__(self, in_channels=3, channels=(32, 32, 32, 32), kernel_size=5):
        super(ConvTrunk, self).__init__()
        layers = []
        for out_channels in channels:
            layers.append(
                nn.Conv2d(
                    in_channels,
                    out_channels,
                    kernel_size,
                    padding=kernel_size // 2,
                )
            )
            layers.append(nn.ReLU())
            in_channels = out_channels
        self.layers = nn.Sequential(*layers)
        self.out_channels = in_channels

    def forward(self, x):
        return self.layers(x)


def upsample_stages(image_resolution, base_resolution):
    """
        Number of x2 stages taking ``base_resolution`` to the image size.
    """
    stages = []
    for size, base in zip(image_resolution, base_resolution):
        ratio = size / float(base)
        n = int(round(math.log(ratio, 2))) if ratio >= 1 else -1
        if n < 0 or base * 2 ** n != size:
            raise ValueError(
                "Image resolution {} is not a power-of-two multiple of the "
                "decoder resolution {}".format(image_resolution, base_resolution)
            )
        stages.append(n)
    if stages[0] != stages[1]:
        raise ValueError(
            "Decoder resolution {} needs the same number of x2 stages along "
            "both axes of {}".format(base_resolution, image_resolution)
        )
    return stages[0]


class UpsamplingDecoder(nn.Module):
    """
    Conv followed by x2 bilinear upsampling per stage, then two output
    convs. No transposed convolutions.
    """

    def __init__(
        self,
        in_channels,
        out_channels,
        stages,
        hidden=32,
        kernel_size=5,
    ):
        super(UpsamplingDecoder, self).__init__()
        layers = []
        for _ in range(stages):
            layers.extend(
                [
                    nn.Conv2d(in_channels, hidden, kernel_size, padding=kernel_size // 2),
                    nn.ReLU(),
                    nn.Upsample(scale_factor=2, mode="bilinear", align_corners=False),
                ]
            )
            in_channels = hidden
        layers.extend(
            [
                nn.Conv2d(in_channels, hidden, kernel_size, padding=kernel_size // 2),
                nn.ReLU(),
                nn.Conv2d(hidden, out_channels, 3, padding=1),
            ]
        )
        self.layers = nn.Sequential(*layers)

    def forward(self, x):
        return self.layers(x)


def resize_features(features, resolution):
    """
        Bilinear resize of (B, C, h, w) features to ``resolution``.
    """
    if tuple(features.shape[-2:]) == tuple(resolution):
        return features
    return F.interpolate(
        features, size=tuple(resolution), mode="bilinear", align_corners=False
    )
