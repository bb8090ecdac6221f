from __future__ import absolute_import, division, print_function

import torch.nn as nn
import torch.nn.functional as F

from slotbench.models.layers import (
    ConvTrunk,
    UpsamplingDecoder,
    resize_features,
    upsample_stages,
)
from slotbench.models.slot_attention import reconstruction_error


class AutoencoderConfig(object):
    def __init__(self, **kwargs):
        self.resolution = tuple(int(v) for v in kwargs.get("resolution", (64, 64)))
        self.encoder_channels = tuple(kwargs.get("encoder_channels", (32, 32, 32, 32)))
        self.bottleneck_channels = int(kwargs.get("bottleneck_channels", 64))
        self.decoder_resolution = tuple(kwargs.get("decoder_resolution", (8, 8)))
        self.decoder_hidden = kwargs.get("decoder_hidden", 32)
        self.kernel_size = kwargs.get("kernel_size", 5)
        if self.bottleneck_channels < 1:
            raise ValueError(
                "bottleneck_channels must be >= 1, got {!r}".format(
                    self.bottleneck_channels
                )
            )
        upsample_stages(self.resolution, self.decoder_resolution)

    def to_dict(self):
        return {
            "resolution": list(self.resolution),
            "encoder_channels": list(self.encoder_channels),
            "bottleneck_channels": self.bottleneck_channels,
            "decoder_resolution": list(self.decoder_resolution),
            "decoder_hidden": self.decoder_hidden,
            "kernel_size": self.kernel_size,
        }

    @classmethod
    def from_dict(cls, d):
        return cls(**d)


class ConvAutoencoder(nn.Module):
    """
    Slot-free baseline: the slot model's conv trunk, average pooled down to
    the decoder grid, a 1x1 bottleneck and the same upsampling decoder.
    """

    model_kind = "autoencoder"

    def __init__(self, config=None):
        super(ConvAutoencoder, self).__init__()
        self.config = config or AutoencoderConfig()
        c = self.config
        self.encoder_cnn = ConvTrunk(3, c.encoder_channels, c.kernel_size)
        self.bottleneck = nn.Conv2d(self.encoder_cnn.out_channels, c.bottleneck_channels, 1)
        self.decoder_cnn = UpsamplingDecoder(
            c.bottleneck_channels,
            3,
            upsample_stages(c.resolution, c.decoder_resolution),
            hidden=c.decoder_hidden,
            kernel_size=c.kernel_size,
        )

    @property
    def feature_channels(self):
        return self.encoder_cnn.out_channels

    def _check_images(self, images):
        if tuple(images.shape[-2:]) != self.config.resolution:
            raise ValueError(
                "Image resolution {} does not match the configured {}".format(
                    tuple(images.shape[-2:]), self.config.resolution
                )
            )

    def encode(self, images):
        self._check_images(images)
        return self.encoder_cnn(images)

    def forward(self, images):
        features = self.encode(images)
        code = self.bottleneck(
            F.adaptive_avg_pool2d(features, self.config.decoder_resolution)
        )
        return self.decoder_cnn(code)

    def reconstruction_loss(self, images):
        return reconstruction_error(images, self.forward(images))

    def pooled_embedding(self, images):
        """
            Global average of the encoder grid, (B, C).
        """
        return self.encode(images).mean(dim=(2, 3))

    def penultimate_features(self, images):
        return resize_features(self.encode(images), images.shape[-2:])
