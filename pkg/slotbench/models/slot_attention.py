from __future__ import absolute_import, division, print_function

import math

import torch
import torch.nn as nn
import torch.nn.functional as F

from slotbench.models.layers import (
    ConvTrunk,
    SoftPositionEmbed,
    UpsamplingDecoder,
    resize_features,
    upsample_stages,
)


class SlotConfig(object):
    def __init__(self, **kwargs):
        self.num_slots = kwargs.get("num_slots", 8)
        self.slot_dim = kwargs.get("slot_dim", 64)
        self.iters = kwargs.get("iters", 3)
        self.resolution = kwargs.get("resolution", (64, 64))
        self.encoder_channels = tuple(kwargs.get("encoder_channels", (32, 32, 32, 32)))
        self.decoder_resolution = tuple(kwargs.get("decoder_resolution", (8, 8)))
        self.decoder_hidden = kwargs.get("decoder_hidden", 32)
        self.mlp_hidden = kwargs.get("mlp_hidden", 128)
        self.kernel_size = kwargs.get("kernel_size", 5)
        # raises early when the decoder cannot reach the image size
        upsample_stages(self.resolution, self.decoder_resolution)

    def _positive(self, name, value):
        value = int(value)
        if value < 1:
            raise ValueError("{} must be >= 1, got {!r}".format(name, value))
        return value

    def get_num_slots(self):
        return self._num_slots

    def set_num_slots(self, k):
        self._num_slots = self._positive("num_slots", k)

    num_slots = property(get_num_slots, set_num_slots)

    def get_slot_dim(self):
        return self._slot_dim

    def set_slot_dim(self, d):
        self._slot_dim = self._positive("slot_dim", d)

    slot_dim = property(get_slot_dim, set_slot_dim)

    def get_iters(self):
        return self._iters

    def set_iters(self, t):
        self._iters = self._positive("iters", t)

    iters = property(get_iters, set_iters)

    def get_resolution(self):
        return self._resolution

    def set_resolution(self, resolution):
        resolution = tuple(int(v) for v in resolution)
        if len(resolution) != 2 or min(resolution) < 1:
            raise ValueError(
                "Not a recognized resolution: {!r}. Must be (H, W)".format(
                    resolution
                )
            )
        self._resolution = resolution

    resolution = property(get_resolution, set_resolution)

    def to_dict(self):
        return {
            "num_slots": self.num_slots,
            "slot_dim": self.slot_dim,
            "iters": self.iters,
            "resolution": list(self.resolution),
            "encoder_channels": list(self.encoder_channels),
            "decoder_resolution": list(self.decoder_resolution),
            "decoder_hidden": self.decoder_hidden,
            "mlp_hidden": self.mlp_hidden,
            "kernel_size": self.kernel_size,
        }

    @classmethod
    def from_dict(cls, d):
        return cls(**d)


class SlotSet(object):
    """Slots (B, K, D) and the final attention (B, K, N)."""

    def __init__(self, slots, attention):
        self.slots = slots
        self.attention = attention


class MaskStack(object):
    """
    Alpha masks (B, K, H, W) normalized over K, per-slot reconstructions
    (B, K, 3, H, W) and their mask-weighted sum (B, 3, H, W).
    """

    def __init__(self, masks, recons, combined):
        self.masks = masks
        self.recons = recons
        self.combined = combined


def reconstruction_error(images, reconstruction):
    """
    Mean over the batch of each image's squared error averaged over pixels
    and channels.
    """
    if images.shape[0] == 0:
        raise ValueError("Reconstruction loss needs a non-empty batch")
    per_image = ((images - reconstruction) ** 2).flatten(1).mean(1)
    return per_image.mean()


class SlotAttention(nn.Module):
    """
    Iterative attention where the softmax runs over slots, so slots compete
    for input locations. Slots start from learned fixed vectors.
    """

    def __init__(self, num_slots, slot_dim, feature_dim, iters=3, mlp_hidden=128, eps=1e-8):
        super(SlotAttention, self).__init__()
        self.num_slots = num_slots
        self.slot_dim = slot_dim
        self.iters = iters
        self.eps = eps
        self.scale = slot_dim ** -0.5

        self.slots_init = nn.Parameter(torch.empty(num_slots, slot_dim))
        limit = math.sqrt(6.0 / (1 + slot_dim))
        nn.init.uniform_(self.slots_init, -limit, limit)

        self.feature_mlp = nn.Sequential(
            nn.LayerNorm(feature_dim),
            nn.Linear(feature_dim, feature_dim),
            nn.ReLU(),
            nn.Linear(feature_dim, feature_dim),
        )
        self.norm_input = nn.LayerNorm(feature_dim)
        self.to_k = nn.Linear(feature_dim, slot_dim, bias=False)
        self.to_v = nn.Linear(feature_dim, slot_dim, bias=False)
        self.to_q = nn.Linear(slot_dim, slot_dim, bias=False)
        self.norm_slots = nn.LayerNorm(slot_dim)

        self.gru = nn.GRUCell(slot_dim, slot_dim)
        self.norm_mlp = nn.LayerNorm(slot_dim)
        hidden = max(slot_dim, mlp_hidden)
        self.mlp = nn.Sequential(
            nn.Linear(slot_dim, hidden),
            nn.ReLU(),
            nn.Linear(hidden, slot_dim),
        )

    def forward(self, features, init=None):
        """
            features: (B, N, C). Returns a SlotSet.
        """
        if not torch.isfinite(features).all():
            raise ValueError("Slot attention got non-finite features")
        b = features.shape[0]
        init = self.slots_init if init is None else init
        slots = init.unsqueeze(0).expand(b, -1, -1)
        k_slots, d = slots.shape[1], slots.shape[2]

        inputs = self.norm_input(self.feature_mlp(features))
        k = self.to_k(inputs)
        v = self.to_v(inputs)

        attn = None
        for _ in range(self.iters):
            slots_prev = slots
            q = self.to_q(self.norm_slots(slots))

            logits = torch.einsum("bkd,bnd->bkn", q, k) * self.scale
            attn = logits.softmax(dim=1)

            # weighted mean over locations
            weights = attn + self.eps
            weights = weights / weights.sum(dim=-1, keepdim=True)
            updates = torch.einsum("bkn,bnd->bkd", weights, v)

            slots = self.gru(
                updates.reshape(-1, d), slots_prev.reshape(-1, d)
            ).reshape(b, k_slots, d)
            slots = slots + self.mlp(self.norm_mlp(slots))

        return SlotSet(slots, attn)


class SlotAttentionAutoEncoder(nn.Module):
    model_kind = "slot_attention"

    def __init__(self, config=None):
        super(SlotAttentionAutoEncoder, self).__init__()
        self.config = config or SlotConfig()
        c = self.config
        self.encoder_cnn = ConvTrunk(3, c.encoder_channels, c.kernel_size)
        feature_dim = self.encoder_cnn.out_channels
        self.encoder_pos = SoftPositionEmbed(feature_dim, c.resolution)
        self.slot_attention = SlotAttention(
            c.num_slots, c.slot_dim, feature_dim, c.iters, c.mlp_hidden
        )
        self.decoder_pos = SoftPositionEmbed(c.slot_dim, c.decoder_resolution)
        self.decoder_cnn = UpsamplingDecoder(
            c.slot_dim,
            4,
            upsample_stages(c.resolution, c.decoder_resolution),
            hidden=c.decoder_hidden,
            kernel_size=c.kernel_size,
        )
        self._init_gru()

    @torch.no_grad()
    def _init_gru(self):
        gru = self.slot_attention.gru
        nn.init.zeros_(gru.bias_ih)
        nn.init.zeros_(gru.bias_hh)
        nn.init.orthogonal_(gru.weight_hh)

    def _check_images(self, images):
        if tuple(images.shape[-2:]) != tuple(self.config.resolution):
            raise ValueError(
                "Image resolution {} does not match the configured {}".format(
                    tuple(images.shape[-2:]), self.config.resolution
                )
            )

    def penultimate_features(self, images):
        """
            Conv trunk output (B, C, H, W) resized to the image resolution.
        """
        self._check_images(images)
        return resize_features(self.encoder_cnn(images), images.shape[-2:])

    def encode(self, images):
        """
            images: (B, 3, H, W) in [0, 1] -> FeatureGrid (B, H, W, C).
        """
        self._check_images(images)
        x = self.encoder_cnn(images).permute(0, 2, 3, 1)
        return self.encoder_pos(x)

    def group(self, grid, init=None):
        return self.slot_attention(torch.flatten(grid, 1, 2), init=init)

    def decode(self, slots):
        """
            slots: (B, K, D) -> MaskStack.
        """
        b, k, d = slots.shape
        h, w = self.config.decoder_resolution
        x = slots.reshape(b * k, 1, 1, d).expand(-1, h, w, -1)
        x = self.decoder_pos(x).permute(0, 3, 1, 2)
        y = self.decoder_cnn(x)
        y = y.reshape(b, k, 4, y.shape[-2], y.shape[-1])
        recons, alpha = y.split([3, 1], dim=2)
        masks = F.softmax(alpha, dim=1)
        combined = (recons * masks).sum(dim=1)
        return MaskStack(masks.squeeze(2), recons, combined)

    def forward(self, images, init=None):
        slot_set = self.group(self.encode(images), init=init)
        return slot_set, self.decode(slot_set.slots)

    def reconstruction_loss(self, images):
        _, stack = self.forward(images)
        return reconstruction_error(images, stack.combined)

    @torch.no_grad()
    def extract_masks(self, images):
        return self.forward(images)[1]
