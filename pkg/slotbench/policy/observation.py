from __future__ import absolute_import, division, print_function

import numpy as np
import torch

from slotbench.scenegen.raster import ground_truth_masks
from slotbench.training.checkpoint import CheckpointError, freeze, parameter_checksum
from slotbench.training.trainers import images_to_tensor

VARIANTS = (
    "rgb",
    "rgb_plus_gt_segmentation",
    "slot_masks",
    "rgb_plus_slot",
    "autoencoder_features",
    "rgb_plus_autoencoder",
)

# Variants that read a frozen representation, and the model kind they need
REPRESENTATION_KIND = {
    "slot_masks": "slot_attention",
    "rgb_plus_slot": "slot_attention",
    "autoencoder_features": "autoencoder",
    "rgb_plus_autoencoder": "autoencoder",
}


def target_planes(targets, n_blocks, resolution):
    """
        One-hot target block as ``n_blocks`` constant planes, (N, n, H, W).
    """
    targets = torch.as_tensor(np.asarray(targets), dtype=torch.long)
    onehot = torch.nn.functional.one_hot(targets, n_blocks).float()
    h, w = resolution
    return onehot[:, :, None, None].expand(-1, -1, h, w).contiguous()


class ObservationBuilder(object):
    """
    Stacks the perception channels of one variant at image resolution.

    rgb                       3
    rgb_plus_gt_segmentation  3 + (n_blocks + 3) ground truth masks
    slot_masks                K alpha masks
    rgb_plus_slot             3 + slot encoder channels
    autoencoder_features      autoencoder encoder channels
    rgb_plus_autoencoder      3 + autoencoder encoder channels
    """

    def __init__(self, variant, representation=None, n_blocks=8, device="cpu"):
        if variant not in VARIANTS:
            raise ValueError(
                "Not a recognized perception variant: {!r}. Must be one of {}".format(
                    variant, ", ".join(VARIANTS)
                )
            )
        self.variant = variant
        self.n_blocks = int(n_blocks)
        self.device = torch.device(device)
        self.representation = None
        self.checksum = None

        kind = REPRESENTATION_KIND.get(variant)
        if kind is not None:
            if representation is None:
                raise CheckpointError(
                    "Variant {!r} needs a trained {} checkpoint".format(variant, kind)
                )
            if representation.model_kind != kind:
                raise CheckpointError(
                    "Variant {!r} needs a {} model, got {!r}".format(
                        variant, kind, representation.model_kind
                    )
                )
            self.representation = freeze(representation).to(self.device)
            self.checksum = parameter_checksum(self.representation)

    @property
    def with_rgb(self):
        return self.variant.startswith("rgb")

    def channels(self):
        if self.variant == "rgb":
            return 3
        if self.variant == "rgb_plus_gt_segmentation":
            return 3 + self.n_blocks + 3
        if self.variant == "slot_masks":
            return self.representation.config.num_slots
        extra = self.representation.encoder_cnn.out_channels
        return 3 + extra if self.with_rgb else extra

    def input_channels(self):
        """Observation plus target planes."""
        return self.channels() + self.n_blocks

    def verify_frozen(self):
        if self.representation is None:
            return True
        return parameter_checksum(self.representation) == self.checksum

    @torch.no_grad()
    def build(self, images, states=None):
        """
        images: (N, H, W, 3) uint8 or float in [0, 1]; states are needed for
        the ground truth variant. Returns float (N, C, H, W).
        """
        rgb = images_to_tensor(images).to(self.device)
        if self.variant == "rgb":
            return rgb

        if self.variant == "rgb_plus_gt_segmentation":
            if states is None:
                raise ValueError("Ground truth segmentation needs scene states")
            resolution = rgb.shape[-2:]
            masks = np.stack(
                [ground_truth_masks(s, resolution).masks for s in states]
            )
            masks = torch.as_tensor(masks, dtype=rgb.dtype, device=self.device)
            return torch.cat([rgb, masks], dim=1)

        if self.variant == "slot_masks":
            return self.representation.extract_masks(rgb).masks

        features = self.representation.penultimate_features(rgb)
        return torch.cat([rgb, features], dim=1) if self.with_rgb else features

    def policy_input(self, images, states, targets):
        obs = self.build(images, states)
        planes = target_planes(targets, self.n_blocks, obs.shape[-2:]).to(obs.device)
        return torch.cat([obs, planes], dim=1)


def build_observation(image, variant, representation=None, state=None, n_blocks=8):
    """
        Single (H, W, 3) frame to a (C, H, W) observation.
    """
    states = None
    if state is not None:
        states, n_blocks = [state], state.n_blocks
    builder = ObservationBuilder(variant, representation, n_blocks)
    return builder.build(np.asarray(image)[np.newaxis], states)[0]
