from __future__ import absolute_import, division, print_function

from slotbench.models.autoencoder import AutoencoderConfig, ConvAutoencoder
from slotbench.models.export import export_masks, read_masks
from slotbench.models.moco import ContrastiveConfig, MomentumContrast
from slotbench.models.policy_nets import EnergyNet, ExplicitPolicyNet, PolicyConfig
from slotbench.models.regressor import LocalizerConfig, LocalizerMLP
from slotbench.models.slot_attention import (
    MaskStack,
    SlotAttention,
    SlotAttentionAutoEncoder,
    SlotConfig,
    SlotSet,
    reconstruction_error,
)

REPRESENTATIONS = {
    SlotAttentionAutoEncoder.model_kind: (SlotAttentionAutoEncoder, SlotConfig),
    ConvAutoencoder.model_kind: (ConvAutoencoder, AutoencoderConfig),
    MomentumContrast.model_kind: (MomentumContrast, ContrastiveConfig),
}

POLICIES = {
    ExplicitPolicyNet.model_kind: (ExplicitPolicyNet, PolicyConfig),
    EnergyNet.model_kind: (EnergyNet, PolicyConfig),
}

HEADS = {
    LocalizerMLP.model_kind: (LocalizerMLP, LocalizerConfig),
}

__all__ = [
    "AutoencoderConfig",
    "ContrastiveConfig",
    "ConvAutoencoder",
    "EnergyNet",
    "ExplicitPolicyNet",
    "HEADS",
    "LocalizerConfig",
    "LocalizerMLP",
    "MaskStack",
    "MomentumContrast",
    "POLICIES",
    "PolicyConfig",
    "REPRESENTATIONS",
    "SlotAttention",
    "SlotAttentionAutoEncoder",
    "SlotConfig",
    "SlotSet",
    "export_masks",
    "read_masks",
    "reconstruction_error",
]
