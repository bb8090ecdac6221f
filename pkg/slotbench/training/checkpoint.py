from __future__ import absolute_import, division, print_function

import hashlib
import os

import torch

from slotbench import logger


class CheckpointError(IOError):
    pass


class FrozenParametersError(RuntimeError):
    pass


def atomic_save(obj, path):
    """
        torch.save to a temporary sibling, then rename over ``path``.
    """
    directory = os.path.dirname(os.path.abspath(path))
    if not os.path.isdir(directory):
        os.makedirs(directory)
    tmp = "{}.tmp-{}".format(path, os.getpid())
    torch.save(obj, tmp)
    os.replace(tmp, path)


def save_checkpoint(path, model, step=0, loss=None, extra=None):
    payload = {
        "model_kind": model.model_kind,
        "config": model.config.to_dict(),
        "state_dict": {k: v.detach().cpu() for k, v in model.state_dict().items()},
        "step": int(step),
        "loss": None if loss is None else float(loss),
        "extra": extra or {},
    }
    atomic_save(payload, path)
    logger.debug("Checkpoint {} at step {} -> {}".format(model.model_kind, step, path))
    return path


def load_checkpoint(path):
    if not os.path.isfile(path):
        raise CheckpointError("No checkpoint at {}".format(path))
    try:
        payload = torch.load(path, map_location="cpu", weights_only=True)
    except Exception as e:
        raise CheckpointError("Could not read checkpoint {}: {}".format(path, e))
    for key in ("model_kind", "config", "state_dict"):
        if key not in payload:
            raise CheckpointError(
                "Checkpoint {} is missing '{}'".format(path, key)
            )
    return payload


def build_model(payload):
    from slotbench.models import HEADS, POLICIES, REPRESENTATIONS

    kind = payload["model_kind"]
    registry = dict(REPRESENTATIONS)
    registry.update(POLICIES)
    registry.update(HEADS)
    if kind not in registry:
        raise CheckpointError("Unknown model kind {!r}".format(kind))
    model_cls, config_cls = registry[kind]
    model = model_cls(config_cls.from_dict(payload["config"]))
    model.load_state_dict(payload["state_dict"])
    return model.eval()


def load_model(path, expected_kind=None):
    payload = load_checkpoint(path)
    if expected_kind is not None and payload["model_kind"] != expected_kind:
        raise CheckpointError(
            "Checkpoint {} holds a {!r} model, expected {!r}".format(
                path, payload["model_kind"], expected_kind
            )
        )
    return build_model(payload)


def parameter_checksum(model):
    """
        sha256 over every parameter and buffer, in name order.
    """
    digest = hashlib.sha256()
    for name, tensor in sorted(model.state_dict().items()):
        digest.update(name.encode("utf-8"))
        digest.update(tensor.detach().cpu().contiguous().numpy().tobytes())
    return digest.hexdigest()


def freeze(model):
    for p in model.parameters():
        p.requires_grad = False
    return model.eval()
