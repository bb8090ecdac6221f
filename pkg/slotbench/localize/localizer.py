from __future__ import absolute_import, division, print_function

import numpy as np
import torch
import torch.nn.functional as F

from slotbench import logger
from slotbench.localize.centroids import mask_centroids
from slotbench.localize.pck import DEFAULT_THRESHOLD, pck
from slotbench.models.regressor import LocalizerConfig, LocalizerMLP
from slotbench.training.checkpoint import (
    FrozenParametersError,
    build_model,
    freeze,
    load_checkpoint,
    parameter_checksum,
    save_checkpoint,
)
from slotbench.training.trainers import Trainer, images_to_tensor, seed_everything

VARIANTS = {
    "slot_attention": "slot_centroids",
    "moco": "moco_embedding",
    "autoencoder": "autoencoder_pooled",
}


def localizer_variant(model):
    try:
        return VARIANTS[model.model_kind]
    except KeyError:
        raise ValueError(
            "No localizer input for model kind {!r}".format(model.model_kind)
        )


@torch.no_grad()
def representation_features(model, images, batch_size=64, device="cpu"):
    """
    Flat localizer inputs for uint8 frames (N, H, W, 3): slot mask
    centroids (2K), the contrastive embedding, or the autoencoder's pooled
    encoder grid.
    """
    variant = localizer_variant(model)
    model.to(device).eval()
    chunks = []
    for start in range(0, len(images), batch_size):
        x = images_to_tensor(images[start:start + batch_size]).to(device)
        if variant == "slot_centroids":
            masks = model.extract_masks(x).masks.cpu().numpy()
            out = mask_centroids(masks).reshape(len(x), -1)
        elif variant == "moco_embedding":
            out = model.embedding(x).cpu().numpy()
        else:
            out = model.pooled_embedding(x).cpu().numpy()
        chunks.append(np.asarray(out, dtype=np.float32))
    return np.concatenate(chunks)


class PairData(object):
    def __init__(self, features, targets):
        self.features = torch.as_tensor(np.asarray(features), dtype=torch.float32)
        self.targets = torch.as_tensor(np.asarray(targets), dtype=torch.float32)
        if len(self.features) != len(self.targets):
            raise ValueError(
                "{} feature rows for {} targets".format(
                    len(self.features), len(self.targets)
                )
            )
        if len(self.features) == 0:
            raise ValueError("Localizer training needs at least one sample")

    def __len__(self):
        return len(self.features)

    def batch(self, indices, device):
        idx = torch.as_tensor(indices)
        return self.features[idx].to(device), self.targets[idx].to(device)


class RegressionTrainer(Trainer):
    def compute_loss(self, batch):
        x, y = batch
        return F.mse_loss(self.model(x), y), None


class Localizer(object):
    """
    Frozen representation plus a coordinate-regressing MLP.

        loc = Localizer(model, names=entity_names(roster(4)), steps=2000)
        loc.fit(images, targets)
        report = loc.evaluate(test_images, test_targets, threshold=0.1)
    """

    def __init__(self, upstream, names, **kwargs):
        self.upstream = freeze(upstream) if upstream is not None else None
        self.names = list(names)
        self.hidden = kwargs.get("hidden", 256)
        self.feature_batch = kwargs.get("feature_batch", 64)
        self.device = kwargs.get("device", "cpu")
        self.train_kwargs = {
            "steps": kwargs.get("steps", 2000),
            "batch_size": kwargs.get("batch_size", 64),
            "lr": kwargs.get("lr", 1e-3),
            "warmup": kwargs.get("warmup", 100),
            "final_lr_fraction": kwargs.get("final_lr_fraction", 0.01),
            "checkpoint_every": kwargs.get("checkpoint_every", 500),
            "log_every": kwargs.get("log_every", 500),
            "seed": kwargs.get("seed", 0),
            "output_dir": kwargs.get("output_dir", None),
            "device": self.device,
        }
        self.mlp = None
        self.upstream_checksum = None

    @property
    def variant(self):
        if self.upstream is None:
            return "identity"
        return localizer_variant(self.upstream)

    def features(self, images):
        if self.upstream is None:
            return np.asarray(images, dtype=np.float32).reshape(len(images), -1)
        return representation_features(
            self.upstream, images, self.feature_batch, self.device
        )

    def _checksum(self):
        return None if self.upstream is None else parameter_checksum(self.upstream)

    def fit_features(self, features, targets):
        targets = np.asarray(targets)
        if targets.shape[1] != len(self.names):
            raise ValueError(
                "Targets hold {} entities, names list {}".format(
                    targets.shape[1], len(self.names)
                )
            )
        seed_everything(self.train_kwargs["seed"])
        config = LocalizerConfig(
            in_features=features.shape[1],
            n_entities=len(self.names),
            hidden=self.hidden,
            variant=self.variant,
        )
        self.mlp = LocalizerMLP(config)
        self.mlp.set_statistics(features)
        result = RegressionTrainer(self.mlp, **self.train_kwargs).fit(
            PairData(features, targets)
        )
        return result

    def fit(self, images, targets):
        before = self._checksum()
        result = self.fit_features(self.features(images), targets)
        after = self._checksum()
        if before != after:
            raise FrozenParametersError(
                "Representation parameters changed during localizer training "
                "({} -> {})".format(before, after)
            )
        self.upstream_checksum = after
        logger.info(
            "Localizer ({}) trained, final loss {:.6g}".format(
                self.variant, result.final_loss
            )
        )
        return result

    @torch.no_grad()
    def predict_features(self, features):
        if self.mlp is None:
            raise ValueError("Localizer has not been trained")
        self.mlp.eval()
        x = torch.as_tensor(np.asarray(features), dtype=torch.float32)
        return self.mlp(x.to(self.device)).cpu().numpy()

    def predict(self, images):
        return self.predict_features(self.features(images))

    def regression_loss(self, features, targets):
        pred = self.predict_features(features)
        return float(np.mean((pred - np.asarray(targets)) ** 2))

    def evaluate(self, images, targets, threshold=DEFAULT_THRESHOLD):
        return pck(self.predict(images), targets, threshold, names=self.names)

    def save(self, path):
        return save_checkpoint(
            path,
            self.mlp,
            extra={"names": self.names, "upstream_checksum": self.upstream_checksum},
        )

    @classmethod
    def load(cls, path, upstream, **kwargs):
        payload = load_checkpoint(path)
        loc = cls(upstream, payload["extra"]["names"], **kwargs)
        loc.mlp = build_model(payload)
        loc.upstream_checksum = payload["extra"].get("upstream_checksum")
        if upstream is not None and loc.upstream_checksum != loc._checksum():
            raise FrozenParametersError(
                "Localizer at {} was trained on a different representation".format(path)
            )
        return loc


def train_localizer(upstream, images, targets, names, **kwargs):
    """
        Fits a Localizer on frozen ``upstream``; returns (localizer, result).
    """
    loc = Localizer(upstream, names, **kwargs)
    return loc, loc.fit(images, targets)
