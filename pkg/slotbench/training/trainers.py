from __future__ import absolute_import, division, print_function

import math
import os
import random

import numpy as np
import torch

from slotbench import logger
from slotbench.training.checkpoint import save_checkpoint


class DivergenceError(RuntimeError):
    def __init__(self, step, last_loss):
        self.step = step
        self.last_loss = last_loss
        super(DivergenceError, self).__init__(
            "Loss became non-finite at step {} (last finite loss {})".format(
                step, last_loss
            )
        )


def seed_everything(seed):
    random.seed(seed)
    np.random.seed(seed % 2 ** 32)
    torch.manual_seed(seed)


def images_to_tensor(images):
    """
        uint8 (N, H, W, 3) or float [0, 1] -> float (N, 3, H, W).
    """
    x = torch.as_tensor(np.asarray(images))
    if x.dtype == torch.uint8:
        x = x.float() / 255.0
    return x.float().permute(0, 3, 1, 2).contiguous()


class ImageData(object):
    """Frames kept as uint8, converted per batch."""

    def __init__(self, images):
        self.images = np.asarray(images)
        if len(self.images) == 0:
            raise ValueError("Training needs a non-empty image set")

    def __len__(self):
        return len(self.images)

    def batch(self, indices, device):
        return images_to_tensor(self.images[indices]).to(device)


class TrainingResult(object):
    def __init__(self, model, losses, best_loss, best_step, checkpoints):
        self.model = model
        self.losses = losses
        self.best_loss = best_loss
        self.best_step = best_step
        self.checkpoints = checkpoints

    @property
    def initial_loss(self):
        return self.losses[0] if self.losses else None

    @property
    def final_loss(self):
        return self.losses[-1] if self.losses else None


class Trainer(object):
    """
    Adam with linear warmup over shuffled minibatches. Writes
    ``step_<n>.pt`` every ``checkpoint_every`` steps and ``best.pt`` for the
    lowest mean loss over a checkpoint interval.
    """

    def __init__(self, model, **kwargs):
        self.model = model
        self.steps = int(kwargs.get("steps", 1000))
        self.batch_size = int(kwargs.get("batch_size", 8))
        self.lr = float(kwargs.get("lr", 4e-4))
        self.warmup = int(kwargs.get("warmup", 1000))
        self.final_lr_fraction = float(kwargs.get("final_lr_fraction", 1.0))
        self.checkpoint_every = int(kwargs.get("checkpoint_every", 500))
        self.log_every = int(kwargs.get("log_every", 100))
        self.seed = int(kwargs.get("seed", 0))
        self.output_dir = kwargs.get("output_dir", None)
        self.device = torch.device(kwargs.get("device", "cpu"))
        if self.steps < 1:
            raise ValueError("steps must be >= 1, got {!r}".format(self.steps))

    def compute_loss(self, batch):
        raise NotImplementedError

    def after_step(self, batch, aux):
        pass

    def on_checkpoint(self, step):
        pass

    def _optimizer(self):
        params = [p for p in self.model.parameters() if p.requires_grad]
        optimizer = torch.optim.Adam(params, lr=self.lr)
        warmup = max(self.warmup, 1)
        drop = 1.0 - self.final_lr_fraction

        def schedule(s):
            # linear warmup, then optional linear decay to the final fraction
            return min(1.0, (s + 1) / float(warmup)) * (1.0 - drop * s / float(self.steps))

        scheduler = torch.optim.lr_scheduler.LambdaLR(optimizer, schedule)
        return optimizer, scheduler

    def _save(self, name, step, loss):
        if self.output_dir is None:
            return None
        return save_checkpoint(
            os.path.join(self.output_dir, name), self.model, step, loss
        )

    def fit(self, data):
        self.model.to(self.device).train()
        optimizer, scheduler = self._optimizer()
        generator = torch.Generator().manual_seed(self.seed)
        n = len(data)
        batch_size = min(self.batch_size, n)

        losses = []
        checkpoints = []
        best_loss, best_step = float("inf"), 0
        window = []
        last_finite = None
        order = torch.randperm(n, generator=generator)
        cursor = 0

        for step in range(1, self.steps + 1):
            if cursor + batch_size > n:
                order = torch.randperm(n, generator=generator)
                cursor = 0
            indices = order[cursor:cursor + batch_size].numpy()
            cursor += batch_size

            batch = data.batch(indices, self.device)
            loss, aux = self.compute_loss(batch)
            value = float(loss.detach())
            if not math.isfinite(value):
                raise DivergenceError(step, last_finite)

            optimizer.zero_grad()
            loss.backward()
            optimizer.step()
            scheduler.step()
            self.after_step(batch, aux)

            last_finite = value
            losses.append(value)
            window.append(value)

            if step % self.log_every == 0:
                logger.info("step {} loss {:.6f}".format(step, value))

            if step % self.checkpoint_every == 0 or step == self.steps:
                mean = float(np.mean(window))
                window = []
                path = self._save("step_{:06d}.pt".format(step), step, mean)
                if path:
                    checkpoints.append(path)
                if mean < best_loss:
                    best_loss, best_step = mean, step
                    self._save("best.pt", step, mean)
                self.on_checkpoint(step)

        self.model.eval()
        return TrainingResult(self.model, losses, best_loss, best_step, checkpoints)


class ReconstructionTrainer(Trainer):
    """Slot model and autoencoder."""

    def compute_loss(self, batch):
        return self.model.reconstruction_loss(batch), None


class ContrastiveTrainer(Trainer):
    def __init__(self, model, **kwargs):
        kwargs.setdefault("batch_size", model.config.batch_size)
        super(ContrastiveTrainer, self).__init__(model, **kwargs)

    def compute_loss(self, batch):
        view_q = self.model.augment_batch(batch)
        view_k = self.model.augment_batch(batch)
        return self.model.contrastive_loss(view_q, view_k)

    def after_step(self, batch, keys):
        self.model.momentum_update()
        self.model.enqueue(keys)


def trainer_for(model, **kwargs):
    if model.model_kind == "moco":
        return ContrastiveTrainer(model, **kwargs)
    return ReconstructionTrainer(model, **kwargs)


def train_representation(model_factory, images, **kwargs):
    """
    Seed, build the model with ``model_factory()`` and fit it on uint8
    ``images``. Returns a TrainingResult.
    """
    seed_everything(int(kwargs.get("seed", 0)))
    model = model_factory()
    return trainer_for(model, **kwargs).fit(ImageData(images))
