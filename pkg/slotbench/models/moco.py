from __future__ import absolute_import, division, print_function

import copy

import torch
import torch.nn as nn
import torch.nn.functional as F
from torchvision.transforms import v2

from slotbench.models.layers import ConvTrunk, resize_features


class ContrastiveConfig(object):
    def __init__(self, **kwargs):
        self.resolution = tuple(int(v) for v in kwargs.get("resolution", (64, 64)))
        self.encoder_channels = tuple(kwargs.get("encoder_channels", (32, 32, 32, 32)))
        self.kernel_size = kwargs.get("kernel_size", 5)
        self.embedding_dim = kwargs.get("embedding_dim", 128)
        self.queue_size = kwargs.get("queue_size", 16384)
        self.temperature = kwargs.get("temperature", 0.1)
        self.batch_size = kwargs.get("batch_size", 16)
        self.momentum = kwargs.get("momentum", 0.999)
        self.crop_scale = tuple(kwargs.get("crop_scale", (0.5, 1.0)))
        self.jitter = kwargs.get("jitter", 0.4)

    def get_temperature(self):
        return self._temperature

    def set_temperature(self, t):
        if not t > 0:
            raise ValueError("temperature must be > 0, got {!r}".format(t))
        self._temperature = float(t)

    temperature = property(get_temperature, set_temperature)

    def get_momentum(self):
        return self._momentum

    def set_momentum(self, m):
        if not 0 <= m <= 1:
            raise ValueError("momentum must be in [0, 1], got {!r}".format(m))
        self._momentum = float(m)

    momentum = property(get_momentum, set_momentum)

    def get_queue_size(self):
        return self._queue_size

    def set_queue_size(self, q):
        if int(q) < 1:
            raise ValueError("queue_size must be >= 1, got {!r}".format(q))
        self._queue_size = int(q)

    queue_size = property(get_queue_size, set_queue_size)

    def to_dict(self):
        return {
            "resolution": list(self.resolution),
            "encoder_channels": list(self.encoder_channels),
            "kernel_size": self.kernel_size,
            "embedding_dim": self.embedding_dim,
            "queue_size": self.queue_size,
            "temperature": self.temperature,
            "batch_size": self.batch_size,
            "momentum": self.momentum,
            "crop_scale": list(self.crop_scale),
            "jitter": self.jitter,
        }

    @classmethod
    def from_dict(cls, d):
        return cls(**d)


def augmentations(config):
    """
        Random crop-resize, colour jitter and horizontal flip.
    """
    j = config.jitter
    return v2.Compose(
        [
            v2.RandomResizedCrop(config.resolution, scale=config.crop_scale, antialias=True),
            v2.RandomHorizontalFlip(),
            v2.ColorJitter(brightness=j, contrast=j, saturation=j, hue=min(j / 4, 0.5)),
        ]
    )


class EmbeddingEncoder(nn.Module):
    def __init__(self, config):
        super(EmbeddingEncoder, self).__init__()
        self.trunk = ConvTrunk(3, config.encoder_channels, config.kernel_size)
        c = self.trunk.out_channels
        self.head = nn.Sequential(
            nn.Linear(c, c),
            nn.ReLU(),
            nn.Linear(c, config.embedding_dim),
        )

    def forward(self, images):
        pooled = self.trunk(images).mean(dim=(2, 3))
        return F.normalize(self.head(pooled), dim=1)


class MomentumContrast(nn.Module):
    """
    Query encoder trained with InfoNCE against a momentum (EMA) key encoder
    and a FIFO queue of past keys.
    """

    model_kind = "moco"

    def __init__(self, config=None):
        super(MomentumContrast, self).__init__()
        self.config = config or ContrastiveConfig()
        c = self.config
        self.encoder_q = EmbeddingEncoder(c)
        self.encoder_k = copy.deepcopy(self.encoder_q)
        for p in self.encoder_k.parameters():
            p.requires_grad = False

        self.register_buffer(
            "queue", F.normalize(torch.randn(c.embedding_dim, c.queue_size), dim=0)
        )
        self.register_buffer("queue_ptr", torch.zeros(1, dtype=torch.long))
        self.register_buffer("queue_count", torch.zeros(1, dtype=torch.long))
        self.register_buffer("queue_batch", torch.zeros(1, dtype=torch.long))
        self.augment = augmentations(c)

    def augment_batch(self, images):
        # each sample gets its own random view
        return torch.stack([self.augment(img) for img in images])

    @torch.no_grad()
    def momentum_update(self):
        m = self.config.momentum
        for q, k in zip(self.encoder_q.parameters(), self.encoder_k.parameters()):
            k.mul_(m).add_(q.detach(), alpha=1.0 - m)

    @torch.no_grad()
    def enqueue(self, keys):
        b = keys.shape[0]
        size = self.config.queue_size
        if b > size:
            raise ValueError(
                "Batch of {} keys does not fit a queue of {}".format(b, size)
            )
        ptr = int(self.queue_ptr)
        if ptr + b > size:
            ptr = 0
        self.queue[:, ptr:ptr + b] = keys.T
        self.queue_ptr[0] = ptr + b
        self.queue_count[0] += b
        self.queue_batch[0] = b

    def queued_keys(self):
        """
            Keys currently held, oldest first, (n, embedding_dim).
        """
        b = int(self.queue_batch)
        if b == 0:
            return self.queue[:, :0].T
        usable = (self.config.queue_size // b) * b
        ptr = int(self.queue_ptr)
        if int(self.queue_count) <= usable:
            return self.queue[:, :ptr].T.clone()
        order = torch.cat([self.queue[:, ptr:usable], self.queue[:, :ptr]], dim=1)
        return order.T.clone()

    def logits(self, view_q, view_k):
        """
            Returns logits (B, 1 + Q) with the positive first, and the keys.
        """
        q = self.encoder_q(view_q)
        with torch.no_grad():
            k = self.encoder_k(view_k)
        l_pos = torch.einsum("bc,bc->b", q, k).unsqueeze(-1)
        l_neg = torch.einsum("bc,cq->bq", q, self.queue.clone().detach())
        return torch.cat([l_pos, l_neg], dim=1) / self.config.temperature, k

    def contrastive_loss(self, view_q, view_k):
        logits, keys = self.logits(view_q, view_k)
        labels = torch.zeros(logits.shape[0], dtype=torch.long, device=logits.device)
        return F.cross_entropy(logits, labels), keys

    def embedding(self, images):
        return self.encoder_q(images)

    def penultimate_features(self, images):
        return resize_features(self.encoder_q.trunk(images), images.shape[-2:])
