from __future__ import absolute_import, division, print_function

import os
import zlib

import numpy as np
import torch
import torch.nn.functional as F

from slotbench import logger
from slotbench.models.policy_nets import EnergyNet, ExplicitPolicyNet, PolicyConfig
from slotbench.policy.dfo import DerivativeFreeOptimizer
from slotbench.policy.evaluate import evaluate_policy
from slotbench.policy.observation import ObservationBuilder
from slotbench.scenegen.dataset import to_uint8
from slotbench.scenegen.expert import scripted_expert
from slotbench.scenegen.world import MAX_STEP, clamp_action
from slotbench.training.checkpoint import (
    FrozenParametersError,
    build_model,
    load_checkpoint,
    load_model,
    save_checkpoint,
)
from slotbench.training.trainers import Trainer, seed_everything
from slotbench.utils.files import atomic_write_json

KINDS = ("explicit", "implicit")


class TransitionData(object):
    """
    Expert transitions with observations built per batch. Actions are
    stored divided by ``max_step`` so they live in [-1, 1]^2.
    """

    def __init__(self, images, states, actions, targets, builder, max_step=MAX_STEP):
        self.images = np.asarray(images)
        self.states = list(states)
        self.actions = torch.as_tensor(np.asarray(actions) / max_step, dtype=torch.float32)
        self.targets = np.asarray(targets)
        self.builder = builder
        if len(self.states) == 0:
            raise ValueError("Policy training needs at least one transition")

    def __len__(self):
        return len(self.states)

    def batch(self, indices, device):
        obs = self.builder.policy_input(
            self.images[indices],
            [self.states[i] for i in indices],
            self.targets[indices],
        )
        return obs.to(device), self.actions[torch.as_tensor(indices)].to(device)


class ExplicitBCTrainer(Trainer):
    def compute_loss(self, batch):
        obs, actions = batch
        return F.mse_loss(self.model(obs), actions), None


class ImplicitBCTrainer(Trainer):
    """
    InfoNCE over the expert action and ``counter_examples`` uniform actions
    from the normalized action box.
    """

    def __init__(self, model, **kwargs):
        super(ImplicitBCTrainer, self).__init__(model, **kwargs)
        self.counter_examples = int(kwargs.get("counter_examples", 256))
        if self.counter_examples < 1:
            raise ValueError(
                "Implicit BC needs at least one counter-example, got {!r}".format(
                    self.counter_examples
                )
            )
        self.sampler = torch.Generator().manual_seed(self.seed + 1)

    def compute_loss(self, batch):
        obs, actions = batch
        b = obs.shape[0]
        counter = torch.rand((b, self.counter_examples, 2), generator=self.sampler) * 2.0 - 1.0
        candidates = torch.cat([actions.unsqueeze(1), counter.to(obs.device)], dim=1)
        energies = self.model(obs, candidates)
        labels = torch.zeros(b, dtype=torch.long, device=obs.device)
        return F.cross_entropy(-energies, labels), None


class ValidationCurve(object):
    """
        Rollout success on held-out scenes at every checkpoint of a trainer.
    """

    def __init__(self, net, make_policy, n_blocks, episodes=10, max_steps=200, resolution=(64, 64)):
        self.net = net
        self.make_policy = make_policy
        self.n_blocks = n_blocks
        self.episodes = episodes
        self.max_steps = max_steps
        self.resolution = resolution
        self.points = []

    def __call__(self, step):
        report = evaluate_policy(
            {0: self.make_policy()},
            self.n_blocks,
            n_episodes=self.episodes,
            max_steps=self.max_steps,
            resolution=self.resolution,
            stream="validation",
        )
        self.net.train()
        self.points.append({"step": int(step), "success_rate": report.mean})
        logger.info("validation step {} success {:.3f}".format(step, report.mean))


class BCPolicy(object):
    """
    Learned policy behind the rollout interface
    ``act(image, state, target_block) -> (dx, dy)``.
    """

    needs_image = True

    def __init__(self, net, builder, dfo=None, seed=0):
        self.net = net.eval()
        self.builder = builder
        self.kind = "implicit" if isinstance(net, EnergyNet) else "explicit"
        self.dfo = dfo or DerivativeFreeOptimizer()
        self.seed = int(seed)
        self.max_step = net.config.max_step

    @property
    def device(self):
        return next(self.net.parameters()).device

    @torch.no_grad()
    def act(self, image, state, target_block):
        obs = self.builder.policy_input(
            to_uint8(image)[np.newaxis], [state], [target_block]
        ).to(self.device)
        if self.kind == "explicit":
            action = self.net(obs)[0]
        else:
            # seeded from the state so rollouts are reproducible in any order
            generator = torch.Generator().manual_seed(
                zlib.crc32(state.tobytes()) ^ self.seed
            )
            action = self.dfo.infer(self.net, obs, generator)[0]
        return clamp_action(action.cpu().numpy().astype(np.float64) * self.max_step, self.max_step)

    __call__ = act

    def save(self, path, representation_path=None):
        return save_checkpoint(
            path,
            self.net,
            extra={
                "variant": self.builder.variant,
                "n_blocks": self.builder.n_blocks,
                "representation": representation_path,
                "representation_checksum": self.builder.checksum,
            },
        )


class ExpertPolicy(object):
    """The scripted expert behind the same interface as BCPolicy."""

    needs_image = False

    def __init__(self, max_step=MAX_STEP):
        self.max_step = max_step

    def act(self, image, state, target_block):
        return scripted_expert(state, target_block, max_step=self.max_step)

    __call__ = act


def train_policy(transitions, variant, kind="explicit", representation=None, **kwargs):
    """
    Behavior cloning on ``transitions`` = (uint8 images, states, actions,
    targets) as returned by ``DiskCollector.transitions``.

    Returns (BCPolicy, TrainingResult). With ``validation_episodes`` > 0 a
    success-rate curve is measured at every checkpoint and written as
    ``validation.json`` into ``output_dir``.
    """
    if kind not in KINDS:
        raise ValueError(
            "Not a recognized BC trainer: {!r}. Must be one of {}".format(
                kind, ", ".join(KINDS)
            )
        )
    images, states, actions, targets = transitions
    if len(states) == 0:
        raise ValueError("Policy training needs at least one transition")
    n_blocks = kwargs.pop("n_blocks", states[0].n_blocks)
    max_step = kwargs.pop("max_step", MAX_STEP)
    device = kwargs.get("device", "cpu")
    seed = int(kwargs.get("seed", 0))
    validation_episodes = kwargs.pop("validation_episodes", 0)
    dfo = kwargs.pop("dfo", None)

    builder = ObservationBuilder(variant, representation, n_blocks, device=device)
    seed_everything(seed)
    config = PolicyConfig(
        in_channels=builder.input_channels(),
        resolution=np.asarray(images).shape[1:3],
        channels=kwargs.pop("channels", (32, 64, 64)),
        hidden=kwargs.pop("hidden", 256),
        max_step=max_step,
    )
    if kind == "explicit":
        net, trainer_cls = ExplicitPolicyNet(config), ExplicitBCTrainer
    else:
        net, trainer_cls = EnergyNet(config), ImplicitBCTrainer

    kwargs.setdefault("warmup", 100)
    trainer = trainer_cls(net, **kwargs)

    curve = None
    if validation_episodes:
        curve = ValidationCurve(
            net,
            lambda: BCPolicy(net, builder, dfo, seed),
            n_blocks,
            episodes=validation_episodes,
            resolution=config.resolution,
        )
        trainer.on_checkpoint = curve

    result = trainer.fit(
        TransitionData(images, states, actions, targets, builder, max_step)
    )
    if not builder.verify_frozen():
        raise FrozenParametersError(
            "Representation parameters changed during policy training"
        )

    output_dir = kwargs.get("output_dir")
    if curve is not None and output_dir:
        atomic_write_json(os.path.join(output_dir, "validation.json"), curve.points)
    result.validation = curve.points if curve is not None else []
    return BCPolicy(net, builder, dfo, seed), result


def load_policy(path, representation_path=None, device="cpu", seed=0):
    payload = load_checkpoint(path)
    extra = payload["extra"]
    representation = None
    rep_path = representation_path or extra.get("representation")
    if rep_path:
        representation = load_model(rep_path)
    builder = ObservationBuilder(extra["variant"], representation, extra["n_blocks"], device)
    if extra.get("representation_checksum") not in (None, builder.checksum):
        raise FrozenParametersError(
            "Policy {} was trained on a different representation".format(path)
        )
    net = build_model(payload).to(device)
    return BCPolicy(net, builder, seed=seed)
