from __future__ import absolute_import, division, print_function

from collections import namedtuple

import numpy as np

from slotbench.scenegen.expert import scripted_expert
from slotbench.scenegen.raster import render
from slotbench.scenegen.world import (
    MAX_STEP,
    SUCCESS_RADIUS,
    is_success,
    sample_scene,
    step,
)

MAX_EPISODE_STEPS = 200

Frame = namedtuple("Frame", ["image", "state", "action"])


class TrajectoryRecord(object):
    """
    One demonstration: ordered frames of (image, state, action), the target
    block index, the pole position, the success flag and the scene seed.
    Images may be None when a rollout was run without rendering.
    """

    def __init__(self, frames, target_block, pole_pos, success, seed):
        self.frames = list(frames)
        self.target_block = int(target_block)
        self.pole_pos = np.asarray(pole_pos, dtype=np.float64)
        self.success = bool(success)
        self.seed = int(seed)

    def __len__(self):
        return len(self.frames)

    @property
    def final_state(self):
        return self.frames[-1].state

    def final_distance(self):
        return self.final_state.target_distance(self.target_block)

    def is_consistent(self, radius=SUCCESS_RADIUS):
        return self.success == (self.final_distance() <= radius)

    def images(self):
        return np.stack([f.image for f in self.frames])

    def actions(self):
        return np.stack([f.action for f in self.frames])


def episode_seed(seed, attempt):
    """
        Scene seed of the ``attempt``-th episode drawn under dataset ``seed``.
    """
    ss = np.random.SeedSequence([int(seed), int(attempt)])
    return int(ss.generate_state(1)[0])


def target_for(rng_seed, n_blocks):
    return int(np.random.default_rng([int(rng_seed), 1]).integers(n_blocks))


def rollout(
    policy,
    rng_seed,
    n_blocks,
    resolution=None,
    max_steps=MAX_EPISODE_STEPS,
    max_step=MAX_STEP,
    on_frame=None,
):
    """
    Run ``policy(image, state, target_block) -> action`` from the scene drawn
    under ``rng_seed`` until the target block reaches the pole or
    ``max_steps`` actions were taken. The final frame carries a zero action.
    """
    state = sample_scene(rng_seed, n_blocks)
    target = target_for(rng_seed, n_blocks)
    frames = []
    success = False
    for _ in range(max_steps):
        image = render(state, resolution) if resolution is not None else None
        if is_success(state, target):
            success = True
            break
        action = np.asarray(policy(image, state, target), dtype=np.float64)
        frames.append(Frame(image, state, action))
        if on_frame is not None:
            on_frame(frames[-1])
        state = step(state, action, max_step=max_step)
    else:
        image = render(state, resolution) if resolution is not None else None
        success = is_success(state, target)

    frames.append(Frame(image, state, np.zeros(2)))
    if on_frame is not None:
        on_frame(frames[-1])
    return TrajectoryRecord(frames, target, state.pole_pos, success, rng_seed)


def expert_policy(max_step=MAX_STEP):
    def act(image, state, target_block):
        return scripted_expert(state, target_block, max_step=max_step)

    return act


def rollout_expert(rng_seed, n_blocks, resolution=None, **kwargs):
    return rollout(expert_policy(), rng_seed, n_blocks, resolution, **kwargs)
