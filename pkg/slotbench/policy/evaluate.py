from __future__ import absolute_import, division, print_function

import os
from collections import OrderedDict
from concurrent.futures import ThreadPoolExecutor

import numpy as np
import pandas as pd

from slotbench import logger
from slotbench.parsers.manifest import episode_dir, frame_path
from slotbench.scenegen.dataset import write_png
from slotbench.scenegen.trajectory import MAX_EPISODE_STEPS, episode_seed, rollout
from slotbench.scenegen.world import SUCCESS_RADIUS
from slotbench.utils.files import atomic_write_json, atomic_write_text

# Scene streams kept apart from the dataset seeds (which stay below 10**6)
STREAMS = OrderedDict([("evaluation", 10 ** 6), ("validation", 2 * 10 ** 6)])


def evaluation_seeds(n_episodes, stream="evaluation"):
    if stream not in STREAMS:
        raise ValueError(
            "Not a recognized seed stream: {!r}. Must be one of {}".format(
                stream, ", ".join(STREAMS)
            )
        )
    return [episode_seed(STREAMS[stream], i) for i in range(n_episodes)]


class PolicyEvalReport(object):
    """
    Success rate per policy-training seed over the same evaluation scenes,
    with mean and population SD across those seeds.
    """

    def __init__(
        self,
        success_rates,
        n_episodes,
        max_steps=MAX_EPISODE_STEPS,
        success_radius=SUCCESS_RADIUS,
        variant=None,
    ):
        self.success_rates = OrderedDict(
            (int(k), float(v)) for k, v in success_rates.items()
        )
        self.n_episodes = int(n_episodes)
        self.max_steps = int(max_steps)
        self.success_radius = float(success_radius)
        self.variant = variant

    @property
    def seeds(self):
        return list(self.success_rates)

    @property
    def mean(self):
        return float(np.mean(list(self.success_rates.values())))

    @property
    def sd(self):
        return float(np.std(list(self.success_rates.values()), ddof=0))

    def to_dict(self):
        return {
            "variant": self.variant,
            "seeds": self.seeds,
            "success_rates": [self.success_rates[s] for s in self.seeds],
            "success_rate_mean": self.mean,
            "success_rate_sd": self.sd,
            "n_episodes": self.n_episodes,
            "max_steps": self.max_steps,
            "success_radius": self.success_radius,
        }

    @classmethod
    def from_dict(cls, d):
        return cls(
            OrderedDict(zip(d["seeds"], d["success_rates"])),
            d["n_episodes"],
            d["max_steps"],
            d["success_radius"],
            d.get("variant"),
        )

    def to_frame(self):
        return pd.DataFrame(
            {
                "seed": self.seeds,
                "success_rate": [self.success_rates[s] for s in self.seeds],
                "variant": self.variant,
                "n_episodes": self.n_episodes,
            }
        )

    def write(self, directory, stem="policy_eval"):
        csv_path = os.path.join(directory, "{}.csv".format(stem))
        json_path = os.path.join(directory, "{}.json".format(stem))
        atomic_write_text(csv_path, self.to_frame().to_csv(index=False))
        atomic_write_json(json_path, self.to_dict())
        return csv_path, json_path

    def __repr__(self):
        return "<PolicyEvalReport {:.3f} +/- {:.3f} over seeds {}>".format(
            self.mean, self.sd, self.seeds
        )


def _frame_dumper(root, index):
    os.makedirs(episode_dir(root, index))
    frames = []

    def on_frame(frame):
        write_png(frame_path(root, index, len(frames)), frame.image)
        frames.append(frame)

    return on_frame


def evaluate_policy(
    policies,
    n_blocks,
    n_episodes=200,
    max_steps=MAX_EPISODE_STEPS,
    resolution=(64, 64),
    workers=1,
    stream="evaluation",
    training_seeds=None,
    dump_dir=None,
    dump_episodes=0,
    variant=None,
):
    """
    Roll out every policy on the same ``n_episodes`` held-out scenes.

    policies: a policy ``act(image, state, target) -> action`` or a dict of
    them keyed by policy-training seed. An episode succeeds when the target
    block gets within the success radius of the pole within ``max_steps``.
    Rollouts of the first ``dump_episodes`` scenes are written as PNG frames
    under ``dump_dir/seed_<s>/``.
    """
    if not isinstance(policies, dict):
        policies = {0: policies}
    scene_seeds = evaluation_seeds(n_episodes, stream)
    if training_seeds is not None and set(scene_seeds) & set(training_seeds):
        raise ValueError("Evaluation scenes overlap the training scenes")

    rates = OrderedDict()
    for seed in sorted(policies):
        policy = policies[seed]
        needs_image = getattr(policy, "needs_image", True)

        def run(i):
            on_frame = None
            res = resolution if needs_image else None
            if dump_dir is not None and i < dump_episodes:
                on_frame = _frame_dumper(os.path.join(dump_dir, "seed_{}".format(seed)), i)
                res = resolution
            record = rollout(policy, scene_seeds[i], n_blocks, res, max_steps=max_steps, on_frame=on_frame)
            return record.success

        if workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                successes = list(pool.map(run, range(n_episodes)))
        else:
            successes = [run(i) for i in range(n_episodes)]
        rates[seed] = float(np.mean(successes))
        logger.info(
            "Policy seed {} success {:.3f} over {} episodes".format(
                seed, rates[seed], n_episodes
            )
        )

    return PolicyEvalReport(rates, n_episodes, max_steps, SUCCESS_RADIUS, variant)
