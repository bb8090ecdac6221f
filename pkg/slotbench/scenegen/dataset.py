from __future__ import absolute_import, division, print_function

import os
import shutil

import numpy as np
from PIL import Image

from slotbench import logger
from slotbench.collectors.expert.expert_collector import ExpertCollector
from slotbench.parsers.manifest import (
    Manifest,
    episode_checksum,
    episode_dir,
    frame_path,
    meta_path,
)
from slotbench.parsers.trajectory import TrajectoryParser
from slotbench.scenegen.roster import DEFAULT_CIRCUMRADIUS
from slotbench.scenegen.trajectory import MAX_EPISODE_STEPS
from slotbench.scenegen.world import (
    EFFECTOR_RADIUS,
    MAX_STEP,
    POLE_RADIUS,
    SUCCESS_RADIUS,
)


def to_uint8(image):
    image = np.asarray(image)
    if image.dtype == np.uint8:
        return image
    return np.round(np.clip(image, 0.0, 1.0) * 255).astype(np.uint8)


def write_png(path, image):
    Image.fromarray(to_uint8(image)).save(path, format="PNG")


def write_episode(root, index, record, parser=None):
    parser = parser or TrajectoryParser()
    os.makedirs(episode_dir(root, index))
    for t, frame in enumerate(record.frames):
        write_png(frame_path(root, index, t), frame.image)
    with open(meta_path(root, index), "w") as f:
        f.write("\n".join(parser.serialize(record)) + "\n")
    return {
        "index": index,
        "seed": record.seed,
        "target_block": record.target_block,
        "n_frames": len(record),
        "checksum": episode_checksum(root, index),
    }


def generate_dataset(
    root,
    episodes,
    n_blocks=8,
    resolution=(64, 64),
    seed=0,
    max_steps=MAX_EPISODE_STEPS,
    workers=1,
):
    """
    Write ``episodes`` successful expert demonstrations under ``root``.

    Everything is written to a sibling temporary directory first and moved
    into place once the manifest is complete.
    """
    if episodes < 1:
        raise ValueError("Need at least one episode, got {!r}".format(episodes))

    config = {
        "episodes": int(episodes),
        "n_blocks": int(n_blocks),
        "resolution": [int(v) for v in resolution],
        "max_steps": int(max_steps),
        "circumradius": DEFAULT_CIRCUMRADIUS,
        "effector_radius": EFFECTOR_RADIUS,
        "pole_radius": POLE_RADIUS,
        "max_step": MAX_STEP,
        "success_radius": SUCCESS_RADIUS,
    }

    collector = ExpertCollector(
        n_blocks=n_blocks,
        resolution=resolution,
        max_steps=max_steps,
        seed=seed,
        workers=workers,
    ).filter(seeds=(0, episodes))

    tmp = "{}.tmp-{}".format(root.rstrip(os.sep), os.getpid())
    if os.path.exists(tmp):
        shutil.rmtree(tmp)
    os.makedirs(tmp)

    parser = TrajectoryParser()
    entries = []
    try:
        for index, record in collector.iter_episodes():
            entries.append(write_episode(tmp, index, record, parser))
            if (index + 1) % 100 == 0:
                logger.info("Wrote {} of {} episodes".format(index + 1, episodes))

        manifest = Manifest(seed, config, entries)
        with open(os.path.join(tmp, "manifest.json"), "w") as f:
            f.write(manifest.dumps())
    except Exception:
        shutil.rmtree(tmp, ignore_errors=True)
        raise

    if os.path.exists(root):
        shutil.rmtree(root)
    os.rename(tmp, root)
    logger.info("Dataset with {} episodes at {}".format(episodes, root))
    return manifest
