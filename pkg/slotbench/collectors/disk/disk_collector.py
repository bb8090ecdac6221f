from __future__ import absolute_import, division, print_function

import io
import math
import os

import numpy as np
from PIL import Image

from slotbench.collectors.collector import Collector
from slotbench.parsers.manifest import ManifestParser, frame_path, meta_path
from slotbench.parsers.trajectory import TrajectoryParser
from slotbench.scenegen.roster import entity_names, roster


def load_png(path):
    """
        8-bit RGB PNG to a (H, W, 3) uint8 array.
    """
    with open(path, "rb") as f:
        image = Image.open(io.BytesIO(f.read()))
        return np.asarray(image.convert("RGB"), dtype=np.uint8)


class DiskCollector(Collector):
    """
    Collects demonstrations from a dataset directory written by
    ``generate_dataset``.
    """

    def __init__(self, root, **kwargs):
        super(DiskCollector, self).__init__()
        self.root = root
        self.manifest_parser = ManifestParser()
        self.parser = TrajectoryParser()
        self.manifest = self.manifest_parser.read(root)
        self.n_blocks = self.manifest.n_blocks

    def list_features(self):
        return entity_names(roster(self.n_blocks))

    def list_variables(self):
        return ["rgb", "rgb_plus_gt_segmentation"]

    def episode_indices(self):
        """
            Indices after the data fraction and the seeds range are applied.
        """
        indices = [e["index"] for e in self.manifest.episodes]
        if self.data_fraction is not None:
            indices = indices[: int(math.ceil(self.data_fraction * len(indices)))]
        if self.seeds is not None:
            start, stop = self.seeds
            indices = [i for i in indices if start <= i < stop]
        return indices

    def _meta_lines(self, index):
        with open(meta_path(self.root, index)) as f:
            return f.read().splitlines()

    def load_episode(self, index, images=True):
        loader = None
        if images:
            def loader(t):
                return load_png(frame_path(self.root, index, t))
        return self.parser.parse(self._meta_lines(index), loader)

    def collect(self, images=True):
        return [self.load_episode(i, images) for i in self.episode_indices()]

    def raw(self, **kwargs):
        with open(os.path.join(self.root, "manifest.json")) as f:
            manifest = f.read()
        return manifest, {i: self._meta_lines(i) for i in self.episode_indices()}

    def frame_index(self, stride=1):
        """
            (episode, t) pairs of every ``stride``-th frame.
        """
        pairs = []
        for index in self.episode_indices():
            n_frames = len([l for l in self._meta_lines(index) if l.strip()])
            pairs.extend((index, t) for t in range(0, n_frames, stride))
        return pairs

    def _pairs(self, stride, limit):
        pairs = self.frame_index(stride)
        if limit is not None:
            pairs = pairs[:limit]
        if not pairs:
            raise ValueError("Dataset selection at {} is empty".format(self.root))
        return pairs

    def images(self, stride=1, limit=None):
        """
            (N, H, W, 3) uint8 frames for representation learning.
        """
        return np.stack(
            [
                load_png(frame_path(self.root, i, t))
                for i, t in self._pairs(stride, limit)
            ]
        )

    def states(self, stride=1, limit=None):
        """
            SceneStates aligned with ``images(stride, limit)``.
        """
        pairs = self._pairs(stride, limit)
        out = []
        for index in sorted({i for i, _ in pairs}):
            record = self.load_episode(index, images=False)
            out.extend(record.frames[t].state for i, t in pairs if i == index)
        return out

    def samples(self, stride=1, limit=None):
        """
            uint8 frames together with their aligned SceneStates.
        """
        return self.images(stride, limit), self.states(stride, limit)

    def transitions(self, images=True):
        """
        Flattened behavior cloning data: uint8 images (or None), states,
        actions (N, 2) and target block indices (N,). The zero-action final
        frame of each episode is left out.
        """
        frames, states, actions, targets = [], [], [], []
        for record in self.collect(images=images):
            for frame in record.frames[:-1]:
                if images and frame.image is None:
                    # unreadable frame, already warned about by the parser
                    continue
                frames.append(frame.image)
                states.append(frame.state)
                actions.append(frame.action)
                targets.append(record.target_block)
        if not states:
            raise ValueError("Dataset selection at {} is empty".format(self.root))
        stacked = np.stack(frames) if images else None
        return stacked, states, np.asarray(actions), np.asarray(targets)

    def targets(self, states):
        """
            (N, E, 2) coordinates of the selected entities (all by default).
        """
        names = self.list_features()
        selected = self.features or names
        columns = [names.index(n) for n in selected]
        return np.stack([s.positions()[columns] for s in states])
