from __future__ import absolute_import, division, print_function

import hashlib
import json
import os


def episode_dir(root, index):
    return os.path.join(root, "episode_{:05d}".format(index))


def frame_path(root, index, t):
    return os.path.join(episode_dir(root, index), "frame_{:04d}.png".format(t))


def meta_path(root, index):
    return os.path.join(episode_dir(root, index), "meta.jsonl")


def episode_checksum(root, index):
    """
        SHA-256 over meta.jsonl followed by every frame PNG in time order.
    """
    digest = hashlib.sha256()
    with open(meta_path(root, index), "rb") as f:
        meta = f.read()
    digest.update(meta)
    n_frames = sum(1 for line in meta.splitlines() if line.strip())
    for t in range(n_frames):
        path = frame_path(root, index, t)
        if os.path.exists(path):
            with open(path, "rb") as f:
                digest.update(f.read())
    return digest.hexdigest()


class Manifest(object):
    def __init__(self, seed, config, episodes):
        self.seed = int(seed)
        self.config = dict(config)
        self.episodes = list(episodes)

    @property
    def n_episodes(self):
        return len(self.episodes)

    @property
    def n_blocks(self):
        return int(self.config["n_blocks"])

    @property
    def resolution(self):
        return tuple(self.config["resolution"])

    def checksums(self):
        return [e["checksum"] for e in self.episodes]

    def to_dict(self):
        return {
            "seed": self.seed,
            "config": self.config,
            "n_episodes": self.n_episodes,
            "episodes": self.episodes,
        }

    def dumps(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


class ManifestParser(object):
    def __init__(self):
        pass

    def parse(self, text):
        d = json.loads(text)
        try:
            self.manifest = Manifest(d["seed"], d["config"], d["episodes"])
        except KeyError as e:
            raise ValueError("Manifest is missing field {}".format(e))
        return self.manifest

    def read(self, root):
        with open(os.path.join(root, "manifest.json")) as f:
            return self.parse(f.read())

    def verify(self, root, manifest=None):
        """
            Indices of episodes whose files no longer match their checksum.
        """
        manifest = manifest or self.read(root)
        bad = []
        for entry in manifest.episodes:
            try:
                actual = episode_checksum(root, entry["index"])
            except (IOError, OSError):
                actual = None
            if actual != entry["checksum"]:
                bad.append(entry["index"])
        return bad
