from __future__ import absolute_import, division, print_function

import json
import warnings

import numpy as np

from slotbench.scenegen.state import SceneState
from slotbench.scenegen.trajectory import Frame, TrajectoryRecord


class TrajectoryParser(object):
    """
    Structured-text codec for one episode: ``meta.jsonl`` holds one JSON
    record per frame (t, state, action, target_block, pole_pos, success,
    seed). Images live next to it and are fetched through ``frame_loader``.
    """

    def __init__(self):
        pass

    def serialize(self, record):
        lines = []
        for t, frame in enumerate(record.frames):
            lines.append(
                json.dumps(
                    {
                        "t": t,
                        "state": frame.state.to_dict(),
                        "action": [float(a) for a in frame.action],
                        "target_block": record.target_block,
                        "pole_pos": record.pole_pos.tolist(),
                        "success": record.success,
                        "seed": record.seed,
                    },
                    sort_keys=True,
                )
            )
        return lines

    def parse(self, meta_lines, frame_loader=None):
        self.parsed_meta = self._parse_meta(meta_lines)
        if not self.parsed_meta:
            raise ValueError("Episode metadata holds no frames")

        frames = []
        for meta in self.parsed_meta:
            image = None
            if frame_loader is not None:
                try:
                    image = frame_loader(meta["t"])
                except (IOError, OSError) as e:
                    warnings.warn(
                        "Could not read frame {}, got {}".format(meta["t"], e)
                    )
            frames.append(
                Frame(
                    image,
                    SceneState.from_dict(meta["state"]),
                    np.asarray(meta["action"], dtype=np.float64),
                )
            )

        first = self.parsed_meta[0]
        self.record = TrajectoryRecord(
            frames,
            first["target_block"],
            first["pole_pos"],
            self.parsed_meta[-1]["success"],
            first["seed"],
        )
        return self.record

    def _parse_meta(self, meta_lines):
        """
        Transforms raw meta lines into a list of dicts ordered by ``t``.
        Blank lines are ignored.
        """
        parsed = [json.loads(line) for line in meta_lines if line.strip()]
        return sorted(parsed, key=lambda m: m["t"])
