from __future__ import absolute_import, division, print_function

import numpy as np

from slotbench.scenegen.roster import BlockSpec

TABLE_EXTENT = (1.0, 1.0)


class SceneState(object):
    """
    Poses of every block, the effector and the goal pole on the unit table.

    block_poses is an (n, 3) float64 array of (x, y, theta); effector_pos
    and pole_pos are (2,) float64 arrays. Positions are table units.
    """

    def __init__(self, blocks, block_poses, effector_pos, pole_pos):
        self.blocks = tuple(blocks)
        self.block_poses = np.array(block_poses, dtype=np.float64).reshape(
            len(self.blocks), 3
        )
        self.effector_pos = np.array(effector_pos, dtype=np.float64).reshape(2)
        self.pole_pos = np.array(pole_pos, dtype=np.float64).reshape(2)
        self.table_extent = TABLE_EXTENT

    @property
    def n_blocks(self):
        return len(self.blocks)

    def copy(self):
        return SceneState(
            self.blocks, self.block_poses, self.effector_pos, self.pole_pos
        )

    def block_position(self, index):
        return self.block_poses[index, :2].copy()

    def target_distance(self, index):
        return float(np.linalg.norm(self.block_poses[index, :2] - self.pole_pos))

    def positions(self):
        """
            (n_blocks + 1, 2) ground truth coordinates: blocks then effector.
        """
        return np.vstack([self.block_poses[:, :2], self.effector_pos[None]])

    def tobytes(self):
        return b"".join(
            [
                self.block_poses.tobytes(),
                self.effector_pos.tobytes(),
                self.pole_pos.tobytes(),
            ]
        )

    def to_dict(self):
        return {
            "blocks": [list(b) for b in self.blocks],
            "block_poses": self.block_poses.tolist(),
            "effector_pos": self.effector_pos.tolist(),
            "pole_pos": self.pole_pos.tolist(),
        }

    @classmethod
    def from_dict(cls, d):
        blocks = [BlockSpec(*b) for b in d["blocks"]]
        return cls(blocks, d["block_poses"], d["effector_pos"], d["pole_pos"])

    def __eq__(self, other):
        if not isinstance(other, SceneState):
            return NotImplemented
        return self.blocks == other.blocks and self.tobytes() == other.tobytes()

    def __ne__(self, other):
        result = self.__eq__(other)
        return result if result is NotImplemented else not result

    def __repr__(self):
        return "SceneState(n_blocks={}, effector={}, pole={})".format(
            self.n_blocks, self.effector_pos.tolist(), self.pole_pos.tolist()
        )
