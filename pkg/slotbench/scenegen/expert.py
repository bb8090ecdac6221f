from __future__ import absolute_import, division, print_function

import numpy as np

from slotbench.scenegen.geometry import point_segment_distance
from slotbench.scenegen.world import (
    EFFECTOR_RADIUS,
    MAX_STEP,
    SUCCESS_RADIUS,
    clamp_action,
)

PUSH_MARGIN = 0.005
CIRCLE_MARGIN = 0.012
LATERAL_FRACTION = 0.5


def _unit(v):
    norm = np.linalg.norm(v)
    if norm == 0:
        return np.zeros_like(v)
    return v / norm


def push_point(state, target_block):
    """
        Where the effector has to stand to push the target toward the pole.
    """
    block = state.block_position(target_block)
    u = _unit(state.pole_pos - block)
    standoff = (
        state.blocks[target_block].circumradius + EFFECTOR_RADIUS + PUSH_MARGIN
    )
    return block - u * standoff


def scripted_expert(state, target_block, max_step=MAX_STEP):
    """
    Two-phase waypoint controller.

    Phase one walks the effector to the push point behind the target block,
    orbiting the block when the straight path would cross it. Phase two
    pushes along the block->pole direction, steering back onto that line.
    """
    if not 0 <= target_block < state.n_blocks:
        raise ValueError(
            "Not a recognized target block: {!r}".format(target_block)
        )

    block = state.block_position(target_block)
    to_pole = state.pole_pos - block
    if np.linalg.norm(to_pole) <= SUCCESS_RADIUS:
        return np.zeros(2)

    u = _unit(to_pole)
    radius = state.blocks[target_block].circumradius
    contact = radius + EFFECTOR_RADIUS
    eff = state.effector_pos
    rel = eff - block
    along = rel.dot(u)
    lateral = rel - along * u

    # phase two: behind the block and close to the push line
    if along < 0 and np.linalg.norm(lateral) <= LATERAL_FRACTION * radius:
        direction = _unit(u - lateral / contact)
        return clamp_action(direction * max_step, max_step)

    target = push_point(state, target_block)
    if point_segment_distance(block, eff, target) > contact:
        return clamp_action(target - eff, max_step)

    # orbit the block on a circle clear of contact, toward the push side
    orbit = contact + CIRCLE_MARGIN
    dist = np.linalg.norm(rel)
    radial = _unit(rel) if dist > 0 else -u
    tangent = np.array([-radial[1], radial[0]])
    goal = -u
    cross = radial[0] * goal[1] - radial[1] * goal[0]
    if cross < 0:
        tangent = -tangent
    pull = np.clip(4.0 * (orbit - dist) / orbit, -1.0, 1.0)
    direction = _unit(tangent + pull * radial)
    return clamp_action(direction * max_step, max_step)
