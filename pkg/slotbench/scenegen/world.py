from __future__ import absolute_import, division, print_function

import numpy as np
from shapely.geometry import Point, Polygon

from slotbench.scenegen.geometry import (
    disk_polygon_mtv,
    place_vertices,
    polygon_mtv,
)
from slotbench.scenegen.roster import DEFAULT_CIRCUMRADIUS, roster
from slotbench.scenegen.state import SceneState

EFFECTOR_RADIUS = 0.03
POLE_RADIUS = 0.025
MAX_STEP = 0.02
SUCCESS_RADIUS = 0.05
MAX_ATTEMPTS = 10000
BLOCK_ITERATIONS = 8

# sampled blocks start at least this far from the pole
POLE_CLEARANCE = 0.15
POLE_MARGIN = 0.15


class OverDenseSceneError(ValueError):
    pass


def sample_scene(
    rng_seed,
    n_blocks,
    circumradius=DEFAULT_CIRCUMRADIUS,
    max_attempts=MAX_ATTEMPTS,
):
    """
    Rejection-sample a scene: pole first, then blocks in roster order, then
    the effector. Block hulls never intersect each other and the effector
    disk never touches a block hull.
    """
    blocks = roster(n_blocks, circumradius)
    rng = np.random.default_rng(rng_seed)

    pole = rng.uniform(POLE_MARGIN, 1.0 - POLE_MARGIN, size=2)

    poses = []
    hulls = []
    for spec in blocks:
        r = spec.circumradius
        for _ in range(max_attempts):
            x, y = rng.uniform(r, 1.0 - r, size=2)
            theta = rng.uniform(0.0, 2 * np.pi)
            if np.hypot(x - pole[0], y - pole[1]) < POLE_CLEARANCE:
                continue
            hull = Polygon(place_vertices(spec.hull_vertices(), (x, y, theta)))
            if any(hull.intersects(other) for other in hulls):
                continue
            poses.append((x, y, theta))
            hulls.append(hull)
            break
        else:
            raise OverDenseSceneError(
                "Could not place {} after {} attempts; {} blocks is too "
                "dense for circumradius {}".format(
                    spec.name, max_attempts, n_blocks, r
                )
            )

    for _ in range(max_attempts):
        effector = rng.uniform(EFFECTOR_RADIUS, 1.0 - EFFECTOR_RADIUS, size=2)
        disk = Point(effector).buffer(EFFECTOR_RADIUS, 16)
        if not any(disk.intersects(h) for h in hulls):
            break
    else:
        raise OverDenseSceneError(
            "Could not place the effector after {} attempts".format(
                max_attempts
            )
        )

    return SceneState(blocks, np.array(poses).reshape(-1, 3), effector, pole)


def clamp_action(action, max_step=MAX_STEP):
    action = np.asarray(action, dtype=np.float64).reshape(2)
    if not np.all(np.isfinite(action)):
        return np.zeros(2)
    norm = np.linalg.norm(action)
    if norm > max_step:
        action = action * (max_step / norm)
    return action


def block_hulls(state):
    return [
        place_vertices(spec.hull_vertices(), pose)
        for spec, pose in zip(state.blocks, state.block_poses)
    ]


def step(state, action, max_step=MAX_STEP):
    """
    Kinematic push: move the effector, push every block the effector disk
    overlaps out along its minimal translation, then relax block-block
    overlaps pairwise. Rotations never change.
    """
    action = clamp_action(action, max_step)
    nxt = state.copy()
    nxt.effector_pos = np.clip(nxt.effector_pos + action, 0.0, 1.0)

    local = [spec.hull_vertices() for spec in nxt.blocks]
    for i, pose in enumerate(nxt.block_poses):
        mtv = disk_polygon_mtv(
            nxt.effector_pos, EFFECTOR_RADIUS, place_vertices(local[i], pose)
        )
        nxt.block_poses[i, :2] += mtv

    n = nxt.n_blocks
    for _ in range(BLOCK_ITERATIONS):
        moved = False
        for i in range(n):
            for j in range(i + 1, n):
                mtv = polygon_mtv(
                    place_vertices(local[i], nxt.block_poses[i]),
                    place_vertices(local[j], nxt.block_poses[j]),
                )
                if mtv.any():
                    nxt.block_poses[i, :2] -= 0.5 * mtv
                    nxt.block_poses[j, :2] += 0.5 * mtv
                    moved = True
        if not moved:
            break

    nxt.block_poses[:, :2] = np.clip(nxt.block_poses[:, :2], 0.0, 1.0)
    return nxt


def is_success(state, target_block, radius=SUCCESS_RADIUS):
    return state.target_distance(target_block) <= radius
