from __future__ import absolute_import, division, print_function

import numpy as np
import shapely

from slotbench.scenegen.roster import (
    BACKGROUND_COLOR,
    EFFECTOR_COLOR,
    POLE_COLOR,
    TABLE_COLOR,
    mask_names,
)
from slotbench.scenegen.world import EFFECTOR_RADIUS, POLE_RADIUS

# The camera sees a thin border of floor around the unit table
VIEW_MARGIN = 0.05

BACKGROUND_ID = 0
TABLE_ID = 1
POLE_ID = 2
FIRST_BLOCK_ID = 3


def _check_resolution(resolution):
    h, w = (int(v) for v in resolution)
    if h <= 0 or w <= 0:
        raise ValueError(
            "Not a recognized resolution: {!r}. Must be positive (H, W)".format(
                resolution
            )
        )
    return h, w


def pixel_centers(resolution):
    """
        Table coordinates (x, y) of every pixel center, each (H, W).
        Row 0 is y closest to 0.
    """
    h, w = _check_resolution(resolution)
    span = 1.0 + 2 * VIEW_MARGIN
    xs = -VIEW_MARGIN + (np.arange(w) + 0.5) * span / w
    ys = -VIEW_MARGIN + (np.arange(h) + 0.5) * span / h
    return np.meshgrid(xs, ys)


def table_to_pixel(points):
    """
        Table coordinates to normalized [0, 1] image coordinates.
    """
    return (np.asarray(points) + VIEW_MARGIN) / (1.0 + 2 * VIEW_MARGIN)


def pixel_to_table(points):
    return np.asarray(points) * (1.0 + 2 * VIEW_MARGIN) - VIEW_MARGIN


def entity_ids(state, resolution):
    """
    Entity-ID buffer in draw order: background, table, pole, blocks (roster
    order), effector. Later entities overwrite earlier ones.
    """
    xs, ys = pixel_centers(resolution)
    ids = np.full(xs.shape, BACKGROUND_ID, dtype=np.int32)

    on_table = (xs >= 0) & (xs <= 1) & (ys >= 0) & (ys <= 1)
    ids[on_table] = TABLE_ID

    pole = np.hypot(xs - state.pole_pos[0], ys - state.pole_pos[1])
    ids[pole < POLE_RADIUS] = POLE_ID

    for i, (spec, pose) in enumerate(zip(state.blocks, state.block_poses)):
        inside = shapely.contains_xy(spec.placed(pose), xs, ys)
        ids[inside] = FIRST_BLOCK_ID + i

    eff = np.hypot(xs - state.effector_pos[0], ys - state.effector_pos[1])
    ids[eff < EFFECTOR_RADIUS] = FIRST_BLOCK_ID + state.n_blocks
    return ids


def palette(state):
    colors = [BACKGROUND_COLOR, TABLE_COLOR, POLE_COLOR]
    colors.extend(spec.rgb for spec in state.blocks)
    colors.append(EFFECTOR_COLOR)
    return np.asarray(colors, dtype=np.float32)


def render(state, resolution):
    """
        Flat-shaded (H, W, 3) float32 raster with values in [0, 1].
    """
    return palette(state)[entity_ids(state, resolution)]


class GroundTruthMasks(object):
    """
    Binary per-entity masks (E, H, W) in draw order: background (floor and
    table), pole, every block, effector. Every pixel belongs to exactly one.
    """

    def __init__(self, masks, names):
        self.masks = masks
        self.names = list(names)

    def __getitem__(self, name):
        return self.masks[self.names.index(name)]

    def __len__(self):
        return len(self.names)

    def counts(self):
        return dict(zip(self.names, self.masks.reshape(len(self), -1).sum(1)))


def ground_truth_masks(state, resolution):
    ids = entity_ids(state, resolution)
    # floor and table collapse into the background mask
    ids = np.where(ids == TABLE_ID, BACKGROUND_ID, ids)
    ids = np.where(ids > TABLE_ID, ids - 1, ids)
    n = state.n_blocks + 3
    masks = (ids[None] == np.arange(n)[:, None, None]).astype(np.uint8)
    return GroundTruthMasks(masks, mask_names(state.blocks))
