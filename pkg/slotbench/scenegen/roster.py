from __future__ import absolute_import, division, print_function

from collections import namedtuple

import numpy as np
from shapely import affinity
from shapely.geometry import Point, Polygon

SHAPES = ("moon", "cube", "star", "pentagon")

# Flat shading, RGB in [0, 1]
COLORS = {
    "red": (0.85, 0.15, 0.15),
    "blue": (0.15, 0.30, 0.85),
    "green": (0.15, 0.70, 0.25),
    "yellow": (0.95, 0.85, 0.10),
}
BACKGROUND_COLOR = (0.08, 0.08, 0.08)
TABLE_COLOR = (0.80, 0.75, 0.65)
POLE_COLOR = (0.55, 0.20, 0.70)
EFFECTOR_COLOR = (0.30, 0.30, 0.30)

DEFAULT_CIRCUMRADIUS = 0.06
MAX_CIRCUMRADIUS = 0.1


class BlockSpec(namedtuple("BlockSpec", ["shape", "color", "circumradius"])):
    __slots__ = ()

    def __new__(cls, shape, color, circumradius=DEFAULT_CIRCUMRADIUS):
        if shape not in SHAPES:
            raise ValueError(
                "Not a recognized shape: {!r}. Must be one of {}".format(
                    shape, SHAPES
                )
            )
        if color not in COLORS:
            raise ValueError(
                "Not a recognized color: {!r}. Must be one of {}".format(
                    color, sorted(COLORS)
                )
            )
        circumradius = float(circumradius)
        if not 0 < circumradius <= MAX_CIRCUMRADIUS:
            raise ValueError(
                "Block circumradius must be in (0, {}], got {!r}".format(
                    MAX_CIRCUMRADIUS, circumradius
                )
            )
        return super(BlockSpec, cls).__new__(cls, shape, color, circumradius)

    @property
    def name(self):
        return "{}_{}".format(self.color, self.shape)

    @property
    def rgb(self):
        return COLORS[self.color]

    def outline(self):
        """
            The block outline centered on the origin at zero rotation.
        """
        return _outline(self.shape, self.circumradius)

    def hull_vertices(self):
        """
            Counter-clockwise convex hull vertices (n, 2) used for contact.
        """
        return _hull_vertices(self.shape, self.circumradius)

    def placed(self, pose):
        """
            The outline moved to ``pose`` = (x, y, theta).
        """
        x, y, theta = pose
        geom = affinity.rotate(
            self.outline(), theta, origin=(0, 0), use_radians=True
        )
        return affinity.translate(geom, x, y)


_OUTLINE_CACHE = {}
_HULL_CACHE = {}


def _regular(n, radius, phase):
    angles = phase + 2 * np.pi * np.arange(n) / n
    return np.stack([radius * np.cos(angles), radius * np.sin(angles)], 1)


def _outline(shape, r):
    key = (shape, r)
    if key not in _OUTLINE_CACHE:
        if shape == "cube":
            geom = Polygon(_regular(4, r, np.pi / 4))
        elif shape == "pentagon":
            geom = Polygon(_regular(5, r, np.pi / 2))
        elif shape == "star":
            outer = _regular(5, r, np.pi / 2)
            inner = _regular(5, 0.45 * r, np.pi / 2 + np.pi / 5)
            points = np.empty((10, 2))
            points[0::2] = outer
            points[1::2] = inner
            geom = Polygon(points)
        else:
            # crescent: disk minus an offset disk, stays a single polygon
            disk = Point(0, 0).buffer(r, 32)
            bite = Point(0.45 * r, 0).buffer(0.8 * r, 32)
            geom = disk.difference(bite)
        _OUTLINE_CACHE[key] = geom
    return _OUTLINE_CACHE[key]


def _hull_vertices(shape, r):
    key = (shape, r)
    if key not in _HULL_CACHE:
        hull = _outline(shape, r).convex_hull
        coords = np.asarray(hull.exterior.coords)[:-1]
        if Polygon(coords).exterior.is_ccw is False:
            coords = coords[::-1]
        _HULL_CACHE[key] = np.ascontiguousarray(coords, dtype=np.float64)
    return _HULL_CACHE[key]


def _specs(pairs, circumradius):
    return tuple(BlockSpec(s, c, circumradius) for c, s in pairs)


# Roster order is draw order and the order of localization targets
ROSTER_PAIRS = {
    1: [("blue", "cube")],
    3: [("red", "moon"), ("blue", "cube"), ("green", "star")],
    4: [
        ("red", "moon"),
        ("blue", "cube"),
        ("green", "star"),
        ("yellow", "pentagon"),
    ],
    8: [
        ("red", "moon"),
        ("blue", "cube"),
        ("green", "star"),
        ("yellow", "pentagon"),
        ("red", "pentagon"),
        ("blue", "moon"),
        ("green", "cube"),
        ("yellow", "star"),
    ],
}


def roster(n_blocks, circumradius=DEFAULT_CIRCUMRADIUS):
    if n_blocks not in ROSTER_PAIRS:
        raise ValueError(
            "Not a supported roster size: {!r}. Must be one of {}".format(
                n_blocks, sorted(ROSTER_PAIRS)
            )
        )
    return _specs(ROSTER_PAIRS[n_blocks], circumradius)


def entity_names(blocks):
    """
        Localization targets: every block in roster order, then the effector.
    """
    return [b.name for b in blocks] + ["effector"]


def mask_names(blocks):
    """
        Ground truth mask entities in draw order.
    """
    return ["background", "pole"] + [b.name for b in blocks] + ["effector"]
