from __future__ import absolute_import, division, print_function

import numpy as np


def place_vertices(vertices, pose):
    """
        Rotate local (n, 2) vertices by pose[2] and translate to pose[:2].
    """
    x, y, theta = pose
    c, s = np.cos(theta), np.sin(theta)
    rot = np.array([[c, -s], [s, c]])
    return vertices.dot(rot.T) + np.array([x, y])


def _edge_normals(vertices):
    edges = np.roll(vertices, -1, axis=0) - vertices
    normals = np.stack([edges[:, 1], -edges[:, 0]], axis=1)
    lengths = np.linalg.norm(normals, axis=1, keepdims=True)
    return normals / lengths


def disk_polygon_mtv(center, radius, vertices):
    """
    Minimal translation that moves the convex polygon ``vertices`` out of
    the disk (``center``, ``radius``), found by separating axes.

    Returns a zero vector when the shapes do not overlap.
    """
    center = np.asarray(center, dtype=np.float64)
    closest = vertices[np.argmin(np.linalg.norm(vertices - center, axis=1))]
    axes = [_edge_normals(vertices)]
    to_vertex = closest - center
    norm = np.linalg.norm(to_vertex)
    if norm > 0:
        axes.append((to_vertex / norm)[None, :])
    axes = np.concatenate(axes, axis=0)

    proj = vertices.dot(axes.T)
    pmin, pmax = proj.min(axis=0), proj.max(axis=0)
    c = axes.dot(center)
    overlap = np.minimum(pmax - (c - radius), (c + radius) - pmin)
    if np.any(overlap <= 0):
        return np.zeros(2)

    best = int(np.argmin(overlap))
    axis = axes[best]
    if (vertices.mean(axis=0) - center).dot(axis) < 0:
        axis = -axis
    return axis * overlap[best]


def polygon_mtv(a, b):
    """
    Minimal translation that moves convex polygon ``b`` out of convex
    polygon ``a``. Zero vector when they are separated.
    """
    axes = np.concatenate([_edge_normals(a), _edge_normals(b)], axis=0)
    pa, pb = a.dot(axes.T), b.dot(axes.T)
    overlap = np.minimum(
        pa.max(axis=0) - pb.min(axis=0), pb.max(axis=0) - pa.min(axis=0)
    )
    if np.any(overlap <= 0):
        return np.zeros(2)

    best = int(np.argmin(overlap))
    axis = axes[best]
    if (b.mean(axis=0) - a.mean(axis=0)).dot(axis) < 0:
        axis = -axis
    return axis * overlap[best]


def point_segment_distance(p, a, b):
    p, a, b = (np.asarray(v, dtype=np.float64) for v in (p, a, b))
    ab = b - a
    denom = ab.dot(ab)
    if denom == 0:
        return float(np.linalg.norm(p - a))
    t = np.clip((p - a).dot(ab) / denom, 0.0, 1.0)
    return float(np.linalg.norm(p - (a + t * ab)))
