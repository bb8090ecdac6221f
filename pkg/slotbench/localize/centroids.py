from __future__ import absolute_import, division, print_function

import numpy as np

EMPTY_CENTROID = (0.5, 0.5)


def mask_centroids(masks):
    """
    Center of mass of each slot mask in normalized image coordinates.

    masks: (K, H, W) or (B, K, H, W) non-negative weights.
    Returns (K, 2) or (B, K, 2) of (x, y), where pixel (row, col) sits at
    ((col + 0.5) / W, (row + 0.5) / H). A slot with no weight gets
    (0.5, 0.5).
    """
    masks = np.asarray(masks, dtype=np.float64)
    single = masks.ndim == 3
    if single:
        masks = masks[np.newaxis]
    if masks.ndim != 4:
        raise ValueError(
            "Expected (K, H, W) or (B, K, H, W) masks, got shape {}".format(
                masks.shape
            )
        )

    h, w = masks.shape[-2:]
    xs = (np.arange(w) + 0.5) / w
    ys = (np.arange(h) + 0.5) / h

    total = masks.sum(axis=(2, 3))
    cx = np.einsum("bkhw,w->bk", masks, xs)
    cy = np.einsum("bkhw,h->bk", masks, ys)
    empty = total <= 0
    safe = np.where(empty, 1.0, total)
    centroids = np.stack([cx / safe, cy / safe], axis=-1)
    centroids[empty] = EMPTY_CENTROID
    return centroids[0] if single else centroids
