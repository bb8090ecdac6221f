from __future__ import absolute_import, division, print_function

import os

import numpy as np
from PIL import Image

from slotbench.utils.files import atomic_write_json, read_json

MASK_SCALE = 65535


def export_masks(masks, directory, stem="masks", meta=None):
    """
    Write (K, H, W) alpha masks as K 16-bit grayscale PNG pages plus a JSON
    sidecar. Returns the sidecar path.
    """
    masks = np.asarray(masks, dtype=np.float64)
    if masks.ndim != 3:
        raise ValueError("Expected (K, H, W) masks, got shape {}".format(masks.shape))
    if not os.path.isdir(directory):
        os.makedirs(directory)

    pages = []
    for k, mask in enumerate(masks):
        name = "{}_slot_{:02d}.png".format(stem, k)
        page = np.round(np.clip(mask, 0.0, 1.0) * MASK_SCALE).astype(np.uint16)
        Image.fromarray(page).save(os.path.join(directory, name), format="PNG")
        pages.append(name)

    sidecar = {
        "num_slots": int(masks.shape[0]),
        "resolution": [int(masks.shape[1]), int(masks.shape[2])],
        "scale": MASK_SCALE,
        "pages": pages,
        "meta": meta or {},
    }
    return atomic_write_json(os.path.join(directory, "{}.json".format(stem)), sidecar)


def read_masks(sidecar_path):
    sidecar = read_json(sidecar_path)
    directory = os.path.dirname(sidecar_path)
    pages = [
        np.asarray(Image.open(os.path.join(directory, name)), dtype=np.float64)
        for name in sidecar["pages"]
    ]
    return np.stack(pages) / sidecar["scale"], sidecar
