from __future__ import absolute_import, division, print_function

import numpy as np
from sklearn.metrics import adjusted_rand_score


def foreground_ari(pred_masks, gt_masks, background_index=0):
    """
    Adjusted Rand index between predicted and ground truth pixel groupings,
    ignoring pixels that belong to the ground truth background.

    pred_masks: (K, H, W) soft or hard masks, grouped by argmax over K.
    gt_masks: (E, H, W) binary masks partitioning the image.
    """
    pred_masks = np.asarray(pred_masks)
    gt_masks = np.asarray(gt_masks)
    if pred_masks.shape[1:] != gt_masks.shape[1:]:
        raise ValueError(
            "Mask resolutions differ: {} vs {}".format(
                pred_masks.shape[1:], gt_masks.shape[1:]
            )
        )

    pred_ids = pred_masks.argmax(axis=0).ravel()
    gt_ids = gt_masks.argmax(axis=0).ravel()
    foreground = gt_ids != background_index
    if not foreground.any():
        return 1.0
    return float(adjusted_rand_score(gt_ids[foreground], pred_ids[foreground]))


def mean_foreground_ari(pred_batch, gt_batch, background_index=0):
    scores = [
        foreground_ari(p, g, background_index=background_index)
        for p, g in zip(pred_batch, gt_batch)
    ]
    return float(np.mean(scores))
