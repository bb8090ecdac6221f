from __future__ import absolute_import, division, print_function

import os
from collections import OrderedDict

import numpy as np
import pandas as pd

from slotbench.utils.files import atomic_write_json, atomic_write_text

DEFAULT_THRESHOLD = 0.1


class PCKReport(object):
    """
    Percentage of correct keypoints per entity, their mean, and means over
    entities sharing a colour.
    """

    def __init__(self, per_object, threshold, n_eval, table_length=1.0):
        self.per_object = OrderedDict(per_object)
        self.threshold = float(threshold)
        self.n_eval = int(n_eval)
        self.table_length = float(table_length)

    @property
    def mean(self):
        return float(np.mean(list(self.per_object.values())))

    @property
    def group_means(self):
        groups = OrderedDict()
        for name, value in self.per_object.items():
            if "_" not in name:
                continue
            groups.setdefault(name.split("_")[0], []).append(value)
        return OrderedDict((c, float(np.mean(v))) for c, v in groups.items())

    def to_dict(self):
        return {
            "per_object": dict(self.per_object),
            "object_order": list(self.per_object),
            "mean": self.mean,
            "group_means": dict(self.group_means),
            "threshold": self.threshold,
            "table_length": self.table_length,
            "n_eval": self.n_eval,
        }

    @classmethod
    def from_dict(cls, d):
        order = d.get("object_order", sorted(d["per_object"]))
        return cls(
            [(n, d["per_object"][n]) for n in order],
            d["threshold"],
            d["n_eval"],
            d.get("table_length", 1.0),
        )

    def to_frame(self):
        return pd.DataFrame(
            {
                "object": list(self.per_object),
                "pck": list(self.per_object.values()),
                "threshold": self.threshold,
                "n_eval": self.n_eval,
            }
        )

    def write(self, directory, stem="pck"):
        """
            Writes ``<stem>.csv`` (one row per object) and ``<stem>.json``.
        """
        csv_path = os.path.join(directory, "{}.csv".format(stem))
        json_path = os.path.join(directory, "{}.json".format(stem))
        atomic_write_text(csv_path, self.to_frame().to_csv(index=False))
        atomic_write_json(json_path, self.to_dict())
        return csv_path, json_path

    def __repr__(self):
        return "<PCKReport mean={:.1f} threshold={} n_eval={}>".format(
            self.mean, self.threshold, self.n_eval
        )


def pck(predictions, ground_truth, threshold=DEFAULT_THRESHOLD, table_length=1.0, names=None):
    """
    predictions, ground_truth: (N, E, 2) aligned series in table units. An
    entity counts as correct in a frame when its Euclidean error is at most
    ``threshold * table_length``.
    """
    predictions = np.asarray(predictions, dtype=np.float64)
    ground_truth = np.asarray(ground_truth, dtype=np.float64)
    if predictions.shape != ground_truth.shape:
        raise ValueError(
            "Predictions {} and ground truth {} are not aligned".format(
                predictions.shape, ground_truth.shape
            )
        )
    if predictions.ndim != 3 or predictions.shape[0] == 0:
        raise ValueError(
            "Expected a non-empty (N, E, 2) series, got {}".format(predictions.shape)
        )
    if not threshold > 0:
        raise ValueError("PCK threshold must be > 0, got {!r}".format(threshold))

    n, e = predictions.shape[:2]
    if names is None:
        names = ["object_{}".format(i) for i in range(e)]
    if len(names) != e:
        raise ValueError("{} names for {} objects".format(len(names), e))

    errors = np.linalg.norm(predictions - ground_truth, axis=-1)
    correct = errors <= threshold * table_length
    values = 100.0 * correct.mean(axis=0)
    return PCKReport(
        [(name, float(v)) for name, v in zip(names, values)],
        threshold,
        n,
        table_length,
    )
