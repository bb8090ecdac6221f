from __future__ import absolute_import, division, print_function

import fcntl
import json
import os
import warnings

from slotbench.utils.timestamps import SlotTime, utcnow

LEDGER_NAME = "ledger.jsonl"


class Ledger(object):
    """
    Append-only results ledger, one JSON record per completed run. Appends
    hold an exclusive lock on the file so parallel sweep processes
    serialize.
    """

    def __init__(self, root):
        self.root = root
        self.path = os.path.join(root, LEDGER_NAME)

    def append(self, experiment_id, config_hash, stage, run_dir, metrics, wall_clock):
        record = {
            "experiment_id": experiment_id,
            "config_hash": config_hash,
            "stage": stage,
            "run_dir": os.path.relpath(run_dir, self.root),
            "metrics": metrics,
            "timestamp": SlotTime.format(utcnow()),
            "wall_clock": float(wall_clock),
        }
        if not os.path.isdir(self.root):
            os.makedirs(self.root)
        line = json.dumps(record, sort_keys=True) + "\n"
        with open(self.path, "a") as f:
            fcntl.flock(f, fcntl.LOCK_EX)
            try:
                f.write(line)
                f.flush()
                os.fsync(f.fileno())
            finally:
                fcntl.flock(f, fcntl.LOCK_UN)
        return record

    def records(self, stage=None):
        if not os.path.isfile(self.path):
            return []
        out = []
        with open(self.path) as f:
            fcntl.flock(f, fcntl.LOCK_SH)
            try:
                lines = f.read().splitlines()
            finally:
                fcntl.flock(f, fcntl.LOCK_UN)
        for n, line in enumerate(lines):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except ValueError:
                warnings.warn("Skipping unreadable ledger line {} in {}".format(n + 1, self.path))
                continue
            if stage is None or record.get("stage") == stage:
                out.append(record)
        return out

    def __len__(self):
        return len(self.records())
