from __future__ import absolute_import, division, print_function

import contextlib
import fcntl
import json
import os


def atomic_write_text(path, text):
    """
        Write ``text`` to a temporary sibling and rename it over ``path``.
    """
    directory = os.path.dirname(os.path.abspath(path))
    if not os.path.isdir(directory):
        os.makedirs(directory, exist_ok=True)
    tmp = "{}.tmp-{}".format(path, os.getpid())
    with open(tmp, "w") as f:
        f.write(text)
    os.replace(tmp, path)
    return path


def atomic_write_json(path, obj):
    return atomic_write_text(path, json.dumps(obj, indent=2, sort_keys=True) + "\n")


def read_json(path):
    with open(path) as f:
        return json.load(f)


@contextlib.contextmanager
def run_lock(path):
    """
    Exclusive ``flock`` on ``path`` for the duration of the block. Blocks
    until every other holder, in this process or another, has let go.
    """
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    with open(path, "a") as f:
        fcntl.flock(f, fcntl.LOCK_EX)
        try:
            yield path
        finally:
            fcntl.flock(f, fcntl.LOCK_UN)
