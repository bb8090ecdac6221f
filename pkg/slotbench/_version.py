from __future__ import absolute_import, division, print_function

version_json = {
    "version": "0.1.0",
    "full-revisionid": None,
    "dirty": False,
    "error": None,
}


def get_versions():
    return dict(version_json)
