from __future__ import absolute_import, division, print_function

from .manifest import Manifest, ManifestParser
from .trajectory import TrajectoryParser

__all__ = ["Manifest", "ManifestParser", "TrajectoryParser"]
