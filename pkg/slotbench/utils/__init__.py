from __future__ import absolute_import, division, print_function

from .dataorg import flatten_report
from .files import atomic_write_json, atomic_write_text, read_json
from .timestamps import SlotTime, as_utc, utcnow

__all__ = [
    "SlotTime",
    "as_utc",
    "atomic_write_json",
    "atomic_write_text",
    "flatten_report",
    "read_json",
    "utcnow",
]
