from __future__ import absolute_import, division, print_function

from datetime import datetime

import dateutil.parser as dateparser
import pytz


def utcnow():
    return datetime.now(pytz.utc)


def as_utc(time):
    """
        Naive datetimes are assumed to be UTC, aware ones are converted.
    """
    if time is None:
        return None
    if not time.tzinfo:
        time = time.replace(tzinfo=pytz.utc)
    return time.astimezone(pytz.utc)


class SlotTime(object):
    @classmethod
    def parse(cls, date_string):
        """
            Parse a ledger or manifest time string into an aware UTC datetime.
        """
        try:
            return as_utc(dateparser.parse(date_string))
        except Exception:
            raise ValueError(
                "Could not parse date string: {!r}".format(date_string)
            )

    @classmethod
    def format(cls, time):
        return as_utc(time).strftime("%Y-%m-%dT%H:%M:%S.%fZ")
