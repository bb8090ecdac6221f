from __future__ import absolute_import, division, print_function


def flatten_report(report, prefix=None):
    """
    Convenience function to return a record-style representation of a
    nested report dict: keys are ``/``-joined, lists are ``;``-joined, so
    the result can be written as one CSV row.
    Useful with every report the harness persists.
    """
    flat = {}
    for key, value in report.items():
        name = key if prefix is None else "{}/{}".format(prefix, key)
        if isinstance(value, dict):
            flat.update(flatten_report(value, prefix=name))
        elif isinstance(value, (list, tuple)):
            flat[name] = ";".join(str(v) for v in value)
        else:
            flat[name] = value
    return flat
