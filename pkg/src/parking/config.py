"""Resource caps.  ``PARKING_CAP`` in the environment overrides the default."""

import os

DEFAULT_CAP = 10**7


def default_cap():
    value = os.environ.get("PARKING_CAP")
    if value is None:
        return DEFAULT_CAP
    return int(value)


def resolve_cap(cap):
    return default_cap() if cap is None else int(cap)
