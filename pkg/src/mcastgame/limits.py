"""Enumeration caps.

Every exhaustive routine refuses instances larger than its cap.  Defaults can
be overridden per process with environment variables:

=====================  ===========================  =======
variable               routine                      default
=====================  ===========================  =======
MCASTGAME_CAP_CORE     is_in_core subset scan       24
MCASTGAME_CAP_LP       core_nonempty (LP route)     16
MCASTGAME_CAP_CONVEX   is_convex                    14
MCASTGAME_CAP_DC       is_dc_stable                 20
MCASTGAME_CAP_BLOCK    is_dc_stable, largest block  12
MCASTGAME_CAP_BELL     best_partition_bruteforce    12
=====================  ===========================  =======
"""

from __future__ import annotations

import os

from .errors import SizeLimitError

DEFAULT_CAPS = {
    "core": 24,
    "lp": 16,
    "convex": 14,
    "dc": 20,
    "block": 12,
    "bell": 12,
}


def cap(name: str) -> int:
    raw = os.environ.get(f"MCASTGAME_CAP_{name.upper()}")
    if raw is None:
        return DEFAULT_CAPS[name]
    value = int(raw)
    if value < 1:
        raise ValueError(f"MCASTGAME_CAP_{name.upper()} must be a positive integer")
    return value


def check(name: str, n: int, override: int | None = None, what: str | None = None) -> None:
    limit = cap(name) if override is None else override
    if n > limit:
        raise SizeLimitError(what or name, n, limit)
