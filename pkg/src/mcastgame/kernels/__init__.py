"""Hot bitmask kernels with a compiled backend and a pure fallback.

The compiled extension (``_ckernels``, Cython) is used when it was built;
otherwise the numpy/pure-Python ``_pykernels`` module is used.  Set
``MCASTGAME_KERNELS=python`` to force the fallback, or ``=cython`` to fail
loudly when the extension is missing.
"""

from __future__ import annotations

import os
from types import ModuleType

from . import _pykernels

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None

_API = (
    "value_table",
    "subset_sums",
    "first_convexity_violation",
    "first_split_violation",
    "first_incompatible_violation",
    "best_partition",
)


def available_backends() -> list[str]:
    return ["python"] + (["cython"] if _ckernels is not None else [])


def get_backend(name: str) -> ModuleType:
    if name == "python":
        return _pykernels
    if name == "cython":
        if _ckernels is None:
            raise ImportError("compiled kernels are not built; run `pip install -e . --no-build-isolation`")
        return _ckernels
    raise ValueError(f"unknown kernel backend {name!r}")


def _select() -> tuple[str, ModuleType]:
    want = os.environ.get("MCASTGAME_KERNELS", "auto").lower()
    if want == "auto":
        want = "cython" if _ckernels is not None else "python"
    return want, get_backend(want)


BACKEND, _impl = _select()

value_table = _impl.value_table
subset_sums = _impl.subset_sums
first_convexity_violation = _impl.first_convexity_violation
first_split_violation = _impl.first_split_violation
first_incompatible_violation = _impl.first_incompatible_violation
best_partition = _impl.best_partition

__all__ = ["BACKEND", "available_backends", "get_backend", *_API]
