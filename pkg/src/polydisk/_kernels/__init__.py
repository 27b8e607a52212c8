"""Sampling kernels with a compiled fast path.

`sample_forest_sizes`, `sample_label_at` and `sample_bol3_sizes` are
resolved at import time: the Cython extension when it is built and
importable, the numpy implementation otherwise.  Both consume the
generator's uniform stream one draw per logical draw in the same order,
so results are bit-identical; only the generator's final state may
differ.  Callers therefore pass a fresh generator per call.

Set POLYDISK_FORCE_PY=1 to skip the extension.
"""

from __future__ import annotations

import os

from . import _py

_impl = _py
if not os.environ.get("POLYDISK_FORCE_PY"):
    try:
        from . import _speedups as _ext
    except ImportError:
        pass
    else:
        if all(
            hasattr(_ext, name)
            for name in (
                "sample_forest_sizes",
                "sample_label_at",
                "sample_bol3_sizes",
            )
        ):
            _impl = _ext

BACKEND = _impl.BACKEND
sample_forest_sizes = _impl.sample_forest_sizes
sample_label_at = _impl.sample_label_at
sample_bol3_sizes = _impl.sample_bol3_sizes

__all__ = [
    "BACKEND",
    "sample_forest_sizes",
    "sample_label_at",
    "sample_bol3_sizes",
]
