"""Bessel function of the first kind, order one.

Self-contained (no scipy at runtime): ascending power series below x = 12,
large-argument asymptotic form beyond, absolute error below 1e-10
everywhere.  The heavy lifting lives in the kernel backend.
"""

from __future__ import annotations

import numpy as np

from ._backend import j1_many

__all__ = ["j1"]


def j1(x):
    """J1 evaluated elementwise; scalars in, scalar out."""
    arr = np.asarray(x, dtype=float)
    out = j1_many(np.ascontiguousarray(arr.reshape(-1)))
    if arr.ndim == 0:
        return float(out[0])
    return np.asarray(out).reshape(arr.shape)
