"""Kernel backend selection.

Prefers the compiled extension; falls back to the pure NumPy twin when the
extension is absent (source checkout without a compiler) or when the
SHAPEFT_NO_EXT environment variable is set.  Everything downstream imports
`edge_sum_many` / `j1_many` from here and stays backend-agnostic.
"""

from __future__ import annotations

import os

if os.environ.get("SHAPEFT_NO_EXT"):
    from . import _kernels_py as _impl

    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]

        BACKEND = "compiled"
    except ImportError:
        from . import _kernels_py as _impl

        BACKEND = "python"

edge_sum_many = _impl.edge_sum_many
j1_many = _impl.j1_many
