"""Backend selection for the hot explicit-stepping kernel.

The compiled extension (ac_harnack._kernels, Cython) is used when it
imports; otherwise the numpy reference (ac_harnack._kernels_py) takes
over.  Set AC_HARNACK_PURE_PYTHON=1 to force the reference backend, e.g.
for the backend-comparison benchmark.  Both backends implement the same
explicit_run() contract and agree bit-for-bit.
"""

from __future__ import annotations

import os

from . import _kernels_py

if os.environ.get("AC_HARNACK_PURE_PYTHON", "") not in ("", "0"):
    _impl = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl  # type: ignore[no-redef]

        BACKEND = "compiled"
    except ImportError:
        _impl = _kernels_py
        BACKEND = "python"

explicit_run = _impl.explicit_run

__all__ = ["explicit_run", "BACKEND", "get_backend"]


def get_backend(name: str):
    """Return a specific backend module ("compiled" or "python")."""
    if name == "python":
        return _kernels_py
    if name == "compiled":
        from . import _kernels  # raises ImportError if unavailable

        return _kernels
    raise ValueError(f"unknown backend {name!r}")
