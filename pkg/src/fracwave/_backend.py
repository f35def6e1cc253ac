"""Select the quadrature core at import time.

The compiled ``_ckernel`` extension is preferred; ``FRACWAVE_PURE=1`` (or a
missing extension) selects the numpy implementation in ``_pykernel``.
"""
from __future__ import annotations

import os

from . import _pykernel

try:
    from . import _ckernel
except ImportError:  # extension not built
    _ckernel = None


def get_backend(name=None):
    """Return the backend module named ``"compiled"`` or ``"python"``.

    ``None`` applies the default selection rule.
    """
    if name is None:
        if os.environ.get("FRACWAVE_PURE", "").strip() not in ("", "0"):
            return _pykernel
        return _ckernel if _ckernel is not None else _pykernel
    if name == "python":
        return _pykernel
    if name == "compiled":
        if _ckernel is None:
            raise ImportError("compiled kernel extension is not built")
        return _ckernel
    raise ValueError(f"unknown backend {name!r}")


backend = get_backend()
BACKEND_NAME = "compiled" if getattr(backend, "COMPILED", False) else "python"
