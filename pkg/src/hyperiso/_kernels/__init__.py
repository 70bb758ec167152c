"""Kernel backend selection.

The compiled extension is preferred when it imported cleanly; the pure
Python module is the fallback and the reference semantics.  Set the
environment variable HYPERISO_BACKEND to "pure" or "compiled" to force a
choice (the latter raises if the extension is unavailable).
"""

from __future__ import annotations

import os

_forced = os.environ.get("HYPERISO_BACKEND")

if _forced == "pure":
    from . import _pure as _impl

    BACKEND = "pure"
elif _forced == "compiled":
    from . import _core as _impl  # type: ignore[no-redef]

    BACKEND = "compiled"
elif _forced:
    raise ImportError(f"unknown HYPERISO_BACKEND value {_forced!r}")
else:
    try:
        from . import _core as _impl  # type: ignore[no-redef]

        BACKEND = "compiled"
    except ImportError:
        from . import _pure as _impl

        BACKEND = "pure"

F_INTEGRAND = _impl.F_INTEGRAND
XF_INTEGRAND = _impl.XF_INTEGRAND
ARC_INTEGRAND = _impl.ARC_INTEGRAND
LAMZ_INTEGRAND = _impl.LAMZ_INTEGRAND

prepare = _impl.prepare
lam_value = _impl.lam_value
h_value = _impl.h_value
psi_value = _impl.psi_value
f_value = _impl.f_value
g_value = _impl.g_value
panel = _impl.panel
adaptive = _impl.adaptive
eval_many = _impl.eval_many

__all__ = [
    "BACKEND",
    "F_INTEGRAND",
    "XF_INTEGRAND",
    "ARC_INTEGRAND",
    "LAMZ_INTEGRAND",
    "prepare",
    "lam_value",
    "h_value",
    "psi_value",
    "f_value",
    "g_value",
    "panel",
    "adaptive",
    "eval_many",
]
