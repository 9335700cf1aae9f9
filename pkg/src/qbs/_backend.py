"""Kernel backend selection.

The compiled ``_core`` extension is used when it imports; otherwise the
pure-Python ``_fallback`` module. Set ``QBS_PURE_PYTHON=1`` to force the
fallback.
"""
import os

from . import _fallback

core = None
if os.environ.get("QBS_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _core as core
    except ImportError:
        core = None

kernels = core if core is not None else _fallback
BACKEND = "cython" if core is not None else "python"


def get_kernels(name: str = "auto"):
    if name == "auto":
        return kernels
    if name == "python":
        return _fallback
    if name == "cython":
        if core is None:
            raise RuntimeError("compiled extension qbs._core is not available")
        return core
    raise ValueError(f"unknown backend {name!r}")
