"""Kernel backend selection.

The compiled extension is used when it imports; otherwise the NumPy
fallback. ``CTINFO_PURE_PYTHON=1`` forces the fallback.
"""

from __future__ import annotations

import os
from types import ModuleType

from . import _pykernels

try:
    from . import _ckernels  # type: ignore[attr-defined]
except ImportError:  # extension not built
    _ckernels = None

__all__ = ["backend", "set_backend", "available_backends"]

_BACKENDS: dict[str, ModuleType] = {"python": _pykernels}
if _ckernels is not None:
    _BACKENDS["cython"] = _ckernels


def _default() -> ModuleType:
    if os.environ.get("CTINFO_PURE_PYTHON", "") not in ("", "0") or _ckernels is None:
        return _pykernels
    return _ckernels


_active = _default()


def backend() -> ModuleType:
    """The active kernel module."""
    return _active


def set_backend(name: str) -> ModuleType:
    """Switch to ``"python"`` or ``"cython"``; returns the previous module."""
    global _active
    if name not in _BACKENDS:
        raise ValueError(f"kernel backend {name!r} unavailable; have {sorted(_BACKENDS)}")
    prev, _active = _active, _BACKENDS[name]
    return prev


def available_backends() -> list[str]:
    return sorted(_BACKENDS)
