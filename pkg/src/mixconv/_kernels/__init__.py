"""Convolution kernel backends.

The compiled Cython extension is preferred when importable; otherwise the
NumPy fallback is used. ``MIXCONV_BACKEND=fallback`` (or ``compiled``)
forces the choice. Both backends produce bit-identical forward outputs;
backward outputs agree to rounding error.
"""
from __future__ import annotations

import os

from . import fallback

_FORCED = os.environ.get("MIXCONV_BACKEND", "").strip().lower()

_compiled = None
if _FORCED != "fallback":
    try:
        from . import _fast as _compiled
    except ImportError:
        _compiled = None
        if _FORCED == "compiled":
            raise ImportError(
                "MIXCONV_BACKEND=compiled but the extension is not built; "
                "run `pip install -e . --no-build-isolation` or "
                "`python setup.py build_ext --inplace`"
            )

_active = _compiled if _compiled is not None else fallback

BACKEND = _active.NAME

depthwise_forward = _active.depthwise_forward
depthwise_backward = _active.depthwise_backward
conv_forward = _active.conv_forward
conv_backward = _active.conv_backward


def available_backends() -> tuple[str, ...]:
    return ("compiled", "fallback") if _compiled is not None else ("fallback",)


def get_backend(name: str):
    """Return the named backend module (for benchmarks and parity tests)."""
    if name == "fallback":
        return fallback
    if name == "compiled":
        if _compiled is None:
            raise ImportError("compiled backend not built")
        return _compiled
    raise ValueError(f"unknown backend {name!r}")
