"""Backend selection for the hot stepping kernel.

The compiled Cython/FFTW kernel is used when it imported cleanly; the
pure-numpy fallback is always available and semantically identical (the two
differ only at FFT rounding level). Set ``ZENOLAB_PURE_PYTHON=1`` to force
the fallback.
"""

from __future__ import annotations

import os

from . import _stepper_py

__all__ = ["strang_evolve", "BACKEND", "available_backends"]

_backends = {"python": _stepper_py.strang_evolve}

if os.environ.get("ZENOLAB_PURE_PYTHON", "") != "1":
    try:
        from . import _stepper  # compiled extension, optional

        _backends["compiled"] = _stepper.strang_evolve
    except ImportError:
        pass

BACKEND = "compiled" if "compiled" in _backends else "python"
strang_evolve = _backends[BACKEND]


def available_backends():
    """name -> kernel callable, for parity tests and benchmarks."""
    return dict(_backends)
