"""Hot kernels: compiled Cython core with a numpy fallback.

The compiled extension is used when it imports and ``POLARACT_PURE_PYTHON``
is unset (or ``0``).  Both backends expose ``polar_transform`` and
``sc_decode_batch`` with identical semantics.
"""

import os

from . import _fallback

try:
    from . import _core
except ImportError:  # extension not built
    _core = None

_force_python = os.environ.get("POLARACT_PURE_PYTHON", "0") not in ("", "0")

if _core is not None and not _force_python:
    BACKEND = "cython"
    _impl = _core
else:
    BACKEND = "python"
    _impl = _fallback

polar_transform = _impl.polar_transform
sc_decode_batch = _impl.sc_decode_batch


def available_backends():
    names = ["python"]
    if _core is not None:
        names.append("cython")
    return names


def get_backend(name):
    """Module implementing the named backend (``"python"`` or ``"cython"``)."""
    if name == "python":
        return _fallback
    if name == "cython":
        if _core is None:
            raise ImportError("the compiled polaract._kernels._core extension is not built")
        return _core
    raise ValueError(f"unknown backend {name!r}")
