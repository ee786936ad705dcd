"""Optional numba acceleration.

Set ``HARMONIC_AAA_DISABLE_JIT=1`` to run every kernel through its pure-numpy
path. The flag is read once, at import time.
"""
import os

_FLAG = os.environ.get("HARMONIC_AAA_DISABLE_JIT", "").strip().lower()
DISABLED = _FLAG not in ("", "0", "false", "no")

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

JIT_ENABLED = numba is not None and not DISABLED


def njit(*args, **kwargs):
    """``numba.njit`` when available, otherwise a no-op decorator."""
    if numba is None:
        if args and callable(args[0]):
            return args[0]
        return lambda f: f
    return numba.njit(*args, **kwargs)
