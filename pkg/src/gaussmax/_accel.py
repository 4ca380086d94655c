"""Optional numba acceleration.

Set ``GAUSSMAX_DISABLE_NUMBA=1`` to force the pure-numpy code paths. When
numba is missing the numpy paths are used automatically.
"""
import os

_flag = os.environ.get("GAUSSMAX_DISABLE_NUMBA", "").strip().lower()

try:
    import numba as _nb
    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    _nb = None
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and _flag not in ("1", "true", "yes", "on")


def njit(*args, **kwargs):
    """``numba.njit`` with project defaults, or an identity decorator."""
    if not HAVE_NUMBA:
        if args and callable(args[0]):
            return args[0]
        return lambda f: f
    kwargs.setdefault("cache", True)
    kwargs.setdefault("nogil", True)
    return _nb.njit(*args, **kwargs)
