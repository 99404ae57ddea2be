"""Backend selection for the hot kernels.

``ADIABATIC_BACKEND`` picks ``numba`` (default when importable) or ``numpy``.
``ADIABATIC_THREADS`` caps the worker pool used by :func:`parallel_map`.
"""
import os
from concurrent.futures import ThreadPoolExecutor

try:
    import numba
    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    numba = None
    HAVE_NUMBA = False

_VALID = ("numba", "numpy")


def _backend_from_env():
    name = os.environ.get("ADIABATIC_BACKEND", "").strip().lower()
    if not name:
        return "numba" if HAVE_NUMBA else "numpy"
    if name not in _VALID:
        raise ValueError(f"ADIABATIC_BACKEND must be one of {_VALID}, got {name!r}")
    if name == "numba" and not HAVE_NUMBA:
        raise ValueError("ADIABATIC_BACKEND=numba but numba is not installed")
    return name


BACKEND = _backend_from_env()


def njit(*args, **kwargs):
    """``numba.njit`` when available, identity decorator otherwise."""
    if HAVE_NUMBA:
        return numba.njit(*args, **kwargs)
    if len(args) == 1 and callable(args[0]) and not kwargs:
        return args[0]
    return lambda f: f


def thread_cap():
    raw = os.environ.get("ADIABATIC_THREADS")
    if raw is None or raw == "":
        return 1
    try:
        n = int(raw)
    except ValueError:
        raise ValueError(f"ADIABATIC_THREADS must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise ValueError(f"ADIABATIC_THREADS must be a positive integer, got {raw!r}")
    return n


def parallel_map(fn, items):
    """Ordered map; results are assembled in input order regardless of worker count."""
    items = list(items)
    workers = min(thread_cap(), max(len(items), 1))
    if workers == 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
