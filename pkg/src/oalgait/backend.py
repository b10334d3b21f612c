"""Numba/numpy backend selection for the hot kernels.

The loop kernels in :mod:`oalgait.kernels` are written in numba-compatible
style and compiled with ``@njit`` when numba is available.  Setting the
environment variable ``OALGAIT_BACKEND=numpy`` forces the pure-numpy path
(the same loop source runs uncompiled, and grid/DP evaluations switch to
the vectorized implementations in :mod:`oalgait.vectorized`).

    OALGAIT_BACKEND=auto    use numba when importable (default)
    OALGAIT_BACKEND=numba   require numba, raise if missing
    OALGAIT_BACKEND=numpy   never use numba
"""

import os


def _resolve() -> bool:
    choice = os.environ.get("OALGAIT_BACKEND", "auto").strip().lower()
    if choice not in ("auto", "numba", "numpy"):
        raise ValueError(f"OALGAIT_BACKEND must be auto|numba|numpy, got {choice!r}")
    if choice == "numpy":
        return False
    try:
        import numba  # noqa: F401
    except ImportError:
        if choice == "numba":
            raise
        return False
    return True


USE_NUMBA: bool = _resolve()

if USE_NUMBA:
    from numba import njit

    def jit(func):
        return njit(cache=True)(func)

else:

    def jit(func):
        return func


def backend_name() -> str:
    return "numba" if USE_NUMBA else "numpy"
