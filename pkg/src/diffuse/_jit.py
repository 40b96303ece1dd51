"""JIT switch for the hot kernels.

Set ``DIFFUSE_DISABLE_JIT=1`` to run every kernel as plain Python over
numpy arrays (numba is then never imported). The two paths execute the same
source, so results are bit-for-bit identical.
"""

import os

JIT_ENABLED = os.environ.get("DIFFUSE_DISABLE_JIT", "0").lower() not in ("1", "true", "yes")

if JIT_ENABLED:
    try:
        import numba
        from numba import types
        from numba.typed import Dict
    except ImportError:  # pragma: no cover
        JIT_ENABLED = False

if JIT_ENABLED:

    def njit(fn):
        return numba.njit(cache=True, nogil=True)(fn)

    @numba.njit(cache=True)
    def float_map():
        return Dict.empty(key_type=types.int64, value_type=types.float64)

    @numba.njit(cache=True)
    def int_map():
        return Dict.empty(key_type=types.int64, value_type=types.int64)

else:

    def njit(fn):
        return fn

    def float_map():
        return {}

    def int_map():
        return {}


def backend() -> str:
    return "numba" if JIT_ENABLED else "python"
