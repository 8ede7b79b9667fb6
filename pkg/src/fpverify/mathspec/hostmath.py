"""Host C math library bound through ctypes.

Python's ``math`` module raises on domain errors and has no single-precision
variants, so the oracle calls libm directly: ``sin`` for Float64 and ``sinf``
for Float32.
"""
from __future__ import annotations

import ctypes
import ctypes.util
from functools import lru_cache
from typing import Callable

from ..floats import F32, F64, FloatFormat

_LIB = ctypes.CDLL(ctypes.util.find_library("m") or "libm.so.6")


@lru_cache(maxsize=None)
def host_function(name: str, fmt: FloatFormat = F64, arity: int = 1) -> Callable[..., float]:
    cname = name + ("f" if fmt is F32 else "")
    fn = getattr(_LIB, cname)
    ctype = ctypes.c_float if fmt is F32 else ctypes.c_double
    fn.restype = ctype
    fn.argtypes = [ctype] * arity
    return fn


def call(name: str, fmt: FloatFormat, *args: float) -> float:
    return host_function(name, fmt, len(args))(*args)
