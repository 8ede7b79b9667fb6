"""FastTwoSum error-free transformation."""
from __future__ import annotations

import math


def fast_two_sum(a: float, b: float, check: bool = __debug__) -> tuple[float, float]:
    """Return ``(s, t)`` with ``s = fl(a + b)`` and ``a + b == s + t`` exactly.

    Requires ``|a| >= |b|`` and both finite; the identity also needs
    ``a + b`` not to overflow.
    """
    if check and not (math.isfinite(a) and math.isfinite(b) and abs(a) >= abs(b)):
        raise ValueError(f"fast_two_sum requires finite |a| >= |b|, got a={a!r}, b={b!r}")
    s = a + b
    t = b - (s - a)
    return s, t
