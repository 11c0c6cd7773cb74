"""
Thue-Morse style parities and their rarefied sums.

  t(n)  parity of the number of 1s in the binary representation of n
  r(n)  parity of the number of 0s in the binary representation of n, r(0) = 0

  f_{b,j}(n) = sum_{0 <= i < n} (-1)^t(b*i + j)
  g_{b,j}(n) = sum_{0 <= i < n} (-1)^r(b*i + j)

rarefied_f / rarefied_g split the summation index by parity, which halves n
at every level, so a single value costs O(b log n) memoised calls. The naive
variants sum term by term and serve as cross-check oracles. rarefied_table
returns a whole prefix as a numpy vector for sweeps.
"""
from __future__ import annotations

import logging
from enum import Enum
from functools import lru_cache

import numpy as np

from numeration.digits import NumerationError, checked

logger = logging.getLogger(__name__)


class ParityKind(str, Enum):
    ONES = "t"
    ZEROS = "r"


def thue_morse_t(n: int) -> int:
    if n < 0:
        raise NumerationError(f"t is defined for n >= 0, got {n}")
    return bin(n).count("1") & 1


def zeros_parity_r(n: int) -> int:
    if n < 0:
        raise NumerationError(f"r is defined for n >= 0, got {n}")
    if n == 0:
        return 0
    return (n.bit_length() - bin(n).count("1")) & 1


def _parity(kind: ParityKind, n: int) -> int:
    return thue_morse_t(n) if kind is ParityKind.ONES else zeros_parity_r(n)


def _validate(b: int, j: int, n: int) -> None:
    if b < 1:
        raise NumerationError(f"b must be >= 1, got {b}")
    if not 0 <= j < b:
        raise NumerationError(f"j must lie in [0, {b}), got {j}")
    if n < 0:
        raise NumerationError(f"n must be >= 0, got {n}")


@lru_cache(maxsize=1 << 16)
def _signed_sum(b: int, c: int, n: int, kind: ParityKind) -> int:
    # sum_{0 <= i < n} (-1)^parity(b*i + c)
    if n <= 0:
        return 0
    if n == 1:
        return 1 - 2 * _parity(kind, c)
    total = 0
    for e in (0, 1):
        count = (n - e + 1) // 2
        if count == 0:
            continue
        q, r0 = divmod(b * e + c, 2)
        inner = _signed_sum(b, q, count, kind)
        if kind is ParityKind.ONES:
            total += -inner if r0 else inner
        elif r0 == 0:
            # 2m has one more zero than m, except 2*0 = 0
            total += -inner + (2 if q == 0 else 0)
        else:
            total += inner
    return total


def rarefied_f(b: int, j: int, n: int) -> int:
    _validate(b, j, n)
    return checked(_signed_sum(b, j, n, ParityKind.ONES))


def rarefied_g(b: int, j: int, n: int) -> int:
    _validate(b, j, n)
    return checked(_signed_sum(b, j, n, ParityKind.ZEROS))


def rarefied_f_naive(b: int, j: int, n: int) -> int:
    _validate(b, j, n)
    return sum(1 - 2 * thue_morse_t(b * i + j) for i in range(n))


def rarefied_g_naive(b: int, j: int, n: int) -> int:
    _validate(b, j, n)
    return sum(1 - 2 * zeros_parity_r(b * i + j) for i in range(n))


# -----------------------------
# Vectorised prefix tables
# -----------------------------

def popcount_parity(values: np.ndarray) -> np.ndarray:
    x = values.astype(np.uint64, copy=True)
    for shift in (32, 16, 8, 4, 2, 1):
        x ^= x >> np.uint64(shift)
    return (x & np.uint64(1)).astype(np.int64)


def bit_length(values: np.ndarray) -> np.ndarray:
    # exact below 2**53
    _, exponent = np.frexp(values.astype(np.float64))
    return exponent.astype(np.int64)


def parity_table(values: np.ndarray, kind: ParityKind | str = ParityKind.ONES) -> np.ndarray:
    kind = ParityKind(kind)
    ones = popcount_parity(values)
    if kind is ParityKind.ONES:
        return ones
    return (bit_length(values) & 1) ^ ones


def rarefied_table(b: int, j: int, count: int, kind: ParityKind | str = ParityKind.ONES) -> np.ndarray:
    """h(0), ..., h(count-1) as an int64 vector, h = f_{b,j} (kind t) or g_{b,j} (kind r)."""
    _validate(b, j, max(count, 0))
    if count <= 0:
        return np.zeros(0, dtype=np.int64)
    idx = b * np.arange(count - 1, dtype=np.int64) + j
    signs = 1 - 2 * parity_table(idx, kind)
    out = np.zeros(count, dtype=np.int64)
    np.cumsum(signs, out=out[1:])
    return out
