"""
Digit words in positive and negative bases.

A numeration system is a signed base k with |k| >= 2. Both signs use the digit
alphabet {0, ..., |k|-1}; negative bases reach every integer with a unique
canonical word (repeated division with a nonnegative remainder).

Words are most-significant-digit first. The canonical word of 0 is empty and
renders as "0"; leading zeros are allowed on input and stripped by to_digits.

Usage:
  from numeration.digits import NumerationSystem, to_digits, from_digits
  neg5 = NumerationSystem(-5)
  w = to_digits(-3, neg5)            # DigitWord(12)
  from_digits(w)                     # -3
  pad_to_length(w, 4).digits         # (0, 0, 1, 2)
"""
from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field
from typing import Iterable, Tuple

logger = logging.getLogger(__name__)

INT64_MIN = -(2**63)
INT64_MAX = 2**63 - 1
MAX_RADIX = 36

_LABEL_RE = re.compile(r"^\??msd_(neg_)?(\d+)$")


class NumerationError(ValueError):
    """Invalid base, digit, or value for a numeration system."""


def checked(value: int) -> int:
    """Return value unchanged, raising OverflowError outside the signed 64-bit range."""
    if value < INT64_MIN or value > INT64_MAX:
        raise OverflowError(f"value {value} does not fit in a signed 64-bit integer")
    return value


# -----------------------------
# Systems
# -----------------------------

@dataclass(frozen=True, order=True)
class NumerationSystem:
    base: int

    def __post_init__(self) -> None:
        if not isinstance(self.base, int) or abs(self.base) < 2:
            raise NumerationError(f"base must be an integer with |base| >= 2, got {self.base!r}")
        if abs(self.base) > MAX_RADIX:
            raise NumerationError(f"|base| above {MAX_RADIX} is not supported, got {self.base}")

    @property
    def radix(self) -> int:
        """Size of the digit alphabet."""
        return abs(self.base)

    @property
    def is_negative(self) -> bool:
        return self.base < 0

    @property
    def label(self) -> str:
        """Query-language spelling: msd_4, msd_neg_5."""
        return f"msd_neg_{self.radix}" if self.is_negative else f"msd_{self.radix}"

    @classmethod
    def from_label(cls, label: str) -> "NumerationSystem":
        m = _LABEL_RE.match(label.strip())
        if not m:
            raise NumerationError(f"not a numeration system label: {label!r}")
        radix = int(m.group(2))
        return cls(-radix if m.group(1) else radix)

    def length_range(self, length: int) -> Tuple[int, int]:
        """Smallest and largest value of a word with exactly `length` digits (leading zeros allowed)."""
        if length < 0:
            raise NumerationError(f"length must be nonnegative, got {length}")
        r = self.radix
        if not self.is_negative:
            return 0, r**length - 1
        lo = sum((r - 1) * self.base**i for i in range(1, length, 2))
        hi = sum((r - 1) * self.base**i for i in range(0, length, 2))
        return lo, hi

    def represents(self, value: int) -> bool:
        return self.is_negative or value >= 0

    def __str__(self) -> str:
        return self.label


# -----------------------------
# Words
# -----------------------------

def _render_digit(d: int) -> str:
    return str(d) if d < 10 else f"[{d}]"


@dataclass(frozen=True)
class DigitWord:
    system: NumerationSystem
    digits: Tuple[int, ...] = field(default=())

    def __post_init__(self) -> None:
        digits = tuple(int(d) for d in self.digits)
        r = self.system.radix
        for d in digits:
            if d < 0 or d >= r:
                raise NumerationError(f"digit {d} outside alphabet 0..{r - 1} of {self.system}")
        object.__setattr__(self, "digits", digits)

    def __len__(self) -> int:
        return len(self.digits)

    @property
    def is_canonical(self) -> bool:
        return not self.digits or self.digits[0] != 0

    def canonical(self) -> "DigitWord":
        i = 0
        while i < len(self.digits) and self.digits[i] == 0:
            i += 1
        return DigitWord(self.system, self.digits[i:])

    def __str__(self) -> str:
        if not self.digits:
            return "0"
        return "".join(_render_digit(d) for d in self.digits)


# -----------------------------
# Conversions
# -----------------------------

def digits_of(n: int, base: int) -> list[int]:
    """Canonical digits of n (msd first) without constructing a DigitWord."""
    if base > 0 and n < 0:
        raise NumerationError(f"negative value {n} has no representation in base {base}")
    r = abs(base)
    out: list[int] = []
    while n != 0:
        d = n % r
        out.append(d)
        n = (n - d) // base
    out.reverse()
    return out


def to_digits(n: int, system: NumerationSystem) -> DigitWord:
    """Canonical word of n; negative n requires a negative base."""
    checked(n)
    return DigitWord(system, tuple(digits_of(n, system.base)))


def value_of(digits: Iterable[int], base: int) -> int:
    acc = 0
    for d in digits:
        acc = acc * base + d
    return acc


def from_digits(word: DigitWord) -> int:
    """Value of a word; leading zeros are allowed."""
    return checked(value_of(word.digits, word.system.base))


def pad_to_length(word: DigitWord, length: int) -> DigitWord:
    """Prepend zeros up to `length` digits; the value is unchanged."""
    if length < len(word):
        raise NumerationError(f"cannot pad a word of length {len(word)} to {length}")
    return DigitWord(word.system, (0,) * (length - len(word)) + word.digits)
