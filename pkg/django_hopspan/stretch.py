"""
Inverse-Ackermann hierarchy, hop-stretch recurrences and the parameter
schedules of the recursive constructions.
"""
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache

from django_hopspan.conf import get_conf
from django_hopspan.exceptions import InputError, PreconditionError


class StretchFamily(str, Enum):
    STRING = "string"
    FAT = "fat"


def clog2(n: int) -> int:
    """``ceil(log2 n)``, with 1 wherever that would be 0."""
    return max(1, (int(n) - 1).bit_length())


@lru_cache(maxsize=4096)
def alpha(k: int, n: int) -> int:
    """
    Level ``k`` of the integer inverse-Ackermann hierarchy.

    ``alpha(0, n) = ceil(n / 2)``, ``alpha(1, n) = ceil(log2 n)`` and each
    further level counts how often the previous one must be applied to bring
    ``n`` down to at most 1.

    Args:
        k: Level, at least 0.
        n: Argument, at least 1.

    Returns:
        int: ``alpha_k(n)``.
    """
    if k < 0 or n < 1:
        raise InputError(f"alpha needs k >= 0 and n >= 1, got k={k}, n={n}")
    if k == 0:
        return (n + 1) // 2
    if k == 1:
        return (n - 1).bit_length()
    count = 0
    while n > 1:
        n = alpha(k - 1, n)
        count += 1
    return count


def stretch_bound(family: StretchFamily | str, k: int) -> int:
    """
    Hop stretch ``t_k`` of the level-``k`` construction.

    Strings follow ``t_1 = 3, t_k = 5 t_{k-1} + 3``; fat objects follow
    ``t_1 = 3, t_k = 3 t_{k-1} + 3``.
    """
    family = StretchFamily(family)
    if k < 1:
        raise PreconditionError(f"stretch level must be at least 1, got {k}")
    factor = 5 if family == StretchFamily.STRING else 3
    t = 3
    for _ in range(k - 1):
        t = factor * t + 3
    return t


def string_closed_form(k: int) -> Fraction:
    """``3/4 (5^k - 1)``; agrees with the string recurrence."""
    return Fraction(3, 4) * (5**k - 1)


def fat_closed_form(k: int) -> Fraction:
    """``11/9 3^k - 2/3``; disagrees with the fat recurrence from k = 2 on."""
    return Fraction(11, 9) * 3**k - Fraction(2, 3)


@dataclass(frozen=True)
class StretchSchedule:
    """
    Stretch and parameter choices for one family and level.

    Usage:
        schedule = StretchSchedule(StretchFamily.STRING, k=2)
        schedule.t, schedule.delta(1000), schedule.r(1000)
    """

    family: StretchFamily
    k: int

    @property
    def t(self) -> int:
        return stretch_bound(self.family, self.k)

    def delta(self, n: int) -> int:
        n = max(1, n)
        if self.family == StretchFamily.FAT:
            return 0
        if self.k == 1:
            return max(1, n // clog2(n) ** 2)
        if self.k == 2:
            return max(1, math.ceil(math.log2(n) ** 3)) if n > 1 else 1
        return max(1, get_conf().STRING_C0 * alpha(self.k - 1, n))

    def r(self, n: int) -> int:
        n = max(1, n)
        if self.family == StretchFamily.FAT:
            return max(2, alpha(self.k - 1, n))
        if self.k == 1:
            return n
        return max(2, self.delta(n) ** 3)

    def as_dict(self, n: int) -> dict:
        return {
            "family": self.family.value,
            "k": self.k,
            "t": self.t,
            "delta": self.delta(n),
            "r": self.r(n),
        }
