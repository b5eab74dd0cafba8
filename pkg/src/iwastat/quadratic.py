"""Imaginary quadratic fields Q(sqrt(-d)): Kronecker symbols, splitting, class numbers.

Class numbers are exact counts of reduced primitive positive-definite binary
quadratic forms; no analytic formula, no floating point.
"""

from __future__ import annotations

import enum
import math
import threading
from dataclasses import dataclass, field

from .errors import BoundExceeded

_CLASS_NUMBER_BOUND = 10 ** 8  # |D_K| above this is out of desk scale


class SplittingType(enum.Enum):
    SPLIT = "split"
    INERT = "inert"
    RAMIFIED = "ramified"


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a/n), standard conventions, n != 0."""
    if n == 0:
        raise ValueError("Kronecker symbol undefined for n = 0")
    if n < 0:
        sign = -1 if a < 0 else 1
        return sign * kronecker(a, -n)
    # peel the factor (a/2)^v2(n)
    result = 1
    v2 = 0
    while n % 2 == 0:
        n //= 2
        v2 += 1
    if v2:
        if a % 2 == 0:
            return 0
        if v2 % 2 == 1 and a % 8 in (3, 5):
            result = -result
    # now n is odd; Jacobi symbol by reciprocity
    a %= n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def is_squarefree(n: int) -> bool:
    n = abs(n)
    if n == 0:
        return False
    q = 2
    while q * q <= n:
        if n % (q * q) == 0:
            return False
        while n % q == 0:
            n //= q
        q += 1
    return True


@dataclass
class QuadField:
    """K = Q(sqrt(-d)) for squarefree d > 0; discriminant and (lazy) class number."""

    d: int
    _h: int | None = field(default=None, repr=False, compare=False)
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False, compare=False)

    def __post_init__(self):
        if self.d <= 0:
            raise ValueError("d must be positive (imaginary quadratic field)")
        if not is_squarefree(self.d):
            raise ValueError(f"d = {self.d} is not squarefree")

    @property
    def D(self) -> int:
        """Fundamental discriminant: -d if d = 3 (mod 4), else -4d."""
        return -self.d if self.d % 4 == 3 else -4 * self.d

    @property
    def h(self) -> int:
        # memoized; the lock keeps concurrent readers to a single computation
        if self._h is None:
            with self._lock:
                if self._h is None:
                    self._h = class_number_of_discriminant(self.D)
        return self._h


def splitting(ell: int, K: QuadField) -> SplittingType:
    D = K.D
    if D % ell == 0:
        return SplittingType.RAMIFIED
    return SplittingType.SPLIT if kronecker(D, ell) == 1 else SplittingType.INERT


def class_number_of_discriminant(D: int) -> int:
    """h(D) by enumerating reduced forms (a, b, c): b^2 - 4ac = D, |b| <= a <= c,
    b >= 0 when |b| = a or a = c, gcd(a, b, c) = 1."""
    if D >= 0 or D % 4 not in (0, 1):
        raise ValueError(f"{D} is not an imaginary quadratic discriminant")
    if -D > _CLASS_NUMBER_BOUND:
        raise BoundExceeded(f"|D| = {-D} beyond desk-scale bound")
    h = 0
    b = D % 2
    bmax = math.isqrt(-D // 3)
    while b <= bmax:
        n = (b * b - D) // 4
        a = max(b, 1)
        while a * a <= n:
            if n % a == 0:
                c = n // a
                if math.gcd(math.gcd(a, b), c) == 1:
                    # (a, b, c) and (a, -b, c) are distinct classes unless
                    # b = 0, a = b, or a = c
                    if b == 0 or a == b or a == c:
                        h += 1
                    else:
                        h += 2
            a += 1
        b += 2
    return h


def class_number(K: QuadField) -> int:
    return K.h


def unit_group_is_pm1(K: QuadField) -> bool:
    """False exactly for Q(i) and Q(sqrt(-3))."""
    return K.D not in (-3, -4)


def fundamental_discriminants(bound: int):
    """All fundamental D with -bound < D < 0, descending from -3."""
    for n in range(3, bound):
        D = -n
        if D % 4 == 1 and is_squarefree(n):
            yield D
        elif D % 4 == 0:
            m = n // 4
            if m % 4 in (1, 2) and is_squarefree(m):
                yield D
