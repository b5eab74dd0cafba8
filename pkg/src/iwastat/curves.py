"""Integral Weierstrass models over Q and height-ordered enumeration.

Curves are stored by their long Weierstrass coefficients (a1, a2, a3, a4, a6).
Short-form curves y^2 = x^3 + A*x + B are the ones produced by the height
enumeration; they carry A = a4, B = a6 and a1 = a2 = a3 = 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator


@dataclass(frozen=True)
class CurveQ:
    """Integral Weierstrass model y^2 + a1*x*y + a3*y = x^3 + a2*x^2 + a4*x + a6."""

    a1: int
    a2: int
    a3: int
    a4: int
    a6: int

    @classmethod
    def short(cls, A: int, B: int) -> "CurveQ":
        return cls(0, 0, 0, A, B)

    @classmethod
    def from_ainvs(cls, ainvs) -> "CurveQ":
        a1, a2, a3, a4, a6 = (int(a) for a in ainvs)
        return cls(a1, a2, a3, a4, a6)

    @property
    def ainvs(self) -> tuple[int, int, int, int, int]:
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    @property
    def is_short(self) -> bool:
        return self.a1 == 0 and self.a2 == 0 and self.a3 == 0

    # standard b- and c-invariants
    @property
    def b2(self) -> int:
        return self.a1 * self.a1 + 4 * self.a2

    @property
    def b4(self) -> int:
        return 2 * self.a4 + self.a1 * self.a3

    @property
    def b6(self) -> int:
        return self.a3 * self.a3 + 4 * self.a6

    @property
    def b8(self) -> int:
        return (
            self.a1 * self.a1 * self.a6
            + 4 * self.a2 * self.a6
            - self.a1 * self.a3 * self.a4
            + self.a2 * self.a3 * self.a3
            - self.a4 * self.a4
        )

    @property
    def c4(self) -> int:
        return self.b2 * self.b2 - 24 * self.b4

    @property
    def c6(self) -> int:
        return -self.b2 ** 3 + 36 * self.b2 * self.b4 - 216 * self.b6

    def rhs(self, x: Fraction | int):
        """x^3 + a2*x^2 + a4*x + a6."""
        return ((x + self.a2) * x + self.a4) * x + self.a6

    def contains(self, x: Fraction, y: Fraction) -> bool:
        """Exact check that (x, y) satisfies the Weierstrass equation."""
        return y * y + self.a1 * x * y + self.a3 * y == self.rhs(x)

    def __repr__(self) -> str:
        return f"CurveQ{self.ainvs}"


def discriminant(curve: CurveQ) -> int:
    """Discriminant of the given model; 0 signals a singular model."""
    b2, b4, b6, b8 = curve.b2, curve.b4, curve.b6, curve.b8
    return -b2 * b2 * b8 - 8 * b4 ** 3 - 27 * b6 * b6 + 9 * b2 * b4 * b6


def j_invariant(curve: CurveQ) -> Fraction:
    disc = discriminant(curve)
    if disc == 0:
        raise ZeroDivisionError("singular model has no j-invariant")
    return Fraction(curve.c4 ** 3, disc)


def height(A: int, B: int) -> int:
    """Naive height max(|A|^3, B^2) of the short model y^2 = x^3 + A*x + B."""
    return max(abs(A) ** 3, B * B)


@dataclass(frozen=True)
class HeightWindow:
    x: int

    def __post_init__(self):
        if self.x < 1:
            raise ValueError("height bound must be >= 1")


def _twelfth_power_free(A: int, B: int) -> bool:
    # gcd(A^3, B^2) divisible by q^12 <=> q^4 | A and q^6 | B
    if A == 0:
        # gcd(0, B^2) = B^2: need B^2 twelfth-power free, i.e. q^6 | B for no q
        limit = round(abs(B) ** (1 / 6)) + 1
    elif B == 0:
        limit = round(abs(A) ** (1 / 4)) + 1
    else:
        limit = round(min(abs(A) ** (1 / 4), abs(B) ** (1 / 6))) + 1
    q = 2
    while q <= limit:
        if A % q ** 4 == 0 and B % q ** 6 == 0:
            return False
        q += 1
    return True


def enumerate_curves(window: HeightWindow) -> Iterator[CurveQ]:
    """Short-form models with height <= x, nonsingular, 12th-power-free gcd(A^3, B^2).

    Deterministic lexicographic order in (A, B). Singular pairs are skipped
    silently: the family counts elliptic curves only.
    """
    x = window.x
    amax = 1
    while (amax + 1) ** 3 <= x:
        amax += 1
    if amax ** 3 > x:
        amax = 0
    bmax = 1
    while (bmax + 1) ** 2 <= x:
        bmax += 1
    if bmax ** 2 > x:
        bmax = 0
    for A in range(-amax, amax + 1):
        for B in range(-bmax, bmax + 1):
            if 4 * A ** 3 + 27 * B * B == 0:
                continue
            if not _twelfth_power_free(A, B):
                continue
            yield CurveQ.short(A, B)


def count_curves(x: int) -> int:
    if x < 1:
        return 0
    return sum(1 for _ in enumerate_curves(HeightWindow(x)))
