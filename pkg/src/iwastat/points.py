"""Exact rational point arithmetic on long Weierstrass models.

Points are (Fraction, Fraction) pairs or None for the identity.  Heights stay
desk-scale (multiples m <= p + 1 + 2 sqrt(p) of ingested generators), so the
coordinate growth of the naive group law is a non-issue.
"""

from __future__ import annotations

from fractions import Fraction

from .curves import CurveQ

Point = tuple[Fraction, Fraction] | None


def on_curve(curve: CurveQ, P: Point) -> bool:
    if P is None:
        return True
    x, y = P
    return curve.contains(Fraction(x), Fraction(y))


def negate(curve: CurveQ, P: Point) -> Point:
    if P is None:
        return None
    x, y = P
    return (x, -y - curve.a1 * x - curve.a3)


def add(curve: CurveQ, P: Point, Q: Point) -> Point:
    if P is None:
        return Q
    if Q is None:
        return P
    a1, a2, a3, a4, a6 = (Fraction(a) for a in curve.ainvs)
    x1, y1 = P
    x2, y2 = Q
    if x1 == x2:
        if y2 == -y1 - a1 * x1 - a3:
            return None
        lam = (3 * x1 * x1 + 2 * a2 * x1 + a4 - a1 * y1) / (2 * y1 + a1 * x1 + a3)
    else:
        lam = (y2 - y1) / (x2 - x1)
    nu = y1 - lam * x1
    x3 = lam * lam + a1 * lam - a2 - x1 - x2
    y3 = -(lam + a1) * x3 - nu - a3
    return (x3, y3)


def multiply(curve: CurveQ, n: int, P: Point) -> Point:
    if n < 0:
        return multiply(curve, -n, negate(curve, P))
    result: Point = None
    addend = P
    while n:
        if n & 1:
            result = add(curve, result, addend)
        addend = add(curve, addend, addend)
        n >>= 1
    return result


def order_of(curve: CurveQ, P: Point, bound: int = 12) -> int | None:
    """Exact order if <= bound (Mazur caps rational torsion at 12), else None."""
    Q = P
    for k in range(1, bound + 1):
        if Q is None:
            return k
        Q = add(curve, Q, P)
    return None


def twist_model(curve: CurveQ, D: int) -> CurveQ:
    """Short model of the quadratic twist by D, from (c4 D^2, c6 D^3).

    Minimal at every prime ell >= 5 with ell not dividing D when the input is;
    at ell | D (ell >= 5, good for the input) it has the minimal additive model.
    The 2- and 3-adic junk is harmless for p-adic work at p >= 5.
    """
    return CurveQ.short(-27 * curve.c4 * D * D, -54 * curve.c6 * D ** 3)
