"""Finite-field point counts, a_p, and anomalous-prime classification.

Point counting is an exhaustive x-loop with a precomputed quadratic-residue
table: the prime ranges in play (scans up to a few hundred, family scans
p < 1000) never justify anything faster.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .curves import CurveQ, discriminant
from .errors import BadReduction, SmallPrime
from .quadratic import QuadField, SplittingType, splitting


@dataclass(frozen=True)
class TraceRecord:
    p: int
    a_p: int
    n_p: int
    ordinary: bool

    def __post_init__(self):
        if self.n_p != self.p + 1 - self.a_p:
            raise ValueError("n_p must equal p + 1 - a_p")
        if self.a_p * self.a_p > 4 * self.p:
            raise ValueError(f"Hasse bound violated: a_{self.p} = {self.a_p}")


def residue_table(p: int) -> bytearray:
    """table[t] = 1 iff t is a nonzero square mod p (table[0] = 1 as well)."""
    tbl = bytearray(p)
    for i in range(p):
        tbl[i * i % p] = 1
    return tbl


def count_points_fp(curve: CurveQ, p: int) -> TraceRecord:
    """Exhaustive count of the reduction mod p; requires good reduction, p >= 5."""
    if p < 5:
        raise SmallPrime(f"count_points_fp requires p >= 5, got {p}")
    if discriminant(curve) % p == 0:
        raise BadReduction(f"p = {p} divides the discriminant")
    # complete the square: (2y + a1*x + a3)^2 = 4x^3 + b2*x^2 + 2*b4*x + b6
    b2, b4, b6 = curve.b2 % p, (2 * curve.b4) % p, curve.b6 % p
    sq = residue_table(p)
    total = p + 1  # point at infinity plus one solution per x on average
    acc = 0
    g = 0
    for x in range(p):
        g = (((4 * x + b2) * x + b4) * x + b6) % p
        if g == 0:
            continue
        acc += 1 if sq[g] else -1
    n_p = total + acc
    a_p = p + 1 - n_p
    return TraceRecord(p=p, a_p=a_p, n_p=n_p, ordinary=a_p % p != 0)


def count_points_small(curve: CurveQ, p: int) -> int:
    """#E(F_p) for p in {2, 3} by direct solution of the y-quadratic."""
    n = 1
    for x in range(p):
        for y in range(p):
            if (y * y + curve.a1 * x * y + curve.a3 * y - curve.rhs(x)) % p == 0:
                n += 1
    return n


def count_points_fp2(tr: TraceRecord) -> int:
    """#E(F_{p^2}) = (p + 1 - a_p)(p + 1 + a_p), from the Weil numbers."""
    return (tr.p + 1 - tr.a_p) * (tr.p + 1 + tr.a_p)


def is_Q_anomalous(tr: TraceRecord) -> bool:
    """p | #E(F_p); for p >= 7 the Hasse bound makes this a_p = 1 exactly."""
    if tr.p < 7:
        raise SmallPrime("Hasse shortcut needs p >= 7; use n_p % p directly below")
    return tr.a_p == 1


def is_K_anomalous(tr: TraceRecord, split_type: SplittingType) -> bool:
    """K-anomalous classification: a_p = 1 (split/ramified), a_p = +-1 (inert)."""
    if tr.p < 7:
        raise SmallPrime("Hasse shortcut needs p >= 7")
    if split_type is SplittingType.INERT:
        return tr.a_p in (1, -1)
    return tr.a_p == 1


def _primes_upto(n: int) -> list[int]:
    if n < 2:
        return []
    sieve = bytearray([1]) * (n + 1)
    sieve[0:2] = b"\x00\x00"
    for i in range(2, math.isqrt(n) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(sieve[i * i :: i]))
    return [i for i in range(2, n + 1) if sieve[i]]


@dataclass(frozen=True)
class AnomalousScan:
    records: list  # (p, TraceRecord, SplittingType, q_anomalous, k_anomalous)
    skipped: list  # (p, reason)


def anomalous_scan(curve: CurveQ, d: int, pmax: int) -> AnomalousScan:
    """Classify every good prime 7 <= p <= pmax as Q-/K-anomalous for K = Q(sqrt(-d)).

    Bad-reduction primes and p | d are reported in the side list, never dropped.
    """
    disc = discriminant(curve)
    K = QuadField(d)
    records = []
    skipped = []
    for p in _primes_upto(pmax):
        if p < 7:
            continue
        if disc % p == 0:
            skipped.append((p, "bad reduction"))
            continue
        if d % p == 0:
            skipped.append((p, "divides d"))
            continue
        tr = count_points_fp(curve, p)
        st = splitting(p, K)
        records.append((p, tr, st, is_Q_anomalous(tr), is_K_anomalous(tr, st)))
    return AnomalousScan(records=records, skipped=skipped)


def lang_trotter_count(curve: CurveQ, t: int, x: int) -> int:
    """pi_{E,t}(x): good primes 5 <= p <= x with a_p = t.  Raw count, no asymptotics."""
    if x < 5:
        return 0
    disc = discriminant(curve)
    count = 0
    for p in _primes_upto(x):
        if p < 5 or disc % p == 0:
            continue
        if count_points_fp(curve, p).a_p == t:
            count += 1
    return count
