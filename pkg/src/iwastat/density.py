"""The (CR)-density machinery: k, delta(S) = 1/2^(k+1), residue classes, d-scans.

Conventions follow the worked conductor-11 material: d runs over primes only,
membership in S uses the discriminant-based splitting criterion, and the
printed Kronecker-symbol variant is computed alongside so the two can be
diffed (they differ for d = 1 mod 4; see quadratic residue classes below).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .curves import CurveQ, discriminant
from .errors import AdditiveBadPrime, RamifiedBadPrime
from .modp import _primes_upto
from .quadratic import QuadField, SplittingType, is_squarefree, kronecker, splitting
from .tate import bad_primes, conductor, tate_algorithm


@dataclass(frozen=True)
class CRContext:
    curve: CurveQ
    p: int
    bad: tuple[int, ...]  # r_1..r_t, the k "bad-bad" primes first
    k: int

    @property
    def t(self) -> int:
        return len(self.bad)

    @property
    def N(self) -> int:
        out = 1
        for q in self.bad:
            out *= q
        return out


def n_plus_minus(curve: CurveQ, K: QuadField) -> tuple[int, int]:
    """Factor N = N+ * N- by splitting behaviour of the bad primes in K."""
    N = conductor(curve)
    if not is_squarefree(N):
        raise ValueError("N must be squarefree")
    n_plus = n_minus = 1
    for q in bad_primes(curve):
        st = splitting(q, K)
        if st is SplittingType.RAMIFIED:
            raise RamifiedBadPrime(f"{q} | gcd(D_K, N)")
        if st is SplittingType.SPLIT:
            n_plus *= q
        else:
            n_minus *= q
    return n_plus, n_minus


def residual_unramified_at(curve: CurveQ, q: int, p: int) -> bool:
    """Whether the mod-p representation is unramified at a multiplicative q != p.

    Tate-curve criterion: unramified iff p | v_q(Delta_min).
    """
    ld = tate_algorithm(curve, q)
    if ld.kodaira.kind != "In":
        raise AdditiveBadPrime(f"reduction at {q} is not multiplicative")
    return ld.v_disc % p == 0


def compute_k(curve: CurveQ, p: int) -> CRContext:
    """CRContext for (E, p): k counts q | N with q = +-1 (mod p) and rho unramified at q."""
    N = conductor(curve)
    if not is_squarefree(N):
        raise ValueError("N must be squarefree")
    bad_bad, rest = [], []
    for q in bad_primes(curve):
        if q % p in (1, p - 1) and residual_unramified_at(curve, q, p):
            bad_bad.append(q)
        else:
            rest.append(q)
    k = len(bad_bad)
    ctx = CRContext(curve=curve, p=p, bad=tuple(bad_bad + rest), k=k)
    if ctx.k >= ctx.t:
        raise ValueError("Theorem hypothesis (ii) requires k < omega(N)")
    return ctx


@dataclass(frozen=True)
class DensityReport:
    delta_S: Fraction
    n_odd_subsets: int  # #N = 2^(t-k-1)
    delta_omega: Fraction  # density of each pi_Omega


def delta_S(ctx: CRContext) -> DensityReport:
    return DensityReport(
        delta_S=Fraction(1, 2 ** (ctx.k + 1)),
        n_odd_subsets=2 ** (ctx.t - ctx.k - 1),
        delta_omega=Fraction(1, 2 ** ctx.t),
    )


def residue_classes(ctx: CRContext, omega: frozenset[int]) -> set[int]:
    """Classes r in (Z/N)* with (-r/q) = -1 for q in Omega and +1 for q not in Omega.

    A prime d lands in pi_Omega exactly when d mod N lies in this set.
    """
    bad = set(ctx.bad)
    if not omega <= bad:
        raise ValueError("Omega must consist of primes dividing N")
    N = ctx.N
    out = set()
    for r in range(1, N):
        if math.gcd(r, N) != 1:
            continue
        ok = True
        for q in bad:
            want = -1 if q in omega else 1
            if kronecker(-r, q) != want:
                ok = False
                break
        if ok:
            out.add(r)
    phi = 1
    for q in bad:
        phi *= q - 1
    assert len(out) == phi // 2 ** ctx.t, "Lemma cardinality phi(N)/2^omega violated"
    return out


@dataclass(frozen=True)
class CRScanResult:
    count_in_S: int
    count_primes: int

    @property
    def empirical_density(self) -> float | None:
        if self.count_primes == 0:
            return None
        return self.count_in_S / self.count_primes


def d_in_S(ctx: CRContext, d: int) -> bool:
    """Discriminant-based membership: the set of inert bad primes must avoid
    the k bad-bad primes and have odd cardinality (no bad prime ramified)."""
    K = QuadField(d)
    omega = []
    for q in ctx.bad:
        st = splitting(q, K)
        if st is SplittingType.RAMIFIED:
            return False
        if st is SplittingType.INERT:
            omega.append(q)
    if len(omega) % 2 == 0:
        return False
    bad_bad = set(ctx.bad[: ctx.k])
    return not any(q in bad_bad for q in omega)


def cr_scan(ctx: CRContext, dmax: int) -> CRScanResult:
    """Empirical density of S over primes d <= dmax with d not dividing N, d != p."""
    if dmax < 10:
        raise ValueError("dmax must be >= 10")
    N = ctx.N
    hits = total = 0
    for d in _primes_upto(dmax):
        if N % d == 0 or d == ctx.p:
            continue
        total += 1
        if d_in_S(ctx, d):
            hits += 1
    return CRScanResult(count_in_S=hits, count_primes=total)


def kronecker_condition_classes(q: int, modulus: int) -> list[int]:
    """Residues r mod `modulus` containing some prime d with (q/d) = -1.

    This reproduces the printed Kronecker-symbol description of S for prime
    conductor q (classes mod 4q); it differs from the discriminant-based
    criterion in the r = 1 (mod 4) classes.
    """
    out = []
    for r in range(1, modulus):
        if math.gcd(r, modulus) != 1:
            continue
        # (q/d) for primes d = r (mod 4q) depends only on r
        if kronecker(q, _witness_prime(r, modulus)) == -1:
            out.append(r)
    return out


def discriminant_condition_classes(q: int, modulus: int) -> list[int]:
    """Residues r mod `modulus` whose primes d have q inert in Q(sqrt(-d))."""
    out = []
    for r in range(1, modulus):
        if math.gcd(r, modulus) != 1:
            continue
        d = _witness_prime(r, modulus)
        if splitting(q, QuadField(d)) is SplittingType.INERT:
            out.append(r)
    return out


def _witness_prime(r: int, modulus: int) -> int:
    """Smallest prime = r (mod modulus); exists by Dirichlet for gcd(r, modulus) = 1."""
    d = r
    while True:
        if d > 2 and _is_prime(d) and is_squarefree(d):
            return d
        d += modulus


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    q = 2
    while q * q <= n:
        if n % q == 0:
            return False
        q += 1
    return True
