"""Curve-family statistics: the S_p/T_p scans, Cohen-Lenstra f0, density bounds.

The S_p scan is exhaustive over all p^2 coefficient pairs; for fixed a the
trace vector over all b comes from one chi-table matrix product, so the whole
7 <= p < 150 table runs in seconds.  The a-axis partitions across workers.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .curves import CurveQ, HeightWindow, discriminant, enumerate_curves, j_invariant
from .modp import _primes_upto, count_points_fp, residue_table
from .quadratic import QuadField, SplittingType, kronecker, splitting
from .tate import tate_algorithm


@dataclass(frozen=True)
class FamilyScanResult:
    p: int
    frak_S: int
    frak_T: int

    def __post_init__(self):
        assert self.frak_S <= self.frak_T <= self.p ** 2

    @property
    def ratio_S(self) -> Fraction:
        return Fraction(self.frak_S, self.p ** 2)


def _chi_table(p: int) -> np.ndarray:
    tbl = -np.ones(p, dtype=np.int64)
    idx = (np.arange(p, dtype=np.int64) ** 2) % p
    tbl[idx] = 1
    tbl[0] = 0
    return tbl


def _scan_a_range(p: int, a_lo: int, a_hi: int) -> tuple[int, int]:
    """(frak_S, frak_T) contributions from a in [a_lo, a_hi)."""
    X = np.arange(p, dtype=np.int64)
    X3 = (X ** 3) % p
    chi = _chi_table(p)
    # C[b, t] = chi(t + b); S_b = sum_x chi(x^3 + a x + b) = C @ hist
    C = chi[(np.arange(p, dtype=np.int64)[:, None] + np.arange(p, dtype=np.int64)[None, :]) % p]
    B = np.arange(p, dtype=np.int64)
    s_count = t_count = 0
    hasse = math.isqrt(4 * p)  # |a_p| <= 2 sqrt(p)
    for a in range(a_lo, a_hi):
        T = (X3 + a * X) % p
        hist = np.bincount(T, minlength=p)
        S = C @ hist
        a_vec = -S  # a_p = p + 1 - #E = -sum chi
        nonsing = (4 * a ** 3 + 27 * B * B) % p != 0
        assert int(np.abs(a_vec[nonsing]).max(initial=0)) <= hasse
        n_vec = p + 1 + S
        # two routes: p | #E versus a_p = 1 (Hasse makes them agree for p >= 7)
        order_route = (n_vec % p == 0) & nonsing
        trace_route = (a_vec == 1) & nonsing
        assert np.array_equal(order_route, trace_route)
        s_count += int(trace_route.sum())
        t_count += int((((n_vec % p == 0) | (n_vec % p == 2)) & nonsing).sum())
    return s_count, t_count


def frak_S(p: int, jobs: int = 1) -> FamilyScanResult:
    """Count pairs (a, b) over F_p whose curve has a point of order p (S_p),
    and those with #E = 0 or 2 (mod p) (T_p)."""
    if p < 7:
        raise ValueError("family scan defined for p >= 7")
    if p > 1000:
        raise ValueError("desk bound p <= 1000")
    if jobs <= 1:
        s, t = _scan_a_range(p, 0, p)
    else:
        step = (p + jobs - 1) // jobs
        ranges = [(p, lo, min(lo + step, p)) for lo in range(0, p, step)]
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            parts = list(ex.map(_scan_a_range_star, ranges))
        s = sum(x for x, _ in parts)
        t = sum(y for _, y in parts)
    return FamilyScanResult(p=p, frak_S=s, frak_T=t)


def _scan_a_range_star(args):
    return _scan_a_range(*args)


def table2(pmin: int = 7, pmax: int = 149, jobs: int = 1) -> list[FamilyScanResult]:
    return [frak_S(p, jobs=jobs) for p in _primes_upto(pmax) if p >= max(pmin, 7)]


def b_of_p(p: int, K: QuadField) -> int:
    """#T_p if p is inert in K, else #S_p."""
    res = frak_S(p)
    return res.frak_T if splitting(p, K) is SplittingType.INERT else res.frak_S


# --- Cohen-Lenstra -----------------------------------------------------------

@dataclass(frozen=True)
class F0Result:
    value: float
    truncation_bound: float
    terms: int


def cohen_lenstra_f0(p: int, terms: int = 40) -> F0Result:
    """f0(p) = 1 - prod_{j>=1} (1 - p^(1-2j)), truncated at j <= terms."""
    if terms < 1:
        raise ValueError("terms >= 1")
    prod = Fraction(1)
    for j in range(1, terms + 1):
        prod *= 1 - Fraction(1, p ** (2 * j - 1))
    bound = 2.0 * float(p) ** (1 - 2 * (terms + 1))
    return F0Result(value=float(1 - prod), truncation_bound=bound, terms=terms)


# --- zeta and the explicit density bounds ------------------------------------

def zeta_minus_one(s: int, tol: float = 1e-15) -> float:
    """zeta(s) - 1 by direct series, integral tail bound below tol."""
    if s < 2:
        raise ValueError("s >= 2")
    total = 0.0
    n = 2
    while True:
        total += float(n) ** (-s)
        # tail after n: integral_n^inf x^-s dx = n^(1-s)/(s-1)
        if float(n) ** (1 - s) / (s - 1) < tol:
            return total
        n += 1


@dataclass(frozen=True)
class TamagawaBound:
    partial_sum: float
    zeta_bound: float
    terms: int


def tamagawa_density_bound(p: int, K: QuadField | None, lmax: int) -> TamagawaBound:
    """sum over eligible ell <= lmax of (ell-1)^2 / (ell^2 (ell^p - 1)), against zeta(p) - 1.

    Eligible: ell != 2, 3, p, and split in K when K is supplied.
    """
    if lmax < 5:
        raise ValueError("lmax >= 5")
    total = 0.0
    nterms = 0
    for ell in _primes_upto(lmax):
        if ell in (2, 3, p):
            continue
        if K is not None and splitting(ell, K) is not SplittingType.SPLIT:
            continue
        num = (ell - 1) ** 2
        den = ell * ell * (ell ** p - 1)
        if den.bit_length() > 1000:
            break  # terms below 1e-300; the sum is already converged
        total += num / den
        nterms += 1
    return TamagawaBound(partial_sum=total, zeta_bound=zeta_minus_one(p), terms=nterms)


def E3_bound(p: int, K: QuadField | None = None) -> float:
    """zeta(10) * d(p)/p^2 (cyclotomic) or zeta(10) * b(p)/p^2 (anticyclotomic)."""
    zeta10 = 1.0 + zeta_minus_one(10)
    numer = b_of_p(p, K) if K is not None else frak_S(p).frak_S
    return zeta10 * numer / p ** 2


# --- height-window scans ------------------------------------------------------

@dataclass(frozen=True)
class HeightScanCounts:
    total: int
    e2_members: int
    e3_members: int
    dagger_excluded: int


def _vp(n: int, p: int) -> int:
    v = 0
    while n and n % p == 0:
        n //= p
        v += 1
    return v


def _dagger_violated(curve: CurveQ, ell: int, p: int) -> bool:
    """Minimal Kodaira type at ell is In with p | n, via model-independent tests.

    v_ell(j) < 0 detects potential multiplicativity with n = -v_ell(j);
    v_ell(c4) = 0 (mod 4) separates In from In* on any Q-isomorphic model.
    """
    disc = discriminant(curve)
    vc4 = _vp(curve.c4, ell) if curve.c4 else 10 ** 9
    vj = 3 * vc4 - _vp(disc, ell)
    if vj >= 0:
        return False
    n = -vj
    return n % p == 0 and vc4 % 4 == 0


def _split_In_p_divides(curve: CurveQ, ell: int, p: int) -> bool:
    """p | c_ell, i.e. split In with p | n.  Valid for any model at ell >= 5
    via -c6 square-class; used with minimal short models there."""
    disc = discriminant(curve)
    vc4 = _vp(curve.c4, ell) if curve.c4 else 10 ** 9
    vj = 3 * vc4 - _vp(disc, ell)
    if vj >= 0 or (-vj) % p != 0 or vc4 % 4 != 0:
        return False
    # split test: -c6 a square in Q_ell (square class is model-invariant)
    c6 = curve.c6
    v6 = _vp(c6, ell)
    unit = (-c6) // ell ** v6
    if v6 % 2 != 0:
        return False
    if ell == 2:
        return unit % 8 == 1
    return kronecker(unit, ell) == 1


def height_scan(x: int, p: int, K: QuadField | None = None) -> HeightScanCounts:
    """Counts of E(x) members in E_2 (p | tau_p) and E_3 (p | alpha_p) under (dagger)."""
    if x > 10 ** 8:
        raise ValueError("desk-scale bound x <= 10^8")
    total = e2 = e3 = excluded = 0
    if x < 1:
        return HeightScanCounts(0, 0, 0, 0)
    for curve in enumerate_curves(HeightWindow(x)):
        total += 1
        if _dagger_violated(curve, 2, p) or _dagger_violated(curve, 3, p):
            excluded += 1
            continue
        disc = discriminant(curve)
        # E2: p | tau_p; only ell >= 5 can carry p | c_ell once (dagger) holds
        bad = [ell for ell in _factor(abs(disc)) if ell >= 5]
        in_e2 = False
        for ell in bad:
            if K is not None and splitting(ell, K) is not SplittingType.SPLIT:
                continue
            if _split_In_p_divides(curve, ell, p):
                in_e2 = True
                break
        if in_e2:
            e2 += 1
        # E3: p | alpha_p, needs good reduction at p
        if disc % p != 0:
            tr = count_points_fp(curve, p)
            if K is None or splitting(p, K) is not SplittingType.INERT:
                anomalous = tr.n_p % p == 0
            else:
                anomalous = ((p + 1) ** 2 - tr.a_p ** 2) % p == 0
            if anomalous:
                e3 += 1
    return HeightScanCounts(total=total, e2_members=e2, e3_members=e3, dagger_excluded=excluded)


def _factor(n: int) -> list[int]:
    out = []
    q = 2
    while q * q <= n:
        if n % q == 0:
            out.append(q)
            while n % q == 0:
                n //= q
        q += 1 if q == 2 else 2
    if n > 1:
        out.append(n)
    return out
