"""Tate's algorithm over Q: Kodaira type, Tamagawa number, local exponents.

Input models must be minimal at the prime in question (ingested models are
globally minimal; enumerated short models are minimal away from 2, 3 by the
twelfth-power-free condition).  The implementation follows the classical
step list, with all root-finding done over F_p so that p = 2, 3 need no
special-casing beyond the small-field brute force in the helpers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .curves import CurveQ, discriminant
from .errors import NonMinimalModel
from .quadratic import QuadField, SplittingType, splitting


@dataclass(frozen=True)
class KodairaType:
    kind: str  # one of I0, In, II, III, IV, I0*, In*, IV*, III*, II*
    n: int = 0

    _KINDS = ("I0", "In", "II", "III", "IV", "I0*", "In*", "IV*", "III*", "II*")

    def __post_init__(self):
        if self.kind not in self._KINDS:
            raise ValueError(f"unknown Kodaira kind {self.kind!r}")
        if self.kind in ("In", "In*") and self.n < 1:
            raise ValueError("In/In* require n >= 1")
        if self.kind not in ("In", "In*") and self.n != 0:
            raise ValueError(f"{self.kind} carries no index")

    def __str__(self) -> str:
        if self.kind == "In":
            return f"I{self.n}"
        if self.kind == "In*":
            return f"I{self.n}*"
        return self.kind

    @classmethod
    def parse(cls, text: str) -> "KodairaType":
        text = text.strip()
        if text in ("I0", "II", "III", "IV", "I0*", "IV*", "III*", "II*"):
            return cls(text)
        if text.startswith("I") and text.endswith("*"):
            return cls("In*", int(text[1:-1]))
        if text.startswith("I"):
            return cls("In", int(text[1:]))
        raise ValueError(f"cannot parse Kodaira symbol {text!r}")

    @property
    def components(self) -> int:
        """Number of irreducible components of the special fiber (with multiplicity 1 count)."""
        return {
            "I0": 1, "II": 1, "III": 2, "IV": 3,
            "I0*": 5, "IV*": 7, "III*": 8, "II*": 9,
        }.get(self.kind, self.n if self.kind == "In" else self.n + 5)


@dataclass(frozen=True)
class LocalData:
    ell: int
    kodaira: KodairaType
    c: int
    v_disc: int
    v_cond: int
    split_multiplicative: bool | None = None

    def __post_init__(self):
        if self.kodaira.kind == "In":
            assert self.v_disc == self.kodaira.n, "In requires v(disc) = n"
            assert self.v_cond == 1


def _vp(n: int, p: int) -> int:
    if n == 0:
        return 10 ** 9  # effectively infinity for our bounded loops
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def _translate(a, r: int, s: int, t: int):
    """Coordinate change x -> x + r, y -> y + s*x + t on [a1, a2, a3, a4, a6]."""
    a1, a2, a3, a4, a6 = a
    return (
        a1 + 2 * s,
        a2 - s * a1 + 3 * r - s * s,
        a3 + r * a1 + 2 * t,
        a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t,
        a6 + r * a4 + r * r * a2 + r ** 3 - t * a3 - t * t - r * t * a1,
    )


def _b_invariants(a):
    a1, a2, a3, a4, a6 = a
    b2 = a1 * a1 + 4 * a2
    b4 = 2 * a4 + a1 * a3
    b6 = a3 * a3 + 4 * a6
    b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
    return b2, b4, b6, b8


def _is_qr(a: int, p: int) -> bool:
    """a nonzero square mod p (p odd)."""
    return pow(a % p, (p - 1) // 2, p) == 1


# --- quadratic and cubic root patterns over F_p -----------------------------

def _quad_pattern(A: int, B: int, C: int, p: int):
    """Root pattern of A*x^2 + B*x + C over F_p, A invertible.

    Returns ("distinct", nroots) with nroots in {0, 2}, or ("double", root).
    """
    A, B, C = A % p, B % p, C % p
    assert A != 0
    if p == 2:
        if B == 1:
            roots = sum(1 for x in (0, 1) if (A * x * x + B * x + C) % 2 == 0)
            return ("distinct", roots)
        return ("double", C * A % 2)  # x^2 = C/A, squaring is identity on F_2
    disc = (B * B - 4 * A * C) % p
    if disc == 0:
        return ("double", -B * pow(2 * A, -1, p) % p)
    return ("distinct", 2 if _is_qr(disc, p) else 0)


def _cubic_roots_brute(b: int, c: int, d: int, p: int):
    """(root, multiplicity) pairs of T^3 + b*T^2 + c*T + d over F_p, p small."""
    out = []
    for r in range(p):
        if (((r + b) * r + c) * r + d) % p:
            continue
        out.append((r, _root_multiplicity([d, c, b, 1], r, p)))
    return out


def _root_multiplicity(coeffs_low_to_high, r: int, p: int) -> int:
    mult = 0
    poly = [c % p for c in coeffs_low_to_high]
    while len(poly) > 1:
        # evaluate
        acc = 0
        for co in reversed(poly):
            acc = (acc * r + co) % p
        if acc != 0:
            break
        # divide by (T - r)
        deg = len(poly) - 1
        quot = [0] * deg
        carry = poly[deg]
        for i in range(deg - 1, -1, -1):
            quot[i] = carry % p
            carry = (poly[i] + carry * r) % p
        poly = quot
        mult += 1
    return mult


def _poly_mod(f, g, p):
    f = [c % p for c in f]
    while len(f) >= len(g):
        if f[-1] == 0:
            f.pop()
            continue
        shift = len(f) - len(g)
        lead = f[-1] * pow(g[-1], -1, p) % p
        for i, co in enumerate(g):
            f[i + shift] = (f[i + shift] - lead * co) % p
        f.pop()
    while f and f[-1] == 0:
        f.pop()
    return f


def _poly_gcd(f, g, p):
    f = [c % p for c in f]
    g = [c % p for c in g]
    while g:
        f, g = g, _poly_mod(f, g, p)
    if not f:
        return []
    inv = pow(f[-1], -1, p)
    return [c * inv % p for c in f]


def _poly_mulmod(f, g, mod, p):
    prod = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                prod[i + j] = (prod[i + j] + a * b) % p
    return _poly_mod(prod, mod, p)


def _count_roots_distinct_cubic(b: int, c: int, d: int, p: int) -> int:
    """#F_p-roots of a separable cubic: deg gcd(X^p - X, P)."""
    P = [d % p, c % p, b % p, 1]
    # X^p mod P by square and multiply
    result = [1]
    base = [0, 1]
    e = p
    while e:
        if e & 1:
            result = _poly_mulmod(result, base, P, p)
        base = _poly_mulmod(base, base, P, p)
        e >>= 1
    # subtract X
    xp = result + [0] * (3 - len(result))
    xp_minus_x = [(xp[0]) % p, (xp[1] - 1) % p, xp[2] % p]
    g = _poly_gcd(P, xp_minus_x, p)
    return max(len(g) - 1, 0)


def _cubic_pattern(b: int, c: int, d: int, p: int):
    """Pattern of the monic cubic T^3 + b*T^2 + c*T + d over F_p.

    Returns ("distinct", nroots), ("double", double_root) or ("triple", root).
    Repeated roots of a cubic always lie in F_p.
    """
    b, c, d = b % p, c % p, d % p
    if p <= 13:
        roots = _cubic_roots_brute(b, c, d, p)
        for r, m in roots:
            if m == 3:
                return ("triple", r)
        for r, m in roots:
            if m == 2:
                return ("double", r)
        return ("distinct", len(roots))
    disc = (18 * b * c * d - 4 * b ** 3 * d + b * b * c * c - 4 * c ** 3 - 27 * d * d) % p
    if disc != 0:
        return ("distinct", _count_roots_distinct_cubic(b, c, d, p))
    # repeated root via gcd with derivative (p > 3 so the derivative is honest)
    g = _poly_gcd([d, c, b, 1], [c, 2 * b % p, 3 % p], p)
    if len(g) - 1 == 1:
        r = (-g[0] * pow(g[1], -1, p)) % p
        return ("double", r)
    return ("triple", (-b * pow(3, -1, p)) % p)


# --- singular point ----------------------------------------------------------

def _singular_point(a, p: int):
    """Coordinates mod p of the singular point of the reduction (p | disc)."""
    a1, a2, a3, a4, a6 = a
    if p <= 3:
        for x0 in range(p):
            for y0 in range(p):
                if (y0 * y0 + a1 * x0 * y0 + a3 * y0 - ((x0 + a2) * x0 + a4) * x0 - a6) % p:
                    continue
                if (2 * y0 + a1 * x0 + a3) % p:
                    continue
                if (3 * x0 * x0 + 2 * a2 * x0 + a4 - a1 * y0) % p:
                    continue
                return x0, y0
        raise AssertionError("no singular point found mod small p")
    b2 = a1 * a1 + 4 * a2
    b4 = 2 * a4 + a1 * a3
    b6 = a3 * a3 + 4 * a6
    c4 = b2 * b2 - 24 * b4
    c6 = -b2 ** 3 + 36 * b2 * b4 - 216 * b6
    inv12 = pow(12, -1, p)
    if c4 % p:
        x0 = (-(c6 * pow(c4, -1, p) + b2) * inv12) % p
    else:
        x0 = (-b2 * inv12) % p
    y0 = (-(a1 * x0 + a3) * pow(2, -1, p)) % p
    return x0, y0


# --- the algorithm -----------------------------------------------------------

def tate_algorithm(curve: CurveQ, ell: int) -> LocalData:
    """Kodaira type, Tamagawa number, and local exponents of a minimal model at ell."""
    p = ell
    a = curve.ainvs
    disc = discriminant(curve)
    if disc == 0:
        raise ValueError("singular curve")
    vdelta = _vp(disc, p)
    if vdelta == 0:
        return LocalData(p, KodairaType("I0"), 1, 0, 0)

    # Step 2: move the singular point to (0, 0)
    x0, y0 = _singular_point(a, p)
    a = _translate(a, x0, 0, y0)
    assert all(ai % p == 0 for ai in (a[2], a[3], a[4]))

    b2 = a[0] * a[0] + 4 * a[1]
    if b2 % p:
        # multiplicative: In with n = v(disc); tangent quadratic T^2 + a1*T - a2
        if p == 2:
            split = a[1] % 2 == 0  # T^2 + T + a2 over F_2 (a1 is odd here)
        else:
            split = _is_qr(b2, p)
        n = vdelta
        c = n if split else (2 if n % 2 == 0 else 1)
        return LocalData(p, KodairaType("In", n), c, vdelta, 1, split_multiplicative=split)

    # additive: kill a1, a2 mod p with an s-translation
    if p == 2:
        s = a[1] % 2
    else:
        s = (-a[0] * pow(2, -1, p)) % p
    a = _translate(a, 0, s, 0)
    assert all(ai % p == 0 for ai in a)

    if _vp(a[4], p) < 2:
        return LocalData(p, KodairaType("II"), 1, vdelta, vdelta)
    _, _, _, b8 = _b_invariants(a)
    if _vp(b8, p) < 3:
        return LocalData(p, KodairaType("III"), 2, vdelta, vdelta - 1)
    b6 = a[2] * a[2] + 4 * a[4]
    if _vp(b6, p) < 3:
        kind, cnt = _quad_pattern(1, a[2] // p, -(a[4] // p ** 2), p)
        assert kind == "distinct"
        c = 3 if cnt == 2 else 1
        return LocalData(p, KodairaType("IV"), c, vdelta, vdelta - 2)

    # Step 6: double root of Y^2 + a3,1*Y - a6,2 -> translate y by p*y0
    kind, y1 = _quad_pattern(1, a[2] // p, -(a[4] // p ** 2), p)
    assert kind == "double"
    a = _translate(a, 0, 0, p * y1)
    assert _vp(a[2], p) >= 2 and _vp(a[4], p) >= 3
    assert _vp(a[3], p) >= 2

    # Step 7: the cubic T^3 + a2,1*T^2 + a4,2*T + a6,3
    pattern = _cubic_pattern(a[1] // p, a[3] // p ** 2, a[4] // p ** 3, p)
    if pattern[0] == "distinct":
        return LocalData(p, KodairaType("I0*"), 1 + pattern[1], vdelta, vdelta - 4)

    if pattern[0] == "double":
        a = _translate(a, p * pattern[1], 0, 0)
        assert _vp(a[1], p) == 1 and _vp(a[3], p) >= 3 and _vp(a[4], p) >= 4
        # In* loop; ky tracks the current y-depth
        ky = 1
        while True:
            if 2 * ky - 1 > vdelta:
                raise NonMinimalModel("In* loop exceeded v(disc); model not minimal")
            kind, info = _quad_pattern(1, a[2] // p ** (ky + 1), -(a[4] // p ** (2 * ky + 2)), p)
            if kind == "distinct":
                n = 2 * ky - 1
                c = 4 if info == 2 else 2
                return LocalData(p, KodairaType("In*", n), c, vdelta, vdelta - 4 - n)
            a = _translate(a, 0, 0, p ** (ky + 1) * info)
            assert _vp(a[2], p) >= ky + 2 and _vp(a[4], p) >= 2 * ky + 3
            kind, info = _quad_pattern(
                a[1] // p, a[3] // p ** (ky + 2), a[4] // p ** (2 * ky + 3), p
            )
            if kind == "distinct":
                n = 2 * ky
                c = 4 if info == 2 else 2
                return LocalData(p, KodairaType("In*", n), c, vdelta, vdelta - 4 - n)
            a = _translate(a, p ** (ky + 1) * info, 0, 0)
            assert _vp(a[3], p) >= ky + 3 and _vp(a[4], p) >= 2 * ky + 4
            ky += 1

    # triple root
    a = _translate(a, p * pattern[1], 0, 0)
    assert _vp(a[1], p) >= 2 and _vp(a[3], p) >= 3 and _vp(a[4], p) >= 4

    # Step 8: quadratic Y^2 + a3,2*Y - a6,4
    kind, info = _quad_pattern(1, a[2] // p ** 2, -(a[4] // p ** 4), p)
    if kind == "distinct":
        c = 3 if info == 2 else 1
        return LocalData(p, KodairaType("IV*"), c, vdelta, vdelta - 6)
    a = _translate(a, 0, 0, p ** 2 * info)
    assert _vp(a[2], p) >= 3 and _vp(a[4], p) >= 5

    if _vp(a[3], p) < 4:
        return LocalData(p, KodairaType("III*"), 2, vdelta, vdelta - 7)
    if _vp(a[4], p) < 6:
        return LocalData(p, KodairaType("II*"), 1, vdelta, vdelta - 8)
    raise NonMinimalModel(f"model is not minimal at {p}")


def bad_primes(curve: CurveQ) -> list[int]:
    """Prime divisors of the discriminant of the (assumed minimal) model."""
    disc = abs(discriminant(curve))
    out = []
    q = 2
    while q * q <= disc:
        if disc % q == 0:
            out.append(q)
            while disc % q == 0:
                disc //= q
        q += 1 if q == 2 else 2
    if disc > 1:
        out.append(disc)
    return out


def conductor(curve: CurveQ) -> int:
    """prod ell^{f_ell} over the bad primes of the minimal model."""
    N = 1
    for ell in bad_primes(curve):
        N *= ell ** tate_algorithm(curve, ell).v_cond
    return N


def local_data_map(curve: CurveQ) -> dict[int, LocalData]:
    return {ell: tate_algorithm(curve, ell) for ell in bad_primes(curve)}


def tamagawa_p_part(local: LocalData, p: int) -> int:
    """Largest power of p dividing the Tamagawa number c_ell."""
    return p ** _vp(local.c, p) if local.c % p == 0 else 1


def kida_p_divides(base: KodairaType, ramified: bool, ell: int, p: int) -> bool:
    """Can p divide the Tamagawa number after quadratic base change at ell?

    Per the Kida-table case analysis: type In with p | n always can; type In*
    with p | n only when ell != 2 is (tamely) ramified; at ell = 2 the In case
    is the only one, wildly ramified or not.
    """
    if ell == p:
        raise ValueError("base change predicate needs ell != p")
    if p < 5:
        raise ValueError("predicate stated for p >= 5")
    if base.kind == "In" and base.n % p == 0:
        return True
    if base.kind == "In*" and base.n % p == 0 and ramified and ell != 2:
        return True
    return False


def tau_anticyclotomic(curve: CurveQ, d: int, p: int) -> tuple[int, dict[int, int]]:
    """prod over v in S_ns \\ S_p of c_v^{(p)} for K = Q(sqrt(-d)).

    A bad prime ell contributes exactly when it splits in K (both primes of K
    above it are then finitely decomposed in K_inf), and it contributes one
    factor c_ell^{(p)} per prime of K above it, i.e. the square.
    Returns (product, per-ell p-part of c_ell before squaring).
    """
    K = QuadField(d)
    ells = bad_primes(curve)
    N = conductor(curve)
    if math.gcd(d, N) != 1:
        raise ValueError("gcd(d, N) must be 1")
    if N % p == 0:
        raise ValueError("p must be a good prime")
    total = 1
    detail = {}
    for ell in ells:
        if splitting(ell, K) is not SplittingType.SPLIT:
            continue
        part = tamagawa_p_part(tate_algorithm(curve, ell), p)
        detail[ell] = part
        total *= part * part
    return total, detail


def tamagawa_product_p_part(curve: CurveQ, p: int) -> int:
    """Cyclotomic tau: prod over all bad ell of c_ell^{(p)}."""
    total = 1
    for ell in bad_primes(curve):
        total *= tamagawa_p_part(tate_algorithm(curve, ell), p)
    return total
