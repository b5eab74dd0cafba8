"""Bounded-precision p-adic numbers and the formal-group logarithm.

A PadicElement stores an integer mod p^precision together with that absolute
precision: the element is x = value + O(p^precision).  Everything feeding the
logarithm is exact rational arithmetic; p-adic rounding happens once, at the
end, with the truncation tail certified from the term-valuation bound
n*v(z) - v_p(n).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .curves import CurveQ
from .errors import PointAtInfinity, PrecisionLoss
from .modp import count_points_fp
from .points import Point, multiply, on_curve


def vp_int(n: int, p: int) -> int:
    if n == 0:
        raise ValueError("valuation of 0 is infinite")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def vp_rat(x: Fraction, p: int) -> int:
    return vp_int(x.numerator, p) - vp_int(x.denominator, p)


@dataclass(frozen=True)
class PadicElement:
    p: int
    value: int  # residue mod p^precision
    precision: int  # number of retained p-adic digits (absolute)

    def __post_init__(self):
        if self.precision < 1:
            raise ValueError("precision must be positive")
        object.__setattr__(self, "value", self.value % self.p ** self.precision)

    @classmethod
    def from_rational(cls, x: Fraction | int, p: int, precision: int) -> "PadicElement":
        x = Fraction(x)
        if x == 0:
            return cls(p, 0, precision)
        if vp_int(x.denominator, p) > 0:
            raise ValueError("negative valuation not representable here")
        mod = p ** precision
        num = x.numerator % mod
        den = pow(x.denominator % mod, -1, mod)
        return cls(p, num * den % mod, precision)

    @property
    def valuation(self) -> int | None:
        """v_p(value), or None when the element is 0 to the stated precision."""
        if self.value == 0:
            return None
        return vp_int(self.value, p=self.p)

    def is_unit(self) -> bool:
        return self.value % self.p != 0

    def at_precision(self, precision: int) -> "PadicElement":
        if precision > self.precision:
            raise PrecisionLoss("cannot increase precision")
        return PadicElement(self.p, self.value % self.p ** precision, precision)

    def __add__(self, other: "PadicElement") -> "PadicElement":
        assert self.p == other.p
        n = min(self.precision, other.precision)
        return PadicElement(self.p, self.value + other.value, n)

    def __sub__(self, other: "PadicElement") -> "PadicElement":
        assert self.p == other.p
        n = min(self.precision, other.precision)
        return PadicElement(self.p, self.value - other.value, n)

    def __mul__(self, other):
        if isinstance(other, int):
            return PadicElement(self.p, self.value * other, self.precision)
        assert self.p == other.p
        va = 0 if self.value == 0 else min(vp_int(self.value, self.p), self.precision)
        vb = 0 if other.value == 0 else min(vp_int(other.value, other.p), other.precision)
        n = min(self.precision + vb, other.precision + va)
        return PadicElement(self.p, self.value * other.value, n)

    __rmul__ = __mul__

    def same(self, other: "PadicElement") -> bool:
        """Equality to the shared precision."""
        n = min(self.precision, other.precision)
        return (self.value - other.value) % self.p ** n == 0

    def __str__(self) -> str:
        return f"{self.value} + O({self.p}^{self.precision})"


# --- formal group of a Weierstrass model --------------------------------------

def _series_mul(f: list[Fraction], g: list[Fraction], n: int) -> list[Fraction]:
    out = [Fraction(0)] * n
    for i, a in enumerate(f[:n]):
        if a:
            for j, b in enumerate(g[: n - i]):
                if b:
                    out[i + j] += a * b
    return out


def _series_inv(f: list[Fraction], n: int) -> list[Fraction]:
    assert f[0] != 0
    inv = [Fraction(1) / f[0]] + [Fraction(0)] * (n - 1)
    for k in range(1, n):
        acc = Fraction(0)
        for i in range(1, k + 1):
            if i < len(f):
                acc += f[i] * inv[k - i]
        inv[k] = -acc / f[0]
    return inv


def differential_coefficients(curve: CurveQ, nterms: int) -> list[int]:
    """Coefficients b_0..b_{nterms-1} of the normalized invariant differential
    omega(z) = (b_0 + b_1 z + ...) dz in the parameter z = -x/y; b_0 = 1."""
    a1, a2, a3, a4, a6 = (Fraction(a) for a in curve.ainvs)
    n = nterms + 4
    # w(z) = z^3 + a1 z w + a2 z^2 w + a3 w^2 + a4 z w^2 + a6 w^3 with w = z^3 W:
    # W = 1 + a1 z W + a2 z^2 W + a3 z^3 W^2 + a4 z^4 W^2 + a6 z^6 W^3
    W = [Fraction(1)] + [Fraction(0)] * (n - 1)
    for _ in range(n + 1):
        W2 = _series_mul(W, W, n)
        W3 = _series_mul(W2, W, n)
        new = [Fraction(0)] * n
        new[0] = Fraction(1)
        for i in range(1, n):
            acc = a1 * W[i - 1]
            if i >= 2:
                acc += a2 * W[i - 2]
            if i >= 3:
                acc += a3 * W2[i - 3]
            if i >= 4:
                acc += a4 * W2[i - 4]
            if i >= 6:
                acc += a6 * W3[i - 6]
            new[i] = acc
        W = new
    # omega/dz = (-2W - zW') / (W * (-2 + a1 z + a3 z^3 W))
    Wp = [W[i] * i for i in range(n)]  # z W' has coefficient i*W_i at z^i
    num = [-2 * W[i] - Wp[i] for i in range(n)]
    den_factor = [Fraction(0)] * n
    den_factor[0] = Fraction(-2)
    den_factor[1] += a1
    for i in range(3, n):
        den_factor[i] += a3 * W[i - 3]
    den = _series_mul(W, den_factor, n)
    omega = _series_mul(num, _series_inv(den, n), n)[:nterms]
    out = []
    for i, c in enumerate(omega):
        assert c.denominator == 1, f"omega coefficient {i} not integral: {c}"
        out.append(int(c))
    assert out[0] == 1
    return out


@dataclass(frozen=True)
class FormalLogResult:
    log: PadicElement
    z_valuation: int
    kill_multiple: int  # m = #E~(F_p) used to reach the kernel of reduction
    terms_used: int


def formal_log(curve: CurveQ, P: Point, p: int, target_precision: int = 8) -> FormalLogResult:
    """log_omega(P) for the differential dx/(2y + a1 x + a3) of the given model.

    Computes m = #E~(F_p), Q = m P by exact arithmetic, z = -x(Q)/y(Q), then the
    exact truncated series sum Sigma b_{n-1} z^n / n divided by m, rounded to a
    certified absolute precision >= target_precision.
    """
    if P is None or not on_curve(curve, P):
        raise ValueError("P must be an affine point on the given model")
    m = count_points_fp(curve, p).n_p
    Q = multiply(curve, m, P)
    if Q is None:
        raise PointAtInfinity("m * P = O: the point is torsion")
    xq, yq = Fraction(Q[0]), Fraction(Q[1])
    z = -xq / yq
    k = vp_rat(z, p)
    assert k >= 1, "m P must lie in the kernel of reduction"
    vm = vp_int(m, p)
    # series cutoff: every omitted term has v >= (n+1)k - log_p(n+1) > target + vm
    nmax = 1
    while (nmax + 1) * k - int(math.log(nmax + 1) / math.log(p)) <= target_precision + vm:
        nmax += 1
    coeffs = differential_coefficients(curve, nmax)
    total = Fraction(0)
    zn = Fraction(1)
    for n in range(1, nmax + 1):
        zn *= z
        total += Fraction(coeffs[n - 1], n) * zn
    log_exact = total / m
    if log_exact == 0:
        raise PrecisionLoss("series sum vanished identically; raise the target")
    v = vp_rat(log_exact, p)
    if v < 0:
        raise PrecisionLoss("negative valuation: inputs violate the contract")
    certified = target_precision
    element = PadicElement.from_rational(log_exact, p, certified)
    return FormalLogResult(log=element, z_valuation=k, kill_multiple=m, terms_used=nmax)
