"""Admissibility (seven conditions), residual-representation tests, and the
unit-logarithm criterion for the vanishing of mu and lambda in the indefinite case.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .curves import CurveQ, discriminant
from .errors import AdditiveBadPrime, MissingGenerator, NotAdmissible
from .modp import _primes_upto, count_points_fp
from .padic import FormalLogResult, formal_log, vp_int
from .points import Point, on_curve
from .quadratic import QuadField, SplittingType, is_squarefree, splitting, unit_group_is_pm1
from .tate import bad_primes, conductor, tate_algorithm


@dataclass(frozen=True)
class Condition:
    holds: bool | None  # None = undecided
    provenance: str  # computed | ingested | heuristic | undecided
    detail: str = ""


@dataclass(frozen=True)
class AdmissibilityReport:
    p_splits: Condition
    bad_primes_split: Condition
    good_ordinary: Condition
    p_coprime_to_6Nphi_h: Condition
    trace_not_pm1: Condition
    residual_surjective: Condition
    residual_ramified: Condition

    @property
    def conditions(self) -> dict:
        return {
            "(1) p splits in K": self.p_splits,
            "(2) every ell | N splits in K": self.bad_primes_split,
            "(3) good ordinary at p": self.good_ordinary,
            "(4) p coprime to 6 N phi(N) h_K": self.p_coprime_to_6Nphi_h,
            "(5) a_p != +-1 (mod p)": self.trace_not_pm1,
            "(6) mod-p image surjective": self.residual_surjective,
            "(7) mod-p rep ramified at all ell | N": self.residual_ramified,
        }

    @property
    def admissible(self) -> bool:
        return all(c.holds is True for c in self.conditions.values())

    @property
    def undecided(self) -> list[str]:
        return [k for k, c in self.conditions.items() if c.holds is None]


def residual_ramified_at(curve: CurveQ, ell: int, p: int) -> bool:
    """Tate-curve criterion at a multiplicative ell != p: ramified iff p does not
    divide v_ell(Delta_min)."""
    ld = tate_algorithm(curve, ell)
    if ld.kodaira.kind != "In":
        raise AdditiveBadPrime(f"reduction at {ell} is not multiplicative")
    return ld.v_disc % p != 0


def surjectivity_test(
    curve: CurveQ,
    p: int,
    nonmaximal_primes: list[int] | None = None,
    sample_bound: int = 200,
) -> bool | None:
    """True / False / None(undecided) for surjectivity of the mod-p image.

    Ingested non-maximal prime lists decide directly.  Otherwise Frobenius
    sampling looks for witnesses incompatible with every maximal subgroup
    class (Borel, normalizers of split/nonsplit Cartan, exceptional
    projective image); all four witnesses together certify surjectivity.
    """
    if nonmaximal_primes is not None:
        return p not in nonmaximal_primes
    if p < 5:
        return None
    disc = discriminant(curve)
    no_borel = no_ns_cartan = no_sp_cartan = no_exceptional = False
    for ell in _primes_upto(sample_bound):
        if ell < 5 or disc % ell == 0 or ell == p:
            continue
        a = count_points_fp(curve, ell).a_p % p
        d = (a * a - 4 * ell) % p
        chi = pow(d, (p - 1) // 2, p) if d else 0
        if chi == p - 1:
            no_borel = True
            if a != 0:
                no_sp_cartan = True
        if chi == 1 and a != 0:
            no_ns_cartan = True
        if a != 0 and ell % p != 0:
            u = a * a * pow(ell, -1, p) % p
            if u not in (0, 1, 2, 4) and (u * u - 3 * u + 1) % p != 0:
                no_exceptional = True
        if no_borel and no_ns_cartan and no_sp_cartan and no_exceptional:
            return True
    return None


def admissible(
    curve: CurveQ,
    K: QuadField,
    p: int,
    nonmaximal_primes: list[int] | None = None,
    sample_bound: int = 200,
) -> AdmissibilityReport:
    """Evaluate the seven admissibility conditions for (E, K, p)."""
    N = conductor(curve)
    if not is_squarefree(N) or N <= 3:
        raise ValueError("admissibility is defined for squarefree conductor N > 3")
    if not unit_group_is_pm1(K):
        raise ValueError("K must have unit group {+-1}")

    c1 = Condition(splitting(p, K) is SplittingType.SPLIT, "computed")
    ells = bad_primes(curve)
    bad_nonsplit = [ell for ell in ells if splitting(ell, K) is not SplittingType.SPLIT]
    c2 = Condition(not bad_nonsplit, "computed", f"non-split bad primes: {bad_nonsplit}")

    if N % p == 0:
        c3 = Condition(False, "computed", "p | N")
        c5 = Condition(False, "computed", "p | N")
    else:
        tr = count_points_fp(curve, p)
        c3 = Condition(tr.ordinary, "computed", f"a_p = {tr.a_p}")
        c5 = Condition(tr.a_p % p not in (1, p - 1), "computed", f"a_p = {tr.a_p}")

    phi = 1
    for ell in ells:
        phi *= ell - 1
    h = K.h
    c4 = Condition(
        (6 * N * phi * h) % p != 0, "computed", f"phi(N) = {phi}, h_K = {h}"
    )

    surj = surjectivity_test(curve, p, nonmaximal_primes, sample_bound)
    c6 = Condition(
        surj,
        "ingested" if nonmaximal_primes is not None else ("computed" if surj is not None else "undecided"),
    )

    if N % p == 0:
        c7 = Condition(False, "computed", "p | N")
    else:
        ram = {ell: residual_ramified_at(curve, ell, p) for ell in ells}
        c7 = Condition(
            all(ram.values()), "computed",
            f"unramified at: {[l for l, ok in ram.items() if not ok]}",
        )

    return AdmissibilityReport(c1, c2, c3, c4, c5, c6, c7)


@dataclass(frozen=True)
class HeegnerInput:
    """A point of infinite order with exact rational coordinates on `model`.

    For rank coming from the -d twist, `model` is the twisted curve; the
    valuation of the logarithm is unchanged by the twist isomorphism since
    sqrt(D) is a p-adic unit when p splits in K.
    """

    model: CurveQ
    P: Point
    p: int
    d: int

    def __post_init__(self):
        if self.P is None or not on_curve(self.model, self.P):
            raise ValueError("P must lie on the model (exact rational check)")


@dataclass(frozen=True)
class Theorem109Report:
    admissibility: AdmissibilityReport
    log: FormalLogResult
    log_valuation: int
    unit_after_dividing_p: bool
    invariants_vanish: bool
    bdp_constant_valuation: int  # v_p of ((1 - a_p + p)/p * log)^2
    certified_precision: int
    notes: tuple[str, ...]


def theorem109_decide(
    curve: CurveQ,
    K: QuadField,
    p: int,
    heegner: HeegnerInput,
    rank_K: int,
    sha_K_finite: bool = True,
    nonmaximal_primes: list[int] | None = None,
    target_precision: int = 8,
) -> Theorem109Report:
    """mu = lambda = 0 iff log_omega(P)/p is a p-adic unit, for admissible triples."""
    report = admissible(curve, K, p, nonmaximal_primes=nonmaximal_primes)
    if not report.admissible:
        failed = [k for k, c in report.conditions.items() if c.holds is not True]
        raise NotAdmissible(f"(E, K, {p}) not admissible; failing: {failed}")
    if rank_K != 1:
        raise ValueError("Theorem requires rank_Z E(K) = 1 (ingested)")
    if heegner.P is None:
        raise MissingGenerator("no generator ingested")
    res = formal_log(heegner.model, heegner.P, p, target_precision=target_precision)
    v = res.log.valuation
    assert v is not None and v >= 1
    unit = v == 1
    # (1 - a_p + p) = #E~(F_p) is a p-adic unit under condition (5)
    m = res.kill_multiple
    assert vp_int(m, p) == 0
    bdp_val = 2 * (v - 1)
    notes = (
        "generator ingested; differs from the Gross-Zagier point by an integer "
        "index -- a measured v_p(log) = 1 is index-robust, larger values are not",
        "Sha(E/K)[p^inf] finiteness " + ("recorded as ingested" if sha_K_finite else "NOT certified"),
    )
    return Theorem109Report(
        admissibility=report,
        log=res.log,
        log_valuation=v,
        unit_after_dividing_p=unit,
        invariants_vanish=unit,
        bdp_constant_valuation=bdp_val,
        certified_precision=res.log.precision,
        notes=notes,
    )
