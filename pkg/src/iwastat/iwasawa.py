"""Euler characteristics, the vanishing classification, and the decision procedures.

chi is tracked as an exact power of p (the unit part is never needed); Sha
orders and twist data are always ingested, never computed, and every report
carries the provenance of each factor.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .curves import CurveQ, discriminant
from .errors import (
    HypothesisFailed,
    InExceptionalSet,
    MissingData,
    NotIntegral,
    SmallPrime,
    Unsupported,
)
from .modp import TraceRecord, count_points_fp, is_K_anomalous, _primes_upto
from .quadratic import QuadField, SplittingType, splitting
from .tate import (
    bad_primes,
    conductor,
    tamagawa_p_part,
    tamagawa_product_p_part,
    tate_algorithm,
    tau_anticyclotomic,
)


class Setting(enum.Enum):
    CYCLOTOMIC_Q = "cyclotomic-Q"
    ANTICYCLOTOMIC_K = "anticyclotomic-K"


def _p_part(n: int, p: int) -> int:
    out = 1
    while n % p == 0:
        out *= p
        n //= p
    return out


def _is_p_power(n: int, p: int) -> bool:
    if n < 1:
        return False
    while n % p == 0:
        n //= p
    return n == 1


@dataclass(frozen=True)
class EulerCharInputs:
    p: int
    sha_p: int
    alpha_p: int
    tau: int
    torsion_p: int
    setting: Setting
    provenance: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        for name in ("sha_p", "alpha_p", "tau", "torsion_p"):
            if not _is_p_power(getattr(self, name), self.p):
                raise ValueError(f"{name} must be a non-negative power of p")


@dataclass(frozen=True)
class VanishingReport:
    chi: int
    mu_zero_and_lambda_zero: bool
    selmer_trivial: bool
    notes: tuple[str, ...] = ()

    def __post_init__(self):
        assert self.mu_zero_and_lambda_zero == self.selmer_trivial == (self.chi == 1)


def alpha_p_anticyclotomic(tr: TraceRecord, split_type: SplittingType) -> int:
    """alpha_p = prod over primes of K above p of #E~(k_v)[p^infty], as a power of p."""
    if tr.p < 7:
        raise SmallPrime("alpha_p classification needs p >= 7")
    if not tr.ordinary:
        raise ValueError("good ordinary reduction required")
    p = tr.p
    if split_type is SplittingType.SPLIT:
        return _p_part(tr.n_p, p) ** 2
    if split_type is SplittingType.RAMIFIED:
        return _p_part(tr.n_p, p)
    return _p_part((p + 1 - tr.a_p) * (p + 1 + tr.a_p), p)


def euler_characteristic(inputs: EulerCharInputs) -> int:
    """sha_p * alpha_p^2 * tau / torsion_p^2, an exact power of p or NotIntegral."""
    num = inputs.sha_p * inputs.alpha_p ** 2 * inputs.tau
    den = inputs.torsion_p ** 2
    if num % den:
        raise NotIntegral(f"chi = {num}/{den} is not an integer; inputs inconsistent")
    return num // den


def classify(chi: int, notes: tuple[str, ...] = ()) -> VanishingReport:
    trivial = chi == 1
    return VanishingReport(
        chi=chi,
        mu_zero_and_lambda_zero=trivial,
        selmer_trivial=trivial,
        notes=notes,
    )


def lambda_rank_check(lambda_claimed: int, rank: int) -> bool:
    """lambda >= rank_Z E(K) for cotorsion Selmer groups; validates supplied lambdas."""
    return lambda_claimed >= rank


@dataclass(frozen=True)
class IngestedKData:
    """Snapshot of the ingested quantities for (E, K^d): ranks, Sha, torsion."""

    rank_base: int
    rank_twist: int | None
    sha_base: int | None
    sha_twist: int | None
    torsion_base: int
    torsion_twist: int | None
    provenance: str = "fixture"

    @property
    def rank_K(self) -> int:
        if self.rank_twist is None:
            raise MissingData("twist rank not ingested")
        return self.rank_base + self.rank_twist

    def sha_K_p_part(self, p: int) -> int:
        # odd p: Sha(E/K)[p] decomposes as base x twist eigenspaces
        if p == 2:
            raise Unsupported("the p = 2 Sha decomposition over K is out of scope")
        if self.sha_base is None or self.sha_twist is None:
            raise MissingData("Sha orders not ingested for this twist")
        return _p_part(self.sha_base * self.sha_twist, p)

    def torsion_K_p_part(self, p: int) -> int:
        if p == 2:
            raise Unsupported("use odd p")
        if self.torsion_twist is None:
            raise MissingData("twist torsion not ingested")
        return _p_part(self.torsion_base * self.torsion_twist, p)


def exceptional_set_M(
    curve: CurveQ, K: QuadField, pmax: int, ingested: IngestedKData
) -> set[int]:
    """Odd good-ordinary primes p <= pmax with E(K)[p] != 0 or sha_p * tau != 1."""
    if ingested.rank_K != 0:
        raise ValueError("the exceptional set is defined in the rank-0 setting")
    disc = discriminant(curve)
    out = set()
    for p in _primes_upto(pmax):
        if p == 2 or disc % p == 0:
            continue
        tr = count_points_fp(curve, p)
        if not tr.ordinary:
            continue
        if ingested.torsion_K_p_part(p) != 1:
            out.add(p)
            continue
        tau, _ = tau_anticyclotomic(curve, K.d, p)
        if ingested.sha_K_p_part(p) * tau != 1:
            out.add(p)
    return out


def theorem48_decide(
    curve: CurveQ, K: QuadField, p: int, ingested: IngestedKData
) -> VanishingReport:
    """Sel(E/K_inf) = 0 iff p is not K-anomalous, for good ordinary p outside M."""
    if ingested.rank_K != 0:
        raise ValueError("rank_Z E(K) = 0 required")
    disc = discriminant(curve)
    if disc % p == 0:
        raise ValueError(f"{p} is a bad prime")
    tr = count_points_fp(curve, p)
    if not tr.ordinary:
        raise ValueError(f"{p} is supersingular for this curve")
    if ingested.torsion_K_p_part(p) != 1:
        raise InExceptionalSet(f"E(K)[{p}] != 0")
    tau, _ = tau_anticyclotomic(curve, K.d, p)
    if ingested.sha_K_p_part(p) * tau != 1:
        raise InExceptionalSet(f"sha_p * tau != 1 at p = {p}")
    st = splitting(p, K)
    anomalous = is_K_anomalous(tr, st)
    alpha = alpha_p_anticyclotomic(tr, st)
    chi = euler_characteristic(
        EulerCharInputs(
            p=p, sha_p=1, alpha_p=alpha, tau=1, torsion_p=1,
            setting=Setting.ANTICYCLOTOMIC_K,
            provenance={"sha_p": ingested.provenance, "alpha_p": "computed", "tau": "computed"},
        )
    )
    # cross-validation: chi = 1 exactly when p is not K-anomalous
    assert (chi == 1) == (not anomalous)
    note = "K-anomalous: mu > 0 or lambda > 0" if anomalous else "Sel(E/K_inf) = 0"
    return classify(chi, notes=(note,))


def chi_cyclotomic_Q(curve: CurveQ, p: int, sha_Q: int, torsion_order: int) -> int:
    """Cyclotomic Euler characteristic over Q as a power of p (rank 0 inputs)."""
    tr = count_points_fp(curve, p)
    if not tr.ordinary:
        raise ValueError("good ordinary reduction required")
    alpha = _p_part(tr.n_p, p)
    tau = tamagawa_product_p_part(curve, p)
    return euler_characteristic(
        EulerCharInputs(
            p=p,
            sha_p=_p_part(sha_Q, p),
            alpha_p=alpha,
            tau=tau,
            torsion_p=_p_part(torsion_order, p),
            setting=Setting.CYCLOTOMIC_Q,
        )
    )


@dataclass(frozen=True)
class EquivalenceReport:
    hypotheses: dict
    equivalence: str
    selmer_trivial: bool | None  # evaluated when the twist Sha is ingested
    notes: tuple[str, ...] = ()


def theorem74_decide(
    curve: CurveQ, d: int, p: int, ingested: IngestedKData
) -> EquivalenceReport:
    """Sel(E/K^d_inf) = 0  <=>  Sha(E/K^d)[p] = 0, under hypotheses (i)-(v)."""
    checked = {}
    if p < 5:
        raise HypothesisFailed("(i)", "p >= 5 required")
    checked["(i) p >= 5"] = True
    if ingested.rank_base != 0:
        raise HypothesisFailed("(ii)", "rank E(Q) != 0")
    checked["(ii) rank E(Q) = 0"] = True
    if _p_part(ingested.torsion_base, p) != 1:
        raise HypothesisFailed("(iii)", f"E(Q)[{p}] != 0")
    checked["(iii) E(Q)[p] = 0"] = True
    tr = count_points_fp(curve, p)
    if tr.a_p % p in (1, p - 1):
        raise HypothesisFailed("(iv)", f"a_p = {tr.a_p} = +-1 (mod {p})")
    checked["(iv) a_p != +-1 (mod p)"] = True
    if ingested.sha_base is None:
        raise MissingData("Sha(E/Q) needed to certify hypothesis (v)")
    chi_q = chi_cyclotomic_Q(curve, p, ingested.sha_base, ingested.torsion_base)
    if chi_q != 1:
        raise HypothesisFailed("(v)", f"cyclotomic chi = {chi_q} != 1")
    checked["(v) Sel(E/Q_inf) = 0"] = True
    N = conductor(curve)
    if d == p or N % d == 0 or not _is_prime_int(d):
        raise HypothesisFailed("d", "d must be a prime not dividing N, d != p")
    if ingested.rank_K != 0:
        raise HypothesisFailed("rank", f"rank E(K^d) = {ingested.rank_K} != 0")
    checked["rank E(K^d) = 0"] = True
    # Kida step: tau_ell^{(d)} = 1 needs no bad In* with p | n at the ramified d
    for ell in bad_primes(curve):
        ld = tate_algorithm(curve, ell)
        if ld.kodaira.kind == "In*" and ld.kodaira.n % p == 0 and ell == d:
            raise HypothesisFailed("kida", f"I_n* with p | n at ramified ell = {ell}")
    verdict = None
    notes = []
    try:
        verdict = ingested.sha_K_p_part(p) == 1
        notes.append(f"Sha(E/K^d)[{p}] {'=' if verdict else '!='} 0 (ingested)")
    except MissingData:
        notes.append("twist Sha not ingested; equivalence stated, not evaluated")
    return EquivalenceReport(
        hypotheses=checked,
        equivalence="Sel(E/K^d_inf) = 0  <=>  Sha(E/K^d)[p] = 0",
        selmer_trivial=verdict,
        notes=tuple(notes),
    )


def _is_prime_int(n: int) -> bool:
    if n < 2:
        return False
    q = 2
    while q * q <= n:
        if n % q == 0:
            return False
        q += 1
    return True
