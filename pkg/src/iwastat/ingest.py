"""Curve-data ingestion: bundled fixtures, an append-only cache, and a thin
read-only HTTP client for LMFDB-style curve-by-label endpoints.

Every record is one JSON file with a version header.  Tests run entirely
against the bundled fixtures; the network layer exists for live use and is
always last in the lookup order (cache, fixtures, network).
"""

from __future__ import annotations

import json
import os
import time
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path

from .curves import CurveQ
from .errors import MissingData, MissingTwist, NetworkUnavailable, NotFound
from .iwasawa import IngestedKData
from .points import on_curve

RECORD_VERSION = 1
ENV_CACHE = "IWASTAT_CACHE_DIR"
ENV_BASE_URL = "IWASTAT_LMFDB_URL"
DEFAULT_BASE_URL = "https://www.lmfdb.org"


@dataclass(frozen=True)
class CurveRecord:
    label: str
    a_invariants: tuple[int, int, int, int, int]
    conductor: int
    rank: int
    torsion_structure: tuple[int, ...]
    tamagawa: dict[int, int]
    kodaira: dict[int, str] = field(default_factory=dict)
    sha_order: int | None = None
    generators: tuple = ()
    nonmaximal_primes: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.conductor < 11:
            raise ValueError("no elliptic curve has conductor < 11")
        curve = self.curve
        from .curves import discriminant

        if discriminant(curve) == 0:
            raise ValueError("record defines a singular curve")
        for g in self.generators:
            if not on_curve(curve, g):
                raise ValueError(f"generator {g} not on curve {self.label}")

    @property
    def curve(self) -> CurveQ:
        return CurveQ.from_ainvs(self.a_invariants)

    @property
    def torsion_order(self) -> int:
        out = 1
        for n in self.torsion_structure:
            out *= n
        return out


@dataclass(frozen=True)
class TwistKey:
    base_label: str
    d: int  # K^d = Q(sqrt(-d)); the twist is by the fundamental discriminant

    def __post_init__(self):
        if self.d == 0:
            raise ValueError("d must be nonzero")


@dataclass(frozen=True)
class TwistRecord:
    base_label: str
    d: int
    rank: int | None
    sha_order: int | None
    model: tuple[int, int, int, int, int] | None  # twist model carrying the generator
    generator: tuple[str, str] | None  # exact rationals as "num/den" strings
    torsion_order: int | None = None
    provenance: str = "fixture"

    def generator_point(self):
        if self.generator is None or self.model is None:
            return None, None
        P = (Fraction(self.generator[0]), Fraction(self.generator[1]))
        return CurveQ.from_ainvs(self.model), P


def _point_from_json(obj):
    return (Fraction(obj[0]), Fraction(obj[1]))


def _record_from_json(data: dict) -> CurveRecord:
    if data.get("version") != RECORD_VERSION:
        raise ValueError(f"unsupported record version {data.get('version')}")
    return CurveRecord(
        label=data["label"],
        a_invariants=tuple(data["a_invariants"]),
        conductor=data["conductor"],
        rank=data["rank"],
        torsion_structure=tuple(data["torsion_structure"]),
        tamagawa={int(k): v for k, v in data["tamagawa"].items()},
        kodaira={int(k): v for k, v in data.get("kodaira", {}).items()},
        sha_order=data.get("sha_order"),
        generators=tuple(_point_from_json(g) for g in data.get("generators", [])),
        nonmaximal_primes=(
            tuple(data["nonmaximal_primes"]) if data.get("nonmaximal_primes") is not None else None
        ),
    )


def _record_to_json(rec: CurveRecord) -> dict:
    return {
        "version": RECORD_VERSION,
        "label": rec.label,
        "a_invariants": list(rec.a_invariants),
        "conductor": rec.conductor,
        "rank": rec.rank,
        "torsion_structure": list(rec.torsion_structure),
        "tamagawa": {str(k): v for k, v in sorted(rec.tamagawa.items())},
        "kodaira": {str(k): v for k, v in sorted(rec.kodaira.items())},
        "sha_order": rec.sha_order,
        "generators": [[str(x), str(y)] for x, y in rec.generators],
        "nonmaximal_primes": list(rec.nonmaximal_primes) if rec.nonmaximal_primes is not None else None,
    }


def _twist_from_json(data: dict) -> TwistRecord:
    if data.get("version") != RECORD_VERSION:
        raise ValueError(f"unsupported record version {data.get('version')}")
    return TwistRecord(
        base_label=data["base_label"],
        d=data["d"],
        rank=data.get("rank"),
        sha_order=data.get("sha_order"),
        model=tuple(data["model"]) if data.get("model") else None,
        generator=tuple(data["generator"]) if data.get("generator") else None,
        torsion_order=data.get("torsion_order"),
        provenance=data.get("provenance", "fixture"),
    )


def fixture_dir() -> Path:
    return Path(resources.files("iwastat") / "fixtures")


class CurveStore:
    """Lookup order: cache directory, bundled fixtures, then (optionally) network."""

    def __init__(
        self,
        cache_dir: str | os.PathLike | None = None,
        base_url: str | None = None,
        offline: bool = False,
        timeout: float = 10.0,
    ):
        env_cache = os.environ.get(ENV_CACHE)
        self.cache_dir = Path(cache_dir or env_cache) if (cache_dir or env_cache) else None
        self.base_url = base_url or os.environ.get(ENV_BASE_URL, DEFAULT_BASE_URL)
        self.offline = offline
        self.timeout = timeout
        self._memory: dict[str, CurveRecord] = {}

    # -- curve records ---------------------------------------------------

    def fetch_curve(self, label: str) -> CurveRecord:
        if label in self._memory:
            return self._memory[label]
        data = self._read_json(self._cache_path("curves", f"{label}.json"))
        if data is None:
            data = self._read_fixture("curves", f"{label}.json")
        if data is None and not self.offline:
            data = self._fetch_remote(label)
            if data is not None:
                self._write_cache("curves", f"{label}.json", data)
        if data is None:
            raise NotFound(f"no record for curve {label!r} (cache, fixtures, network)")
        rec = _record_from_json(data)
        self._memory[label] = rec
        return rec

    def fetch_twist(self, key: TwistKey) -> TwistRecord:
        name = f"{key.base_label}_d{key.d}.json"
        data = self._read_json(self._cache_path("twists", name))
        if data is None:
            data = self._read_fixture("twists", name)
        if data is None:
            raise MissingTwist(f"no twist record for {key.base_label}, d = {key.d}")
        return _twist_from_json(data)

    def store_curve(self, rec: CurveRecord) -> None:
        self._write_cache("curves", f"{rec.label}.json", _record_to_json(rec))

    # -- derived quantities ------------------------------------------------

    def rank_over_K(self, key: TwistKey) -> int:
        base = self.fetch_curve(key.base_label)
        twist = self.fetch_twist(key)
        if twist.rank is None:
            raise MissingTwist(f"twist rank missing for {key}")
        return base.rank + twist.rank

    def sha_over_K_odd_part(self, key: TwistKey, p: int) -> int:
        if p == 2:
            raise MissingData("the p = 2 part of Sha over K is explicitly out of scope")
        if self.rank_over_K(key) != 0:
            raise MissingData("Sha decomposition used only in the rank-0 setting")
        base = self.fetch_curve(key.base_label)
        twist = self.fetch_twist(key)
        if base.sha_order is None or twist.sha_order is None:
            raise MissingData(f"Sha orders missing for {key}")
        n = base.sha_order * twist.sha_order
        out = 1
        while n % p == 0:
            out *= p
            n //= p
        return out

    def k_data(self, key: TwistKey) -> IngestedKData:
        base = self.fetch_curve(key.base_label)
        try:
            twist = self.fetch_twist(key)
            rank_twist, sha_twist, tors_twist = twist.rank, twist.sha_order, twist.torsion_order
        except MissingTwist:
            rank_twist = sha_twist = tors_twist = None
        return IngestedKData(
            rank_base=base.rank,
            rank_twist=rank_twist,
            sha_base=base.sha_order,
            sha_twist=sha_twist,
            torsion_base=base.torsion_order,
            torsion_twist=tors_twist,
            provenance="fixture",
        )

    # -- storage layers ----------------------------------------------------

    def _cache_path(self, kind: str, name: str) -> Path | None:
        if self.cache_dir is None:
            return None
        return self.cache_dir / kind / name

    @staticmethod
    def _read_json(path: Path | None):
        if path is None or not path.is_file():
            return None
        with open(path) as fh:
            return json.load(fh)

    @staticmethod
    def _read_fixture(kind: str, name: str):
        ref = resources.files("iwastat") / "fixtures" / kind / name
        if not ref.is_file():
            return None
        with ref.open() as fh:
            return json.load(fh)

    def _write_cache(self, kind: str, name: str, data: dict) -> None:
        if self.cache_dir is None:
            return
        path = self.cache_dir / kind / name
        path.parent.mkdir(parents=True, exist_ok=True)
        if path.exists():
            return  # append-only: first write wins
        tmp = path.with_suffix(".tmp")
        with open(tmp, "w") as fh:
            json.dump(data, fh, indent=1, sort_keys=True)
            fh.write("\n")
        tmp.rename(path)

    # -- network -----------------------------------------------------------

    def _fetch_remote(self, label: str):
        """Curve-by-label query against an LMFDB-style JSON API; read-only,
        exponential backoff, returns our record schema or None."""
        import requests

        url = f"{self.base_url.rstrip('/')}/api/ec_curvedata/"
        params = {"Clabel": label, "_format": "json"}
        delay = 1.0
        last_error = None
        for _ in range(3):
            try:
                resp = requests.get(url, params=params, timeout=self.timeout)
                if resp.status_code == 200:
                    rows = resp.json().get("data", [])
                    if not rows:
                        return None
                    return self._remote_row_to_record(label, rows[0])
                last_error = f"HTTP {resp.status_code}"
            except requests.RequestException as exc:  # includes timeouts
                last_error = str(exc)
            time.sleep(delay)
            delay *= 2
        raise NetworkUnavailable(f"cache miss for {label!r} and network failed: {last_error}")

    @staticmethod
    def _remote_row_to_record(label: str, row: dict):
        ainvs = row.get("ainvs")
        if isinstance(ainvs, str):
            ainvs = json.loads(ainvs)
        return {
            "version": RECORD_VERSION,
            "label": label,
            "a_invariants": list(ainvs),
            "conductor": int(row["conductor"]),
            "rank": int(row["rank"]),
            "torsion_structure": list(row.get("torsion_structure", [])),
            "tamagawa": {},
            "kodaira": {},
            "sha_order": row.get("sha"),
            "generators": [],
            "nonmaximal_primes": row.get("nonmax_primes"),
        }


def default_store(offline: bool = True) -> CurveStore:
    return CurveStore(offline=offline)
