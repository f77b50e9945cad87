"""Instance suites for dependent products: exhaustive at small sizes plus
seeded random instances, and a runner that records one verdict per instance."""
from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .depprod import (
    build_dependent_product,
    cross_strategy_iso,
    iso_to_oracle,
    oracle_dependent_product,
    verify_universal_property,
)
from .errors import CapExceeded, OracleMismatch
from .excompletion import ExArrow, ExObj, all_objects, compatible_maps, ex_hom, respects
from .finset import FiniteMap, canonical_set
from .fullness import DEFAULT_CODE_CAP, check_fullness
from .weaklim import MINIMAL, Strategy


def instance_key(f: ExArrow, g: ExArrow) -> tuple:
    """Hashable description of a pair, stable across strategies."""
    return (f.dst.cls, f.src.cls, g.src.cls, f.rep.table, g.rep.table)


def exhaustive_pairs(max_size: int = 3, dedupe: bool = False) -> Iterator[tuple[ExArrow, ExArrow]]:
    """All composable ``Y -g-> X -f-> I`` with carriers of size ``<= max_size``.

    Every relation on every carrier is used; with ``dedupe`` one representative
    per arrow of the completion, otherwise every compatible representative.
    """
    hom = ex_hom if dedupe else compatible_maps
    Is, Xs, Ys = (all_objects(max_size, p) for p in "ixy")
    for I in Is:
        for X in Xs:
            fs = hom(X, I)
            for Y in Ys:
                gs = hom(Y, X)
                for f in fs:
                    for g in gs:
                        yield f, g


def random_object(rng: random.Random, n: int, prefix: str) -> ExObj:
    X = canonical_set(n, prefix)
    blocks = rng.randint(1, max(1, n))
    return ExObj.from_classes(X, [rng.randrange(blocks) for _ in range(n)])


def random_arrow(rng: random.Random, A: ExObj, B: ExObj) -> ExArrow | None:
    """A random compatible map, or None when B is empty and A is not."""
    if len(A.carrier) and not len(B.carrier):
        return None
    target = [rng.randrange(len(B.carrier)) for _ in range(A.n_classes)]
    table = [rng.choice(B.classes[B.cls[target[A.cls[a]]]]) for a in range(len(A.carrier))]
    rep = FiniteMap(A.carrier, B.carrier, table)
    assert respects(rep, A, B)
    return ExArrow(A, B, rep)


def seeded_pairs(count: int = 100, max_size: int = 4, seed: int = 0) -> list[tuple[ExArrow, ExArrow]]:
    """``count`` distinct random composable pairs, carriers of size 1..max_size."""
    rng = random.Random(seed)
    out, seen = [], set()
    while len(out) < count:
        I = random_object(rng, rng.randint(1, max_size), "i")
        X = random_object(rng, rng.randint(1, max_size), "x")
        Y = random_object(rng, rng.randint(1, max_size), "y")
        f, g = random_arrow(rng, X, I), random_arrow(rng, Y, X)
        if f is not None and g is not None and instance_key(f, g) not in seen:
            seen.add(instance_key(f, g))
            out.append((f, g))
    return out


@dataclass
class InstanceVerdict:
    status: str                    # "ok", "fail" or "cap"
    classes: tuple = ()
    oracle: tuple = ()
    iso: bool = False
    universal: bool = False
    fullness: bool = False
    fullness_misses: int = 0
    relations: int = 0
    detail: str = ""

    def comparable(self) -> tuple:
        return (self.status, self.classes, self.oracle, self.iso, self.universal, self.fullness)


@dataclass
class SuiteResult:
    strategy: str
    verdicts: dict = field(default_factory=dict)
    results: dict = field(default_factory=dict)
    seconds: float = 0.0

    def count(self, status: str) -> int:
        return sum(v.status == status for v in self.verdicts.values())

    @property
    def failures(self) -> list:
        return [k for k, v in self.verdicts.items() if v.status == "fail"]

    def all(self, attr: str) -> bool:
        return all(getattr(v, attr) for v in self.verdicts.values() if v.status != "cap")


def run_instance(f: ExArrow, g: ExArrow, strategy: Strategy = MINIMAL,
                 cap: int = DEFAULT_CODE_CAP, keep: dict | None = None) -> InstanceVerdict:
    try:
        res = build_dependent_product(f, g, strategy, cap)
    except CapExceeded as exc:
        return InstanceVerdict("cap", detail=str(exc))
    oracle = oracle_dependent_product(f, g)
    v = InstanceVerdict("ok", tuple(res.classes_per_index()), tuple(oracle.counts()))
    try:
        iso_to_oracle(res, oracle)
        v.iso = True
    except OracleMismatch as exc:
        v.detail = str(exc)
    uni = verify_universal_property(res)
    v.universal, v.relations = uni.ok, uni.relations
    full = check_fullness(res.family)
    v.fullness, v.fullness_misses = full.ok, len(full.misses)
    if not (v.iso and v.universal and v.fullness and v.classes == v.oracle):
        v.status = "fail"
    if keep is not None:
        keep[instance_key(f, g)] = res
    return v


def run_suite(pairs: Iterable[tuple[ExArrow, ExArrow]], strategy: Strategy = MINIMAL,
              cap: int = DEFAULT_CODE_CAP, keep_results: bool = False) -> SuiteResult:
    out = SuiteResult(str(strategy))
    keep = out.results if keep_results else None
    start = time.perf_counter()
    for f, g in pairs:
        out.verdicts[instance_key(f, g)] = run_instance(f, g, strategy, cap, keep)
    out.seconds = time.perf_counter() - start
    return out


def compare_strategies(pairs: Iterable[tuple[ExArrow, ExArrow]], a: Strategy, b: Strategy,
                       cap: int = DEFAULT_CODE_CAP) -> dict:
    """Verdicts under both strategies plus an isomorphism between the results."""
    same = differ = skipped = isos = 0
    mismatches = []
    for f, g in pairs:
        ka, kb = {}, {}
        va = run_instance(f, g, a, cap, ka)
        vb = run_instance(f, g, b, cap, kb)
        if "cap" in (va.status, vb.status):
            skipped += 1
            continue
        if va.comparable() == vb.comparable():
            same += 1
        else:
            differ += 1
            mismatches.append((instance_key(f, g), va, vb))
            continue
        key = instance_key(f, g)
        try:
            cross_strategy_iso(ka[key], kb[key])
            isos += 1
        except OracleMismatch as exc:
            mismatches.append((key, "no iso", str(exc)))
    return {"same": same, "differ": differ, "skipped_cap": skipped, "isomorphic": isos,
            "mismatches": mismatches}
