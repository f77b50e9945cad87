"""Weak equalisers and weak pullbacks, pseudo-relations and their witnesses.

A weak limit only has to admit *some* mediating arrow. The ``padded``
strategy makes that visible: every witness is duplicated ``k`` times, so
mediating arrows stop being unique while the image of the construction is
unchanged.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import BoundaryError, ElementError, InternalInconsistency
from .finset import (
    FiniteMap,
    FiniteSet,
    canonical_set,
    compose,
    distinct_labels,
    enumerate_maps,
    identity,
    least_map,
    least_section,
    product,
)


@dataclass(frozen=True)
class Strategy:
    kind: str = "minimal"
    k: int = 1

    def __post_init__(self):
        if self.kind not in ("minimal", "padded"):
            raise ValueError(f"unknown strategy kind {self.kind!r}")
        if self.kind == "minimal" and self.k != 1:
            raise ValueError("the minimal strategy has no padding factor")
        if self.kind == "padded" and self.k < 2:
            raise ValueError("padding factor must be at least 2")

    @property
    def copies(self) -> int:
        return self.k

    @classmethod
    def parse(cls, text: str) -> "Strategy":
        text = text.strip()
        if text == "minimal":
            return MINIMAL
        if text.startswith("padded"):
            _, _, k = text.partition(":")
            return padded(int(k) if k else 2)
        raise ValueError(f"unknown strategy {text!r}; use 'minimal' or 'padded:<k>'")

    def __str__(self):
        return "minimal" if self.kind == "minimal" else f"padded:{self.k}"


MINIMAL = Strategy()


def padded(k: int = 2) -> Strategy:
    return Strategy("padded", k)


class Span:
    """An apex with legs into a list of feet; binary spans are pseudo-relations."""

    __slots__ = ("apex", "legs", "_image")

    def __init__(self, apex: FiniteSet, legs: Sequence[FiniteMap]):
        legs = tuple(legs)
        for leg in legs:
            if leg.dom != apex:
                raise BoundaryError("every leg of a span must start at its apex")
        self.apex = apex
        self.legs = legs
        self._image = None

    @property
    def left(self) -> FiniteMap:
        return self.legs[0]

    @property
    def right(self) -> FiniteMap:
        return self.legs[1]

    @property
    def feet(self) -> tuple[FiniteSet, ...]:
        return tuple(leg.cod for leg in self.legs)

    def row(self, a: int) -> tuple[int, ...]:
        return tuple(leg.table[a] for leg in self.legs)

    def image(self) -> frozenset[tuple[int, ...]]:
        if self._image is None:
            self._image = frozenset(zip(*(leg.table for leg in self.legs))) if self.legs else (
                frozenset([()]) if len(self.apex) else frozenset())
        return self._image

    def holds(self, *labels: str) -> bool:
        if len(labels) != len(self.legs):
            raise BoundaryError(f"span has {len(self.legs)} feet, got {len(labels)} elements")
        coords = tuple(foot.index(lab) for foot, lab in zip(self.feet, labels))
        return coords in self.image()

    def witnesses(self) -> dict[tuple[int, ...], list[int]]:
        """Apex elements over each image tuple, in canonical order."""
        out: dict[tuple[int, ...], list[int]] = {}
        for a in range(len(self.apex)):
            out.setdefault(self.row(a), []).append(a)
        return out

    @classmethod
    def from_tuples(cls, feet: Sequence[FiniteSet], rows: Iterable[Sequence[str]],
                    prefix: str = "r") -> "Span":
        """Span whose apex has one element per listed row (repeats allowed)."""
        rows = [tuple(r) for r in rows]
        apex = canonical_set(len(rows), prefix)
        legs = []
        for n, foot in enumerate(feet):
            legs.append(FiniteMap(apex, foot, [foot.index(r[n]) for r in rows]))
        return cls(apex, legs)

    @classmethod
    def from_index_rows(cls, feet: Sequence[FiniteSet], rows: Iterable[Sequence[int]],
                        prefix: str = "r") -> "Span":
        rows = [tuple(r) for r in rows]
        apex = canonical_set(len(rows), prefix)
        legs = [FiniteMap(apex, foot, [r[n] for r in rows]) for n, foot in enumerate(feet)]
        return cls(apex, legs)

    def __repr__(self):
        return f"Span(apex={len(self.apex)}, feet={[len(f) for f in self.feet]})"


def diagonal_span(X: FiniteSet) -> Span:
    return Span(X, (identity(X), identity(X)))


def rel_holds(rel: Span, x: str, y: str) -> bool:
    """``<x, y>`` lies in the image of the span."""
    X, Y = rel.feet
    if x not in X:
        raise ElementError(f"{x!r} is not an element of {X!r}")
    if y not in Y:
        raise ElementError(f"{y!r} is not an element of {Y!r}")
    return rel.holds(x, y)


def weak_equalizer(f: FiniteMap, g: FiniteMap,
                   strategy: Strategy = MINIMAL) -> tuple[FiniteSet, FiniteMap]:
    if f.dom != g.dom or f.cod != g.cod:
        raise BoundaryError(
            f"arrows are not parallel: {f.dom!r}->{f.cod!r} vs {g.dom!r}->{g.cod!r}")
    agree = [i for i in range(len(f.dom)) if f.table[i] == g.table[i]]
    labels = f.dom.labels
    if strategy.kind == "minimal":
        E = FiniteSet(labels[i] for i in agree)
        return E, FiniteMap(E, f.dom, agree)
    k = strategy.copies
    parts = [(labels[i], str(j)) for i in agree for j in range(k)]
    E = FiniteSet(distinct_labels([f"{x}#{j}" for x, j in parts], parts))
    return E, FiniteMap(E, f.dom, [i for i in agree for _ in range(k)])


def weak_pullback(f: FiniteMap, g: FiniteMap, strategy: Strategy = MINIMAL) -> Span:
    """Weak pullback of ``f: X -> Z`` and ``g: Y -> Z`` as a span over X, Y.

    Same result as the weak equaliser of ``f.pr1`` and ``g.pr2`` on ``X x Y``
    (row-major order, padded copies adjacent), without building the product.
    """
    if f.cod != g.cod:
        raise BoundaryError(f"no common codomain: {f.cod!r} vs {g.cod!r}")
    X, Y = f.dom, g.dom
    g_fib = g.fibers()
    pairs = [(a, b) for a in range(len(X)) for b in g_fib[f.table[a]]]
    k = strategy.copies
    rows = [p for p in pairs for _ in range(k)]
    if k == 1:
        parts = [(X.labels[a], Y.labels[b]) for a, b in pairs]
        preferred = [f"({x},{y})" for x, y in parts]
    else:
        parts = [(X.labels[a], Y.labels[b], str(j)) for a, b in pairs for j in range(k)]
        preferred = [f"({x},{y})#{j}" for x, y, j in parts]
    E = FiniteSet(distinct_labels(preferred, parts))
    return Span(E, (FiniteMap(E, X, [a for a, _ in rows]), FiniteMap(E, Y, [b for _, b in rows])))


def factor_through(a: FiniteMap, b: FiniteMap) -> FiniteMap | None:
    """Least ``h`` with ``b . h = a`` (pointwise least preimage), else None."""
    if a.cod != b.cod:
        raise BoundaryError(f"different targets: {a.cod!r} vs {b.cod!r}")
    fib = b.fibers()
    return least_map(a.dom, b.dom, [fib[j] for j in a.table])


def factor_through_search(a: FiniteMap, b: FiniteMap) -> FiniteMap | None:
    """Brute force over ``enumerate_maps``; the oracle for ``factor_through``."""
    for h in enumerate_maps(a.dom, b.dom):
        if compose(b, h) == a:
            return h
    return None


@dataclass(eq=False)
class PseudoEqRel:
    carrier: FiniteSet
    rel: Span
    rho: FiniteMap
    sym: FiniteMap
    wpb: Span
    tau: FiniteMap

    def __post_init__(self):
        self.check()

    def check(self) -> None:
        """Re-verify the three witness squares; raises on any failure."""
        r1, r2 = self.rel.left, self.rel.right
        X = self.carrier
        if r1.cod != X or r2.cod != X:
            raise BoundaryError("relation legs must land in the carrier")
        if any(r1.table[j] != i or r2.table[j] != i for i, j in enumerate(self.rho.table)):
            raise InternalInconsistency("reflexivity square does not commute")
        if any(r1.table[j] != r2.table[a] or r2.table[j] != r1.table[a]
               for a, j in enumerate(self.sym.table)):
            raise InternalInconsistency("symmetry square does not commute")
        p1, p2 = self.wpb.left, self.wpb.right
        if p1.cod != self.rel.apex or p2.cod != self.rel.apex:
            raise BoundaryError("transitivity pullback must be over the relation's apex")
        for w in range(len(self.wpb.apex)):
            a, b = p1.table[w], p2.table[w]
            if r2.table[a] != r1.table[b]:
                raise InternalInconsistency("chosen pullback is not a cone over r2, r1")
            t = self.tau.table[w]
            if r1.table[t] != r1.table[a] or r2.table[t] != r2.table[b]:
                raise InternalInconsistency("transitivity square does not commute")


def relation_properties(rel: Span) -> dict[str, bool]:
    """Reflexivity, symmetry, transitivity of the element-level relation."""
    X = rel.left.cod
    img = rel.image()
    n = len(X)
    reflexive = all((i, i) in img for i in range(n))
    symmetric = all((b, a) in img for a, b in img)
    succ: dict[int, set[int]] = {}
    for a, b in img:
        succ.setdefault(a, set()).add(b)
    transitive = all((a, c) in img for a, b in img for c in succ.get(b, ()))
    return {"reflexive": reflexive, "symmetric": symmetric, "transitive": transitive}


def find_pseudo_eqrel_witnesses(rel: Span, strategy: Strategy = MINIMAL) -> PseudoEqRel | None:
    """Search for reflexivity, symmetry and transitivity witnesses.

    Each witness is the first map in lexicographic order making its square
    commute; the search and the element-level test must agree.
    """
    if len(rel.legs) != 2 or rel.left.cod != rel.right.cod:
        raise BoundaryError("a pseudo-equivalence relation needs a span over X, X")
    X = rel.left.cod
    R = rel.apex
    over = rel.witnesses()
    r1, r2 = rel.left.table, rel.right.table

    rho = least_map(X, R, [over.get((i, i), ()) for i in range(len(X))])
    sym = least_map(R, R, [over.get((r2[a], r1[a]), ()) for a in range(len(R))])
    wpb = weak_pullback(rel.right, rel.left, strategy)
    tau = None
    if rho is not None and sym is not None:
        p1, p2 = wpb.left.table, wpb.right.table
        tau = least_map(wpb.apex, R, [over.get((r1[p1[w]], r2[p2[w]]), ())
                                      for w in range(len(wpb.apex))])
    found = rho is not None and sym is not None and tau is not None
    props = relation_properties(rel)
    if found != all(props.values()):
        raise InternalInconsistency(
            f"witness search ({found}) disagrees with element test ({props})")
    if not found:
        return None
    return PseudoEqRel(X, rel, rho, sym, wpb, tau)


def is_choice_object(Y: FiniteSet, max_extra: int = 1) -> bool:
    """Every surjection onto Y from a set of size ``<= |Y| + max_extra`` splits.

    The least-preimage section always exists for finite sets; the bounded
    sweep re-derives that from the definition.
    """
    for n in range(len(Y), len(Y) + max_extra + 1):
        X = canonical_set(n, "s")
        for f in enumerate_maps(X, Y):
            if f.is_surjective():
                s = least_section(f)
                if s is None or compose(f, s) != identity(Y):
                    return False
    return True


@dataclass
class WelemReport:
    """Outcome of the sweep over the elementality equivalences."""

    strategy: str
    max_size: int
    surjections: int = 0
    surjections_split: int = 0
    pairs: int = 0
    leq_true: int = 0
    disagreements: list = field(default_factory=list)
    spans: int = 0
    total_spans: int = 0
    choice_maps: int = 0
    choice_failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return (self.surjections == self.surjections_split and not self.disagreements
                and not self.choice_failures and self.total_spans == self.choice_maps)

    def summary(self) -> dict:
        return {
            "strategy": self.strategy,
            "max_size": self.max_size,
            "surjections": self.surjections,
            "surjections_split": self.surjections_split,
            "presubobject_pairs": self.pairs,
            "leq_pairs": self.leq_true,
            "disagreements": len(self.disagreements),
            "spans": self.spans,
            "total_spans": self.total_spans,
            "choice_maps": self.choice_maps,
            "choice_failures": len(self.choice_failures),
            "ok": self.ok,
        }


def leq_via_weak_pullback(a: FiniteMap, b: FiniteMap, strategy: Strategy) -> FiniteMap | None:
    """``a <= b`` by splitting a weak pullback of ``b`` along ``a``."""
    w = weak_pullback(a, b, strategy)
    s = least_section(w.left)
    if s is None:
        return None
    return compose(w.right, s)


def check_welemlogic(max_size: int = 3, strategy: Strategy = MINIMAL,
                     span_size: int | None = None) -> WelemReport:
    """Sweep (i) surjections split, (ii) order = element inclusion, (iii) choice maps."""
    report = WelemReport(str(strategy), max_size)
    sets = [canonical_set(n, "e") for n in range(max_size + 1)]

    for A in sets:
        for B in sets:
            for f in enumerate_maps(A, B):
                if not f.is_surjective():
                    continue
                report.surjections += 1
                s = least_section(f)
                if s is not None and compose(f, s) == identity(B):
                    report.surjections_split += 1

    for X in sets:
        arrows = [m for A in sets for m in enumerate_maps(A, X)]
        for a in arrows:
            for b in arrows:
                report.pairs += 1
                searched = factor_through_search(a, b) is not None
                elementwise = a.image() <= b.image()
                constructive = leq_via_weak_pullback(a, b, strategy)
                if constructive is not None and compose(b, constructive) != a:
                    raise InternalInconsistency("weak-pullback factorisation does not commute")
                verdicts = (searched, elementwise, constructive is not None)
                if len(set(verdicts)) != 1:
                    report.disagreements.append((a, b, verdicts))
                report.leq_true += searched

    span_size = max_size if span_size is None else span_size
    apexes = [canonical_set(n, "p") for n in range(span_size + 1)]
    for X in sets:
        for Y in sets:
            XY = product(X, Y)
            for R in apexes:
                for r in enumerate_maps(R, XY.obj):
                    report.spans += 1
                    r1, r2 = compose(XY.pr1, r), compose(XY.pr2, r)
                    img = frozenset(zip(r1.table, r2.table))
                    total = r1.is_surjective()
                    exists = any(all((i, m.table[i]) in img for i in range(len(X)))
                                 for m in enumerate_maps(X, Y))
                    if total != exists:
                        report.choice_failures.append((r, "totality/choice mismatch"))
                    if not total:
                        continue
                    report.total_spans += 1
                    s = least_section(r1)
                    f = compose(r2, s)
                    if all((i, f.table[i]) in img for i in range(len(X))):
                        report.choice_maps += 1
                    else:
                        report.choice_failures.append((r, f))
    return report


def all_spans_over(X: FiniteSet, Y: FiniteSet, max_apex: int) -> Iterable[Span]:
    """Every span over X, Y with apex ``{p0..p(n-1)}``, ``n <= max_apex``."""
    XY = product(X, Y)
    for n in range(max_apex + 1):
        R = canonical_set(n, "p")
        for r in enumerate_maps(R, XY.obj):
            yield Span(R, (compose(XY.pr1, r), compose(XY.pr2, r)))


def image_relations(X: FiniteSet, Y: FiniteSet) -> Iterable[frozenset[tuple[int, int]]]:
    """All subsets of X x Y as index-pair sets."""
    cells = [(i, j) for i in range(len(X)) for j in range(len(Y))]
    for bits in itertools.product((False, True), repeat=len(cells)):
        yield frozenset(c for c, b in zip(cells, bits) if b)


@dataclass
class EqRelReport:
    strategy: str
    max_size: int
    relations: int = 0
    equivalences: int = 0
    witnessed: int = 0
    disagreements: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.disagreements and self.equivalences == self.witnessed

    def summary(self) -> dict:
        return {"strategy": self.strategy, "max_size": self.max_size,
                "relations": self.relations, "equivalences": self.equivalences,
                "witnessed": self.witnessed, "disagreements": len(self.disagreements),
                "ok": self.ok}


def check_eqrel_sweep(max_size: int = 3, strategy: Strategy = MINIMAL) -> EqRelReport:
    """Witness search succeeds exactly on equivalence relations.

    Every subset of ``X x X`` for ``|X| <= max_size`` is presented as a span
    with ``strategy.copies`` witnesses per pair; the verdict of the search is
    compared with a direct closure test on the pairs.
    """
    rep = EqRelReport(str(strategy), max_size)
    for n in range(max_size + 1):
        X = canonical_set(n, "e")
        for img in image_relations(X, X):
            rep.relations += 1
            rows = [p for p in sorted(img) for _ in range(strategy.copies)]
            span = Span.from_index_rows((X, X), rows, "w")
            is_eq = (all((i, i) in img for i in range(n))
                     and all((b, a) in img for a, b in img)
                     and all((a, d) in img for a, b in img for c, d in img if b == c))
            rep.equivalences += is_eq
            try:
                found = find_pseudo_eqrel_witnesses(span, strategy)
            except InternalInconsistency as exc:
                rep.disagreements.append((n, sorted(img), str(exc)))
                continue
            rep.witnessed += found is not None
            if (found is not None) != is_eq:
                rep.disagreements.append((n, sorted(img), found is not None))
    return rep
