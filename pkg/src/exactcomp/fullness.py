"""Full families of pseudo-relations over composable maps ``Y -g-> X -f-> I``.

Codes over an index ``i`` are choice functions on the fiber of ``f`` over
``i``, each point ``u`` sent to a point of the fiber of ``g`` over the base
point of ``u``. The rows of a code are the triples ``(code, x, y)`` it picks.
Only families indexed by single elements are built (terminal index object).

The fibers of ``g`` that codes choose from follow the weak-limit strategy, so
padding shows up as several codes with the same rows. The fibers of ``f``
that codes are defined on are taken exactly: a padded copy of a point would
only repeat a choice already made, at a cost exponential in the padding.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field

from .bhk import Presubobject, psub_leq, pullback_along
from .errors import BoundaryError, CapExceeded
from .finset import (
    FiniteMap,
    FiniteSet,
    canonical_set,
    constant,
    distinct_labels,
    enumerate_maps,
)
from .weaklim import MINIMAL, Span, Strategy, weak_equalizer

DEFAULT_CODE_CAP = 4096
DEFAULT_CARRIER_CAP = 4


@dataclass(frozen=True, eq=False)
class FiberObject:
    base_arrow: FiniteMap
    index: int
    carrier: FiniteSet
    proj: FiniteMap


def fiber_object(f: FiniteMap, index: int, strategy: Strategy = MINIMAL) -> FiberObject:
    """The fiber of ``f`` over ``index`` as a weak equaliser of ``f`` and a constant."""
    const = constant(f.dom, f.cod, f.cod.labels[index])
    E, e = weak_equalizer(f, const, strategy)
    return FiberObject(f, index, E, e)


@dataclass(eq=False)
class FullFamily:
    f: FiniteMap
    g: FiniteMap
    F: FiniteSet
    phi: FiniteMap
    P: FiniteSet
    alpha_code: FiniteMap
    alpha_x: FiniteMap
    eps: FiniteMap
    strategy: Strategy = MINIMAL

    @property
    def alpha(self) -> Span:
        """``alpha: P -> F x X x Y`` as a three-legged span."""
        return Span(self.P, (self.alpha_code, self.alpha_x, self.eps))

    def rows(self) -> frozenset[tuple[int, int, int]]:
        return frozenset(zip(self.alpha_code.table, self.alpha_x.table, self.eps.table))

    def rows_by_code(self) -> list[frozenset[tuple[int, int]]]:
        out: list[set] = [set() for _ in range(len(self.F))]
        for c, x, y in zip(self.alpha_code.table, self.alpha_x.table, self.eps.table):
            out[c].add((x, y))
        return [frozenset(s) for s in out]

    def codes_over(self, i: int) -> list[int]:
        return [c for c, j in enumerate(self.phi.table) if j == i]

    def presubobject(self) -> Presubobject:
        return Presubobject(self.phi.cod, self.phi)


def code_count(f: FiniteMap, g: FiniteMap, strategy: Strategy = MINIMAL) -> int:
    """Number of codes ``build_full_family`` would produce."""
    k = strategy.copies
    f_fib, g_fib = f.fibers(), g.fibers()
    total = 0
    for xs in f_fib:
        n = 1
        for x in xs:
            n *= k * len(g_fib[x])
        total += n
    return total


def build_full_family(f: FiniteMap, g: FiniteMap, strategy: Strategy = MINIMAL,
                      cap: int = DEFAULT_CODE_CAP) -> FullFamily:
    """Sigma over indices of Pi over the fiber of ``f`` of fibers of ``g``.

    ``P`` has one row per code and point of the code's fiber; ``eps`` reads
    the chosen point of the ``g``-fiber back down to Y.
    """
    if g.cod != f.dom:
        raise BoundaryError(f"g must land in dom(f): {g.cod!r} vs {f.dom!r}")
    if code_count(f, g, strategy) > cap:
        raise CapExceeded(f"full family over {len(f.cod)} indices exceeds {cap} codes")
    X, I = f.dom, f.cod
    g_fibers = {x: fiber_object(g, x, strategy) for x in range(len(X))}

    code_parts, code_index, code_rows = [], [], []
    for i in range(len(I)):
        U = fiber_object(f, i, MINIMAL)
        choices = [g_fibers[U.proj.table[u]].carrier.labels for u in range(len(U.carrier))]
        positions = [range(len(c)) for c in choices]
        for pick in itertools.product(*positions):
            body = ",".join(f"{U.carrier.labels[u]}->{choices[u][p]}" for u, p in enumerate(pick))
            code_parts.append((I.labels[i], body))
            code_index.append(i)
            code_rows.append([(u, U.proj.table[u],
                               g_fibers[U.proj.table[u]].proj.table[p],
                               U.carrier.labels[u])
                              for u, p in enumerate(pick)])
    F = FiniteSet(distinct_labels([f"({i};{b})" for i, b in code_parts], code_parts))
    phi = FiniteMap(F, I, code_index)

    p_parts, a_code, a_x, a_y = [], [], [], []
    for c, rows in enumerate(code_rows):
        for _, x, y, ulab in rows:
            p_parts.append((F.labels[c], ulab))
            a_code.append(c)
            a_x.append(x)
            a_y.append(y)
    P = FiniteSet(distinct_labels([f"{c}@{u}" for c, u in p_parts], p_parts))
    return FullFamily(f, g, F, phi, P, FiniteMap(P, F, a_code), FiniteMap(P, X, a_x),
                      FiniteMap(P, g.dom, a_y), strategy)


def family_properties(fam: FullFamily) -> dict[str, bool]:
    """Partial sections of g, and domains indexed by f, by element sweep."""
    rows = fam.rows()
    g, f = fam.g.table, fam.f.table
    sections = all(g[y] == x for _, x, y in rows)
    has_row = {(c, x) for c, x, _ in rows}
    indexed = all(
        (f[x] == fam.phi.table[c]) == ((c, x) in has_row)
        for c in range(len(fam.F)) for x in range(len(fam.f.dom)))
    return {"partial_sections": sections, "domains_indexed": indexed}


def pseudo_relations_over(f: FiniteMap, g: FiniteMap, i: int, singletons_only: bool = False):
    """Image-level pseudo-relations over f, g with domain index ``i``.

    Each is a set of ``(x, y)`` with ``g y = x``, total on the fiber of ``i``.
    With ``singletons_only`` only the relations picking one ``y`` per ``x``.
    """
    g_fib = g.fibers()
    xs = f.fiber(i)
    options = []
    for x in xs:
        ys = g_fib[x]
        if singletons_only:
            options.append([(x, frozenset([y])) for y in ys])
            continue
        subsets = [frozenset(y for y, b in zip(ys, bits) if b)
                   for bits in itertools.product((False, True), repeat=len(ys))]
        options.append([(x, s) for s in subsets if s])
    for combo in itertools.product(*options):
        yield frozenset((x, y) for x, ys in combo for y in ys)


def relation_count(f: FiniteMap, g: FiniteMap, i: int) -> int:
    g_fib = g.fibers()
    n = 1
    for x in f.fiber(i):
        n *= 2 ** len(g_fib[x]) - 1
    return n


@dataclass
class FullnessReport:
    properties: dict
    entries: list = field(default_factory=list)
    misses: list = field(default_factory=list)
    mode: str = "exhaustive"

    @property
    def ok(self) -> bool:
        return all(self.properties.values()) and not self.misses

    def summary(self) -> dict:
        return {
            "properties": self.properties,
            "relations_checked": len(self.entries),
            "misses": len(self.misses),
            "mode": self.mode,
            "ok": self.ok,
            "note": "pseudo-relations enumerated at image level; membership depends only on the image",
        }


def _masks(fam: FullFamily):
    nY = len(fam.g.dom)
    rows = fam.rows_by_code()
    return [sum(1 << (x * nY + y) for x, y in r) for r in rows], nY


def check_fullness(fam: FullFamily, f: FiniteMap | None = None,
                   g: FiniteMap | None = None, budget: int = 200_000) -> FullnessReport:
    """For each index and each pseudo-relation over it, find a code whose
    rows all lie in the relation.

    When relations x codes exceeds ``budget`` only the relations choosing a
    single ``y`` per ``x`` are enumerated; every total relation contains one
    of those, and a code covering a subrelation covers the relation.
    """
    f = fam.f if f is None else f
    g = fam.g if g is None else g
    if f != fam.f or g != fam.g:
        raise BoundaryError("family was built over different maps")
    report = FullnessReport(family_properties(fam))
    work = sum(relation_count(f, g, i) * max(1, len(fam.codes_over(i)))
               for i in range(len(f.cod)))
    minimal_only = work > budget
    if minimal_only:
        report.mode = "singleton-choice relations"
    masks, nY = _masks(fam)
    for i in range(len(f.cod)):
        codes = fam.codes_over(i)
        exact: dict[int, int] = {}
        for c in reversed(codes):
            exact[masks[c]] = c
        for r in pseudo_relations_over(f, g, i, minimal_only):
            rmask = sum(1 << (x * nY + y) for x, y in r)
            if minimal_only and report.properties["domains_indexed"]:
                # a code has a row at every point of the fiber, so one inside
                # a single-choice relation has exactly its rows
                hit = exact.get(rmask)
            else:
                hit = next((c for c in codes if masks[c] & ~rmask == 0), None)
            report.entries.append((i, r, hit))
            if hit is None:
                report.misses.append((i, r))
    return report


def covering_code(fam: FullFamily, i: int, rel: Span) -> int | None:
    """First code over ``i`` whose rows lie in the image of an arbitrary span."""
    for c in fam.codes_over(i):
        rows = [(x, y) for cc, x, y in zip(fam.alpha_code.table, fam.alpha_x.table,
                                           fam.eps.table) if cc == c]
        if all(rel.holds(fam.f.dom.labels[x], fam.g.dom.labels[y]) for x, y in rows):
            return c
    return None


def check_image_sufficiency(fam: FullFamily, samples: int = 20, seed: int = 0,
                            max_copies: int = 3) -> bool:
    """Padded spans with a given image get the same fullness verdict as the image."""
    rng = random.Random(seed)
    X, Y = fam.f.dom, fam.g.dom
    rels_over = {i: list(pseudo_relations_over(fam.f, fam.g, i)) for i in range(len(fam.f.cod))}
    indices = [i for i, rels in rels_over.items() if rels]
    if not indices:
        return True
    masks, nY = _masks(fam)
    for _ in range(samples):
        i = rng.choice(indices)
        r = rng.choice(rels_over[i])
        rows = []
        for x, y in sorted(r):
            rows += [(X.labels[x], Y.labels[y])] * rng.randint(1, max_copies)
        rng.shuffle(rows)
        span = Span.from_tuples((X, Y), rows)
        rmask = sum(1 << (x * nY + y) for x, y in r)
        by_image = next((c for c in fam.codes_over(i) if masks[c] & ~rmask == 0), None)
        if covering_code(fam, i, span) != by_image:
            return False
    return True


def forall_along(f: FiniteMap, g: Presubobject, strategy: Strategy = MINIMAL,
                 cap: int = DEFAULT_CODE_CAP) -> Presubobject:
    """Right adjoint to pulling back along ``f``, via a full family over ``f, g``."""
    if g.target != f.dom:
        raise BoundaryError(f"presubobject must live over dom(f): {g.target!r} vs {f.dom!r}")
    fam = build_full_family(f, g.rep, strategy, cap)
    return fam.presubobject()


@dataclass
class AdjunctionReport:
    checked: int = 0
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def check_forall_adjunction(f: FiniteMap, g: Presubobject, max_size: int = 3,
                            strategy: Strategy = MINIMAL,
                            report: AdjunctionReport | None = None) -> AdjunctionReport:
    """``h <= forall_f g`` iff ``f* h <= g`` for every ``h: Z -> I``, ``|Z| <= max_size``."""
    report = AdjunctionReport() if report is None else report
    phi = forall_along(f, g, strategy)
    I = f.cod
    for n in range(max_size + 1):
        Z = canonical_set(n, "z")
        for hm in enumerate_maps(Z, I):
            h = Presubobject(I, hm)
            lhs = psub_leq(h, phi)
            rhs = psub_leq(pullback_along(f, h, strategy), g)
            report.checked += 1
            if lhs != rhs:
                report.violations.append((f, g.rep, hm, lhs, rhs))
    return report
