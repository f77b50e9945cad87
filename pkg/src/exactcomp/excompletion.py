"""The exact completion over finite sets.

Objects are carriers with a pseudo-equivalence relation, arrows are maps of
carriers that respect the relations, and two arrows are equal when they agree
up to the target's relation. Because every finite set is a choice object, all
of this can be decided on elements; the witness-level routes are kept as
audits.
"""
from __future__ import annotations

import itertools
from functools import cached_property
from typing import Hashable, Sequence

from .errors import BoundaryError, InternalInconsistency, NotAnEquivalence
from .finset import (
    FiniteMap,
    FiniteSet,
    compose,
    coproduct,
    enumerate_maps,
    identity,
    initial,
    least_map,
    product,
    terminal,
)
from .weaklim import (
    MINIMAL,
    PseudoEqRel,
    Span,
    Strategy,
    diagonal_span,
    find_pseudo_eqrel_witnesses,
    is_choice_object,
    relation_properties,
)


class UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x: int, y: int) -> None:
        rx, ry = self.find(x), self.find(y)
        if rx != ry:
            # keep the smaller index as root so roots are least elements
            if ry < rx:
                rx, ry = ry, rx
            self.parent[ry] = rx


def _normalise(keys: Sequence[Hashable]) -> tuple[int, ...]:
    """Class ids numbered by least member in canonical order."""
    seen: dict = {}
    return tuple(seen.setdefault(k, len(seen)) for k in keys)


class ExObj:
    """A carrier together with an equivalence relation presented by a span."""

    def __init__(self, carrier: FiniteSet, cls: Sequence[int], rel: Span | None = None,
                 strategy: Strategy = MINIMAL, eqrel: PseudoEqRel | None = None):
        self.carrier = carrier
        self.cls = _normalise(cls)
        self.strategy = strategy
        self._rel = rel
        if eqrel is not None:
            eqrel.check()
            self.__dict__["eqrel"] = eqrel

    @classmethod
    def from_span(cls, rel: Span, strategy: Strategy = MINIMAL) -> "ExObj":
        if len(rel.legs) != 2 or rel.left.cod != rel.right.cod:
            raise BoundaryError("an object of the completion needs a span over X, X")
        X = rel.left.cod
        uf = UnionFind(len(X))
        img = rel.image()
        for a, b in img:
            uf.union(a, b)
        ids = [uf.find(i) for i in range(len(X))]
        sizes: dict[int, int] = {}
        for r in ids:
            sizes[r] = sizes.get(r, 0) + 1
        if len(img) != sum(n * n for n in sizes.values()):
            props = relation_properties(rel)
            bad = [k for k, v in props.items() if not v]
            raise NotAnEquivalence(f"relation is not {', '.join(bad)}")
        return cls(X, ids, rel, strategy)

    @classmethod
    def from_classes(cls, carrier: FiniteSet, keys: Sequence[Hashable],
                     strategy: Strategy = MINIMAL) -> "ExObj":
        if len(keys) != len(carrier):
            raise BoundaryError("one class key per element is required")
        return cls(carrier, keys, None, strategy)

    @classmethod
    def from_blocks(cls, carrier: FiniteSet, blocks: Sequence[Sequence[str]],
                    strategy: Strategy = MINIMAL) -> "ExObj":
        keys: list = [None] * len(carrier)
        for b, block in enumerate(blocks):
            for x in block:
                keys[carrier.index(x)] = b
        for i, k in enumerate(keys):
            if k is None:
                keys[i] = ("singleton", i)
        return cls.from_classes(carrier, keys, strategy)

    @property
    def n_classes(self) -> int:
        return max(self.cls) + 1 if self.cls else 0

    @cached_property
    def classes(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.n_classes)]
        for i, c in enumerate(self.cls):
            out[c].append(i)
        return out

    def related(self, i: int, j: int) -> bool:
        return self.cls[i] == self.cls[j]

    def related_labels(self, x: str, y: str) -> bool:
        return self.related(self.carrier.index(x), self.carrier.index(y))

    def pairs(self) -> frozenset[tuple[int, int]]:
        return frozenset((a, b) for block in self.classes for a in block for b in block)

    @property
    def rel(self) -> Span:
        if self._rel is None:
            rows = sorted(self.pairs())
            self._rel = Span.from_index_rows((self.carrier, self.carrier), rows, "w")
        return self._rel

    @cached_property
    def eqrel(self) -> PseudoEqRel:
        """Reflexivity, symmetry and transitivity witnesses, found on first use."""
        found = find_pseudo_eqrel_witnesses(self.rel, self.strategy)
        if found is None:
            raise InternalInconsistency("equivalence relation without witnesses")
        return found

    def with_strategy(self, strategy: Strategy) -> "ExObj":
        return ExObj(self.carrier, self.cls, self._rel, strategy)

    def same_as(self, other: "ExObj") -> bool:
        return self.carrier == other.carrier and self.cls == other.cls

    def __repr__(self):
        blocks = ["{" + ",".join(self.carrier.labels[i] for i in b) + "}" for b in self.classes]
        return "ExObj(" + " ".join(blocks) + ")"


def gamma(X: FiniteSet, strategy: Strategy = MINIMAL) -> ExObj:
    """The discrete object on X (diagonal relation)."""
    return ExObj(X, range(len(X)), diagonal_span(X), strategy)


def respects(rep: FiniteMap, src: ExObj, dst: ExObj) -> bool:
    """Element test: related inputs go to related outputs."""
    seen: dict[int, int] = {}
    for i, j in enumerate(rep.table):
        c, d = src.cls[i], dst.cls[j]
        if seen.setdefault(c, d) != d:
            return False
    return True


class ExArrow:
    __slots__ = ("src", "dst", "rep")

    def __init__(self, src: ExObj, dst: ExObj, rep: FiniteMap):
        if rep.dom != src.carrier or rep.cod != dst.carrier:
            raise BoundaryError("representative does not connect the carriers")
        if not respects(rep, src, dst):
            raise NotAnEquivalence("representative does not respect the relations")
        self.src = src
        self.dst = dst
        self.rep = rep

    def on_classes(self) -> tuple[int, ...]:
        """The induced map of quotients, indexed by source class."""
        out = [0] * self.src.n_classes
        for block_id, block in enumerate(self.src.classes):
            out[block_id] = self.dst.cls[self.rep.table[block[0]]]
        return tuple(out)

    def __call__(self, x: str) -> str:
        return self.rep(x)

    def __repr__(self):
        return f"ExArrow({self.rep!r})"


def tracking_map(rep: FiniteMap, src: ExObj, dst: ExObj) -> FiniteMap | None:
    """Least ``f^: R -> S`` with ``s . f^ = (f x f) . r``, if any."""
    r, s = src.rel, dst.rel
    over = s.witnesses()
    f = rep.table
    cands = [over.get((f[r.left.table[a]], f[r.right.table[a]]), ())
             for a in range(len(r.apex))]
    return least_map(r.apex, s.apex, cands)


def ex_arrow_validate(rep: FiniteMap, src: ExObj, dst: ExObj) -> ExArrow | None:
    """ExArrow when ``rep`` is compatible, else None; the element test and
    the tracking-map search must agree."""
    if rep.dom != src.carrier or rep.cod != dst.carrier:
        raise BoundaryError("representative does not connect the carriers")
    by_elements = respects(rep, src, dst)
    by_tracking = tracking_map(rep, src, dst) is not None
    if by_elements != by_tracking:
        raise InternalInconsistency("element test and tracking-map search disagree")
    return ExArrow(src, dst, rep) if by_elements else None


def ex_id(A: ExObj) -> ExArrow:
    return ExArrow(A, A, identity(A.carrier))


def ex_compose(g: ExArrow, f: ExArrow) -> ExArrow:
    if not f.dst.same_as(g.src):
        raise BoundaryError("arrows are not composable in the completion")
    return ExArrow(f.src, g.dst, compose(g.rep, f.rep))


def _check_parallel(f: ExArrow, g: ExArrow) -> None:
    if not (f.src.same_as(g.src) and f.dst.same_as(g.dst)):
        raise BoundaryError("arrows in the completion are not parallel")


def ex_eq(f: ExArrow, g: ExArrow, audit: bool = False) -> bool:
    """Pointwise relatedness; with ``audit`` also searches ``h`` with ``s h = <f, g>``."""
    _check_parallel(f, g)
    cls = f.dst.cls
    same = all(cls[a] == cls[b] for a, b in zip(f.rep.table, g.rep.table))
    if audit:
        over = f.dst.rel.witnesses()
        h = least_map(f.src.carrier, f.dst.rel.apex,
                      [over.get((a, b), ()) for a, b in zip(f.rep.table, g.rep.table)])
        if (h is not None) != same:
            raise InternalInconsistency("element test and witness search disagree on equality")
    return same


def canonical_quotient(A: ExObj) -> tuple[FiniteSet, FiniteMap]:
    """Set of classes (labelled by least member) and the quotient map."""
    Q = FiniteSet(f"[{A.carrier.labels[b[0]]}]" for b in A.classes)
    return Q, FiniteMap(A.carrier, Q, A.cls)


def quotient_map(f: ExArrow) -> FiniteMap:
    """The functor to finite sets on arrows."""
    Qa, _ = canonical_quotient(f.src)
    Qb, _ = canonical_quotient(f.dst)
    return FiniteMap(Qa, Qb, f.on_classes())


def ex_quotient(A: ExObj) -> ExArrow:
    """The cover from the discrete object on A's carrier onto A."""
    return ExArrow(gamma(A.carrier, A.strategy), A, identity(A.carrier))


def kernel_relation(f: ExArrow) -> frozenset[tuple[int, int]]:
    """Pairs ``(a, a')`` of the source carrier with ``f a ~ f a'``."""
    cls = f.dst.cls
    t = f.rep.table
    n = len(t)
    return frozenset((a, b) for a in range(n) for b in range(n) if cls[t[a]] == cls[t[b]])


def ex_kernel_pair(f: ExArrow) -> tuple[ExObj, ExArrow, ExArrow]:
    A = f.src
    pairs = sorted(kernel_relation(f))
    K0 = FiniteSet(f"({A.carrier.labels[a]},{A.carrier.labels[b]})" for a, b in pairs)
    K = ExObj.from_classes(K0, [(A.cls[a], A.cls[b]) for a, b in pairs], A.strategy)
    k1 = ExArrow(K, A, FiniteMap(K0, A.carrier, [a for a, _ in pairs]))
    k2 = ExArrow(K, A, FiniteMap(K0, A.carrier, [b for _, b in pairs]))
    return K, k1, k2


class ExProduct:
    def __init__(self, A: ExObj, B: ExObj):
        P = product(A.carrier, B.carrier)
        RA, RB = A.rel, B.rel
        RR = product(RA.apex, RB.apex)
        legs = [P.pair(compose(RA.legs[n], RR.pr1), compose(RB.legs[n], RR.pr2)) for n in (0, 1)]
        self.obj = ExObj.from_span(Span(RR.obj, legs), A.strategy)
        self._prod = P
        self.pr1 = ExArrow(self.obj, A, P.pr1)
        self.pr2 = ExArrow(self.obj, B, P.pr2)

    def __iter__(self):
        return iter((self.obj, self.pr1, self.pr2))

    def pair(self, f: ExArrow, g: ExArrow) -> ExArrow:
        return ExArrow(f.src, self.obj, self._prod.pair(f.rep, g.rep))


def ex_product(A: ExObj, B: ExObj) -> ExProduct:
    return ExProduct(A, B)


class ExSum:
    def __init__(self, A: ExObj, B: ExObj):
        S = coproduct(A.carrier, B.carrier)
        RA, RB = A.rel, B.rel
        RS = coproduct(RA.apex, RB.apex)
        legs = [RS.copair(compose(S.inl, RA.legs[n]), compose(S.inr, RB.legs[n])) for n in (0, 1)]
        self.obj = ExObj.from_span(Span(RS.obj, legs), A.strategy)
        self._sum = S
        self.inl = ExArrow(A, self.obj, S.inl)
        self.inr = ExArrow(B, self.obj, S.inr)

    def __iter__(self):
        return iter((self.obj, self.inl, self.inr))

    def copair(self, f: ExArrow, g: ExArrow) -> ExArrow:
        return ExArrow(self.obj, f.dst, self._sum.copair(f.rep, g.rep))


def ex_sum(A: ExObj, B: ExObj) -> ExSum:
    return ExSum(A, B)


def ex_terminal(strategy: Strategy = MINIMAL) -> ExObj:
    return gamma(terminal(), strategy)


def ex_initial(strategy: Strategy = MINIMAL) -> ExObj:
    return gamma(initial(), strategy)


def ex_equalizer(f: ExArrow, g: ExArrow) -> tuple[ExObj, ExArrow]:
    _check_parallel(f, g)
    A = f.src
    cls = f.dst.cls
    keep = [i for i in range(len(A.carrier)) if cls[f.rep.table[i]] == cls[g.rep.table[i]]]
    E0 = FiniteSet(A.carrier.labels[i] for i in keep)
    E = ExObj.from_classes(E0, [A.cls[i] for i in keep], A.strategy)
    return E, ExArrow(E, A, FiniteMap(E0, A.carrier, keep))


def ex_coequalizer(f: ExArrow, g: ExArrow) -> tuple[ExObj, ExArrow]:
    """Target carrier with the relation generated by ``f a ~ g a``."""
    _check_parallel(f, g)
    B = f.dst
    uf = UnionFind(len(B.carrier))
    for i, c in enumerate(B.cls):
        uf.union(i, B.classes[c][0])
    for a, b in zip(f.rep.table, g.rep.table):
        uf.union(a, b)
    Q = ExObj.from_classes(B.carrier, [uf.find(i) for i in range(len(B.carrier))], B.strategy)
    return Q, ExArrow(B, Q, identity(B.carrier))


def ex_image_factorization(f: ExArrow) -> tuple[ExArrow, ExArrow]:
    """``f = mono . cover`` through the source carrier with the kernel relation."""
    A = f.src
    Im = ExObj.from_classes(A.carrier, [f.dst.cls[j] for j in f.rep.table], A.strategy)
    return ExArrow(A, Im, identity(A.carrier)), ExArrow(Im, f.dst, f.rep)


def is_cover(f: ExArrow) -> bool:
    return len(set(f.on_classes())) == f.dst.n_classes


def is_mono(f: ExArrow) -> bool:
    m = f.on_classes()
    return len(set(m)) == len(m)


def find_inverse(f: ExArrow, exhaustive_limit: int = 4096) -> ExArrow | None:
    """Search for ``g`` with ``g f = id`` and ``f g = id`` in the completion.

    Small hom-sets are searched exhaustively; otherwise the candidate sending
    each element to the least element mapped into its class is tested.
    """
    A, B = f.src, f.dst
    def works(rep):
        if not respects(rep, B, A):
            return None
        g = ExArrow(B, A, rep)
        if ex_eq(ex_compose(g, f), ex_id(A)) and ex_eq(ex_compose(f, g), ex_id(B)):
            return g
        return None

    if len(A.carrier) ** len(B.carrier) <= exhaustive_limit:
        for rep in enumerate_maps(B.carrier, A.carrier):
            g = works(rep)
            if g is not None:
                return g
        return None
    cands = [[a for a in range(len(A.carrier)) if B.cls[f.rep.table[a]] == B.cls[b]]
             for b in range(len(B.carrier))]
    rep = least_map(B.carrier, A.carrier, cands)
    return None if rep is None else works(rep)


def is_iso(f: ExArrow, audit: bool = True) -> bool:
    by_elements = is_cover(f) and is_mono(f)
    if audit and by_elements != (find_inverse(f) is not None):
        raise InternalInconsistency("bijectivity on classes disagrees with the inverse search")
    return by_elements


def ex_hom(A: ExObj, B: ExObj) -> list[ExArrow]:
    """One representative per arrow ``A -> B``, deduplicated by equality."""
    out, seen = [], set()
    for rep in enumerate_maps(A.carrier, B.carrier):
        if not respects(rep, A, B):
            continue
        f = ExArrow(A, B, rep)
        key = f.on_classes()
        if key not in seen:
            seen.add(key)
            out.append(f)
    return out


def global_elements(A: ExObj) -> list[ExArrow]:
    """Arrows from the terminal object, one per class."""
    one = ex_terminal(A.strategy)
    return [ExArrow(one, A, FiniteMap(one.carrier, A.carrier, [block[0]])) for block in A.classes]


def ex_member(f: ExArrow, b: int) -> bool:
    """``b`` lies in the image of ``f`` up to the target's relation."""
    c = f.dst.cls[b]
    return any(f.dst.cls[j] == c for j in f.rep.table)


def find_ex_iso(A: ExObj, B: ExObj) -> ExArrow | None:
    """An isomorphism matching classes in canonical order, if counts agree."""
    if A.n_classes != B.n_classes:
        return None
    rep = FiniteMap(A.carrier, B.carrier, [B.classes[A.cls[i]][0] for i in range(len(A.carrier))])
    f = ExArrow(A, B, rep)
    return f if is_iso(f, audit=False) else None


def partitions_coarser(A: ExObj) -> list[tuple[int, ...]]:
    """All equivalence relations containing A's, as class-id tuples."""
    out = []
    for blocks in set_partitions(list(range(A.n_classes))):
        key = [0] * A.n_classes
        for b, block in enumerate(blocks):
            for c in block:
                key[c] = b
        out.append(_normalise([key[c] for c in A.cls]))
    return out


def set_partitions(items: list) -> list[list[list]]:
    if not items:
        return [[]]
    first, rest = items[0], items[1:]
    out = []
    for part in set_partitions(rest):
        out.append([[first]] + part)
        for n in range(len(part)):
            out.append(part[:n] + [[first] + part[n]] + part[n + 1:])
    return out


_CHOICE_CHECKED = False


def assert_choice_hypothesis(max_size: int = 3) -> None:
    """Equality of arrows is decided on elements, which is sound only when
    every finite set is a choice object; checked once per process."""
    global _CHOICE_CHECKED
    if _CHOICE_CHECKED:
        return
    for n in range(max_size + 1):
        if not is_choice_object(FiniteSet(f"c{i}" for i in range(n))):
            raise InternalInconsistency(f"a set of size {n} is not a choice object")
    _CHOICE_CHECKED = True


def all_objects(max_size: int, prefix: str = "e", strategy: Strategy = MINIMAL) -> list[ExObj]:
    """Every equivalence relation on ``{prefix0..}`` of each size up to max_size."""
    out = []
    for n in range(max_size + 1):
        X = FiniteSet(f"{prefix}{i}" for i in range(n))
        for blocks in set_partitions(list(range(n))):
            key = [0] * n
            for b, block in enumerate(blocks):
                for i in block:
                    key[i] = b
            out.append(ExObj.from_classes(X, key, strategy))
    return out


def compatible_maps(A: ExObj, B: ExObj) -> list[ExArrow]:
    """Every representative ``A -> B`` (not deduplicated)."""
    return [ExArrow(A, B, rep) for rep in enumerate_maps(A.carrier, B.carrier)
            if respects(rep, A, B)]


def class_level_arrows(A: ExObj, B: ExObj) -> list[tuple[int, ...]]:
    return list(itertools.product(range(B.n_classes), repeat=A.n_classes))
