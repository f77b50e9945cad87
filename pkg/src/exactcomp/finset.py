"""Finite sets, total maps between them, and their strict finite (co)limits.

Elements are opaque string labels. A set's label order is its canonical
order: every enumeration in the package (maps, sections, least preimages)
follows it, which keeps reports reproducible.
"""
from __future__ import annotations

import itertools
import json
from typing import Callable, Iterable, Iterator, Mapping, NamedTuple, Sequence

from .errors import BoundaryError, CompositionError, ElementError


def distinct_labels(preferred: Sequence[str], parts: Sequence[tuple]) -> tuple[str, ...]:
    """Use the readable labels unless they collide; then fall back to JSON."""
    if len(set(preferred)) == len(preferred):
        return tuple(preferred)
    return tuple(json.dumps(list(p)) for p in parts)


class FiniteSet:
    __slots__ = ("labels", "_index", "_hash")

    def __init__(self, labels: Iterable[str] = ()):
        labels = tuple(labels)
        index = {}
        for i, lab in enumerate(labels):
            if not isinstance(lab, str):
                raise TypeError(f"labels must be strings, got {lab!r}")
            if lab in index:
                raise ValueError(f"duplicate label {lab!r}")
            index[lab] = i
        self.labels = labels
        self._index = index
        self._hash = hash(labels)

    @property
    def size(self) -> int:
        return len(self.labels)

    def __len__(self):
        return len(self.labels)

    def __iter__(self) -> Iterator[str]:
        return iter(self.labels)

    def __contains__(self, label) -> bool:
        return label in self._index

    def __getitem__(self, i: int) -> str:
        return self.labels[i]

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise ElementError(f"{label!r} is not an element of {self!r}") from None

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, FiniteSet):
            return NotImplemented
        return self._hash == other._hash and self.labels == other.labels

    def __hash__(self):
        return self._hash

    def __repr__(self):
        if len(self.labels) > 8:
            shown = ", ".join(self.labels[:8]) + ", ..."
        else:
            shown = ", ".join(self.labels)
        return "{" + shown + "}"


class FiniteMap:
    """A total function ``dom -> cod`` stored as a table of codomain indices."""

    __slots__ = ("dom", "cod", "table", "_hash")

    def __init__(self, dom: FiniteSet, cod: FiniteSet, table: Sequence[int]):
        table = tuple(table)
        if len(table) != len(dom):
            raise ValueError(f"table has {len(table)} entries for a domain of size {len(dom)}")
        n = len(cod)
        for j in table:
            if not 0 <= j < n:
                raise ValueError(f"table entry {j} outside codomain of size {n}")
        self.dom = dom
        self.cod = cod
        self.table = table
        self._hash = hash(table)

    @classmethod
    def from_labels(cls, dom: FiniteSet, cod: FiniteSet,
                    assignment: Mapping[str, str] | Callable[[str], str]) -> "FiniteMap":
        get = assignment if callable(assignment) else assignment.__getitem__
        table = []
        for x in dom:
            try:
                y = get(x)
            except KeyError:
                raise ElementError(f"no value assigned to {x!r}") from None
            table.append(cod.index(y))
        return cls(dom, cod, table)

    def __call__(self, label: str) -> str:
        return self.cod.labels[self.table[self.dom.index(label)]]

    def at(self, i: int) -> int:
        return self.table[i]

    def as_dict(self) -> dict[str, str]:
        cod = self.cod.labels
        return {x: cod[j] for x, j in zip(self.dom.labels, self.table)}

    def image(self) -> frozenset[int]:
        return frozenset(self.table)

    def fiber(self, j: int) -> list[int]:
        return [i for i, v in enumerate(self.table) if v == j]

    def fibers(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(len(self.cod))]
        for i, v in enumerate(self.table):
            out[v].append(i)
        return out

    def is_injective(self) -> bool:
        return len(set(self.table)) == len(self.table)

    def is_surjective(self) -> bool:
        return len(set(self.table)) == len(self.cod)

    def is_bijective(self) -> bool:
        return len(self.dom) == len(self.cod) and self.is_injective()

    def __eq__(self, other):
        if not isinstance(other, FiniteMap):
            return NotImplemented
        return self.table == other.table and self.dom == other.dom and self.cod == other.cod

    def __hash__(self):
        return self._hash

    def __repr__(self):
        pairs = ", ".join(f"{x}->{y}" for x, y in list(self.as_dict().items())[:8])
        if len(self.dom) > 8:
            pairs += ", ..."
        return f"FiniteMap({pairs})"


def identity(X: FiniteSet) -> FiniteMap:
    return FiniteMap(X, X, range(len(X)))


def constant(X: FiniteSet, Y: FiniteSet, y: str) -> FiniteMap:
    j = Y.index(y)
    return FiniteMap(X, Y, [j] * len(X))


def compose(g: FiniteMap, f: FiniteMap) -> FiniteMap:
    """``g . f``; raises CompositionError when ``cod f != dom g``."""
    if f.cod != g.dom:
        raise CompositionError(
            f"cannot compose: cod(f) = {f.cod!r} but dom(g) = {g.dom!r}")
    gt = g.table
    return FiniteMap(f.dom, g.cod, [gt[j] for j in f.table])


def _check_parallel(f: FiniteMap, g: FiniteMap) -> None:
    if f.dom != g.dom or f.cod != g.cod:
        raise BoundaryError(
            f"arrows are not parallel: {f.dom!r}->{f.cod!r} vs {g.dom!r}->{g.cod!r}")


class Product(NamedTuple):
    obj: FiniteSet
    pr1: FiniteMap
    pr2: FiniteMap

    def pair(self, f: FiniteMap, g: FiniteMap) -> FiniteMap:
        if f.dom != g.dom:
            raise BoundaryError(f"pairing needs a common domain: {f.dom!r} vs {g.dom!r}")
        if f.cod != self.pr1.cod or g.cod != self.pr2.cod:
            raise BoundaryError("pairing legs do not match the product's factors")
        nb = len(self.pr2.cod)
        return FiniteMap(f.dom, self.obj, [a * nb + b for a, b in zip(f.table, g.table)])


def product(A: FiniteSet, B: FiniteSet) -> Product:
    """Cartesian product in row-major order (A index most significant)."""
    pairs = [(a, b) for a in A for b in B]
    P = FiniteSet(distinct_labels([f"({a},{b})" for a, b in pairs], pairs))
    nb = len(B)
    pr1 = FiniteMap(P, A, [k // nb for k in range(len(P))]) if nb else FiniteMap(P, A, [])
    pr2 = FiniteMap(P, B, [k % nb for k in range(len(P))]) if nb else FiniteMap(P, B, [])
    return Product(P, pr1, pr2)


class ProductN(NamedTuple):
    obj: FiniteSet
    projections: tuple[FiniteMap, ...]

    def tuple_map(self, maps: Sequence[FiniteMap]) -> FiniteMap:
        if len(maps) != len(self.projections):
            raise BoundaryError(f"expected {len(self.projections)} components, got {len(maps)}")
        if not maps:
            raise BoundaryError("a nullary tuple needs an explicit domain; use to_terminal")
        dom = maps[0].dom
        for m, p in zip(maps, self.projections):
            if m.dom != dom:
                raise BoundaryError("tuple components must share a domain")
            if m.cod != p.cod:
                raise BoundaryError(f"component lands in {m.cod!r}, factor is {p.cod!r}")
        sizes = [len(p.cod) for p in self.projections]
        table = []
        for i in range(len(dom)):
            k = 0
            for m, n in zip(maps, sizes):
                k = k * n + m.table[i]
            table.append(k)
        return FiniteMap(dom, self.obj, table)

    def index_of(self, coords: Sequence[int]) -> int:
        k = 0
        for c, p in zip(coords, self.projections):
            k = k * len(p.cod) + c
        return k


def product_many(sets: Sequence[FiniteSet]) -> ProductN:
    """Iterated product; a single factor is returned as itself."""
    sets = list(sets)
    if len(sets) == 1:
        return ProductN(sets[0], (identity(sets[0]),))
    tuples = list(itertools.product(*[s.labels for s in sets]))
    P = FiniteSet(distinct_labels(["(" + ",".join(t) + ")" for t in tuples], tuples))
    coords = list(itertools.product(*[range(len(s)) for s in sets]))
    projections = tuple(
        FiniteMap(P, s, [c[n] for c in coords]) for n, s in enumerate(sets))
    return ProductN(P, projections)


def equalizer(f: FiniteMap, g: FiniteMap) -> tuple[FiniteSet, FiniteMap]:
    _check_parallel(f, g)
    keep = [i for i in range(len(f.dom)) if f.table[i] == g.table[i]]
    E = FiniteSet(f.dom.labels[i] for i in keep)
    return E, FiniteMap(E, f.dom, keep)


class Coproduct(NamedTuple):
    obj: FiniteSet
    inl: FiniteMap
    inr: FiniteMap

    def copair(self, f: FiniteMap, g: FiniteMap) -> FiniteMap:
        if f.cod != g.cod:
            raise BoundaryError(f"copairing needs a common codomain: {f.cod!r} vs {g.cod!r}")
        if f.dom != self.inl.dom or g.dom != self.inr.dom:
            raise BoundaryError("copairing legs do not match the summands")
        return FiniteMap(self.obj, f.cod, f.table + g.table)


def coproduct(A: FiniteSet, B: FiniteSet) -> Coproduct:
    S = FiniteSet([f"L:{a}" for a in A] + [f"R:{b}" for b in B])
    na = len(A)
    return Coproduct(S, FiniteMap(A, S, range(na)), FiniteMap(B, S, range(na, na + len(B))))


def terminal() -> FiniteSet:
    return FiniteSet(["*"])


def initial() -> FiniteSet:
    return FiniteSet()


def to_terminal(X: FiniteSet) -> FiniteMap:
    return FiniteMap(X, terminal(), [0] * len(X))


def enumerate_maps(A: FiniteSet, B: FiniteSet) -> Iterator[FiniteMap]:
    """All ``|B|**|A|`` maps, lexicographic with the first element most significant."""
    for table in itertools.product(range(len(B)), repeat=len(A)):
        yield FiniteMap(A, B, table)


def least_map(dom: FiniteSet, cod: FiniteSet,
              candidates: Sequence[Sequence[int]]) -> FiniteMap | None:
    """First map in ``enumerate_maps`` order whose value at each ``i`` lies in
    ``candidates[i]``.

    The constraint is pointwise, so the lexicographically first solution takes
    the least candidate everywhere; None when some element has no candidate.
    """
    table = []
    for cands in candidates:
        if not cands:
            return None
        table.append(min(cands))
    return FiniteMap(dom, cod, table)


def sections_of(f: FiniteMap) -> list[FiniteMap]:
    """Every ``s`` with ``f . s = id``, in canonical order."""
    fibers = f.fibers()
    if any(not fib for fib in fibers):
        return []
    return [FiniteMap(f.cod, f.dom, t) for t in itertools.product(*fibers)]


def least_section(f: FiniteMap) -> FiniteMap | None:
    """The least-preimage section, or None for a non-surjection."""
    return least_map(f.cod, f.dom, f.fibers())


def restrict(f: FiniteMap, sub: FiniteMap) -> FiniteMap:
    return compose(f, sub)


def subset(X: FiniteSet, indices: Iterable[int]) -> tuple[FiniteSet, FiniteMap]:
    """Subset of X in canonical order together with its inclusion."""
    keep = sorted(set(indices))
    S = FiniteSet(X.labels[i] for i in keep)
    return S, FiniteMap(S, X, keep)


def canonical_set(n: int, prefix: str = "e") -> FiniteSet:
    return FiniteSet(f"{prefix}{i}" for i in range(n))
