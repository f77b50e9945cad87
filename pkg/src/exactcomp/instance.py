"""JSON instance documents: named finite sets, maps, relations and (f, g) pairs.

Example::

    {"sets": {"X": ["x0", "x1"], "I": ["i"]},
     "maps": {"f": {"dom": "X", "cod": "I", "table": {"x0": "i", "x1": "i"}}},
     "relations": {"R": {"on": ["X", "X"], "pairs": [["x0", "x0"], ["x1", "x1"]]}},
     "pairs": {"p": {"f": "f", "g": "g", "eq": {"X": "R"}}}}

Relations are spans: each listed row is one apex element, so repeated rows
give several witnesses for the same pair. A pair's ``eq`` names, per set,
the relation to use as its equivalence; other sets get the diagonal.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

from .errors import InstanceError
from .excompletion import ExArrow, ExObj, gamma
from .finset import FiniteMap, FiniteSet
from .weaklim import MINIMAL, Span, Strategy

TOP_KEYS = ("sets", "maps", "relations", "pairs")


@dataclass
class InstanceDocument:
    sets: dict = field(default_factory=dict)        # name -> FiniteSet
    maps: dict = field(default_factory=dict)        # name -> (dom name, cod name, FiniteMap)
    relations: dict = field(default_factory=dict)   # name -> (list of set names, Span)
    pairs: dict = field(default_factory=dict)       # name -> {"f", "g", "eq"}

    def set_name(self, X: FiniteSet) -> str:
        for name, S in self.sets.items():
            if S == X:
                return name
        raise KeyError(X)

    def to_json(self) -> dict:
        out: dict = {"sets": {k: list(v.labels) for k, v in self.sets.items()}}
        if self.maps:
            out["maps"] = {k: {"dom": d, "cod": c, "table": m.as_dict()}
                           for k, (d, c, m) in self.maps.items()}
        if self.relations:
            out["relations"] = {
                k: {"on": list(on), "pairs": [[span.feet[n].labels[span.legs[n].table[a]]
                                               for n in range(len(on))]
                                              for a in range(len(span.apex))]}
                for k, (on, span) in self.relations.items()}
        if self.pairs:
            out["pairs"] = {k: {"f": p["f"], "g": p["g"], "eq": dict(p["eq"])}
                            for k, p in self.pairs.items()}
        return out

    def equivalence_for(self, set_name: str, eq: dict, strategy: Strategy = MINIMAL) -> ExObj:
        X = self.sets[set_name]
        rel = eq.get(set_name)
        if rel is None:
            return gamma(X, strategy)
        return ExObj.from_span(self.relations[rel][1], strategy)

    def ex_pair(self, f_name: str, g_name: str, strategy: Strategy = MINIMAL) -> tuple[ExArrow, ExArrow]:
        """The pair as arrows of the completion, using the matching ``pairs`` entry if any."""
        for name in (f_name, g_name):
            if name not in self.maps:
                raise InstanceError(f"unknown map {name!r}")
        eq: dict = {}
        for p in self.pairs.values():
            if p["f"] == f_name and p["g"] == g_name:
                eq = p["eq"]
                break
        fd, fc, fm = self.maps[f_name]
        gd, gc, gm = self.maps[g_name]
        if gc != fd:
            raise InstanceError(f"map {g_name!r} lands in {gc!r} but {f_name!r} starts at {fd!r}")
        I = self.equivalence_for(fc, eq, strategy)
        X = self.equivalence_for(fd, eq, strategy)
        Y = self.equivalence_for(gd, eq, strategy)
        return ExArrow(X, I, fm), ExArrow(Y, X, gm)


def serialize(doc: InstanceDocument) -> str:
    return json.dumps(doc.to_json(), indent=2, sort_keys=True) + "\n"


class _Locator:
    """Finds the line and column of a key path in the source text."""

    def __init__(self, text: str):
        self.text = text

    def find(self, *path: str) -> tuple[int | None, int | None]:
        pos = 0
        found = None
        for part in path:
            token = json.dumps(part, ensure_ascii=False)
            hit = self.text.find(token, pos)
            if hit < 0:
                break
            found = hit
            pos = hit + len(token)
        return self.position(found)

    def position(self, offset: int | None) -> tuple[int | None, int | None]:
        if offset is None or offset < 0:
            return None, None
        line = self.text.count("\n", 0, offset) + 1
        col = offset - (self.text.rfind("\n", 0, offset) + 1) + 1
        return line, col

    def error(self, message: str, *path: str) -> InstanceError:
        return InstanceError(message, *self.find(*path))


def _no_duplicates(pairs):
    out = {}
    for k, v in pairs:
        if k in out:
            raise _DuplicateKey(k)
        out[k] = v
    return out


class _DuplicateKey(Exception):
    pass


def parse_instance(text: str) -> InstanceDocument:
    """Parse and validate; errors carry the line and column of the culprit."""
    loc = _Locator(text)
    try:
        raw = json.loads(text, object_pairs_hook=_no_duplicates)
    except json.JSONDecodeError as exc:
        raise InstanceError(f"invalid JSON: {exc.msg}", exc.lineno, exc.colno) from None
    except _DuplicateKey as exc:
        token = json.dumps(exc.args[0], ensure_ascii=False)
        first = text.find(token)
        second = text.find(token, first + 1)
        raise InstanceError(f"duplicate key {exc.args[0]!r}",
                            *loc.position(second if second >= 0 else first)) from None
    if not isinstance(raw, dict):
        raise InstanceError("an instance document must be a JSON object", 1, 1)
    for key in raw:
        if key not in TOP_KEYS:
            raise loc.error(f"unknown top-level key {key!r}", key)
    doc = InstanceDocument()

    for name, labels in (raw.get("sets") or {}).items():
        if not isinstance(labels, list) or not all(isinstance(x, str) for x in labels):
            raise loc.error(f"set {name!r} must be a list of strings", "sets", name)
        dup = next((x for i, x in enumerate(labels) if x in labels[:i]), None)
        if dup is not None:
            raise loc.error(f"duplicate label {dup!r} in set {name!r}", "sets", name)
        doc.sets[name] = FiniteSet(labels)

    def need_set(ref, *path) -> FiniteSet:
        if ref not in doc.sets:
            raise loc.error(f"unknown set {ref!r}", *path)
        return doc.sets[ref]

    for name, spec in (raw.get("maps") or {}).items():
        if not isinstance(spec, dict) or not {"dom", "cod", "table"} <= set(spec):
            raise loc.error(f"map {name!r} needs dom, cod and table", "maps", name)
        dom = need_set(spec["dom"], "maps", name, "dom")
        cod = need_set(spec["cod"], "maps", name, "cod")
        table = spec["table"]
        if isinstance(table, list):
            if len(table) != len(dom):
                raise loc.error(f"map {name!r} table has {len(table)} entries for {len(dom)} elements",
                                "maps", name, "table")
            table = dict(zip(dom.labels, table))
        if not isinstance(table, dict):
            raise loc.error(f"map {name!r} table must be an object", "maps", name, "table")
        for x in table:
            if x not in dom:
                raise loc.error(f"map {name!r}: {x!r} is not an element of {spec['dom']!r}",
                                "maps", name, "table", x)
        for x in dom:
            if x not in table:
                raise loc.error(f"map {name!r} is not total: no value for {x!r}", "maps", name, "table")
            if table[x] not in cod:
                raise loc.error(f"map {name!r}: {table[x]!r} is not an element of {spec['cod']!r}",
                                "maps", name, "table", x)
        doc.maps[name] = (spec["dom"], spec["cod"], FiniteMap.from_labels(dom, cod, table))

    for name, spec in (raw.get("relations") or {}).items():
        if not isinstance(spec, dict) or "on" not in spec or "pairs" not in spec:
            raise loc.error(f"relation {name!r} needs on and pairs", "relations", name)
        feet = [need_set(s, "relations", name, "on", s) for s in spec["on"]]
        rows = spec["pairs"]
        for row in rows:
            if len(row) != len(feet):
                raise loc.error(f"relation {name!r}: row {row} has the wrong arity", "relations", name)
            for x, foot, fname in zip(row, feet, spec["on"]):
                if x not in foot:
                    raise loc.error(f"relation {name!r}: {x!r} is not an element of {fname!r}",
                                    "relations", name, "pairs", x)
        doc.relations[name] = (list(spec["on"]), Span.from_tuples(feet, rows, "w"))

    for name, spec in (raw.get("pairs") or {}).items():
        for key in ("f", "g"):
            if spec.get(key) not in doc.maps:
                raise loc.error(f"pair {name!r}: unknown map {spec.get(key)!r}", "pairs", name, key)
        eq = spec.get("eq") or {}
        for s, r in eq.items():
            need_set(s, "pairs", name, "eq", s)
            if r not in doc.relations:
                raise loc.error(f"pair {name!r}: unknown relation {r!r}", "pairs", name, "eq", s)
            if doc.relations[r][0] != [s, s]:
                raise loc.error(f"pair {name!r}: relation {r!r} is not on {s!r} x {s!r}",
                                "pairs", name, "eq", s)
        doc.pairs[name] = {"f": spec["f"], "g": spec["g"], "eq": dict(eq)}
    return doc
