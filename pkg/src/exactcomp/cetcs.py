"""Audit of the set-theoretic axioms C1..C10 in the completion, weak
lextensivity of finite sets, and well-pointedness.

Every check is per-instance evidence over bounded sweeps. A failing check
records a witness that :func:`replay` can re-run in isolation.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .errors import CapExceeded
from .excompletion import (
    ExArrow,
    ExObj,
    all_objects,
    assert_choice_hypothesis,
    ex_compose,
    ex_coequalizer,
    ex_eq,
    ex_equalizer,
    ex_hom,
    ex_id,
    ex_image_factorization,
    ex_initial,
    ex_product,
    ex_quotient,
    ex_sum,
    ex_terminal,
    find_inverse,
    gamma,
    global_elements,
    is_cover,
    is_iso,
    is_mono,
    kernel_relation,
    partitions_coarser,
)
from .finset import (
    FiniteMap,
    FiniteSet,
    canonical_set,
    compose,
    coproduct,
    enumerate_maps,
    identity,
    product,
)
from .weaklim import MINIMAL, Strategy, factor_through, is_choice_object, weak_equalizer, weak_pullback

SCHEMA = "exactcomp.audit/1"
AXIOMS = ["C1", "C2", "C3", "C4", "C5", "C6", "C7", "C8", "C9", "C10"]


def obj_json(A: ExObj) -> dict:
    return {"carrier": list(A.carrier.labels), "classes": list(A.cls)}


def obj_from_json(d: dict, strategy: Strategy = MINIMAL) -> ExObj:
    return ExObj.from_classes(FiniteSet(d["carrier"]), d["classes"], strategy)


def arrow_json(f: ExArrow) -> dict:
    return {"src": obj_json(f.src), "dst": obj_json(f.dst), "table": list(f.rep.table)}


def arrow_from_json(d: dict, strategy: Strategy = MINIMAL) -> ExArrow:
    A, B = obj_from_json(d["src"], strategy), obj_from_json(d["dst"], strategy)
    return ExArrow(A, B, FiniteMap(A.carrier, B.carrier, d["table"]))


@dataclass
class Verdict:
    status: str                  # pass | fail | skipped
    checked: int = 0
    evidence: str = ""
    witness: dict | None = None
    reason: str = ""

    def as_dict(self) -> dict:
        d = {"status": self.status, "checked": self.checked}
        if self.evidence:
            d["evidence"] = self.evidence
        if self.witness is not None:
            d["witness"] = self.witness
        if self.reason:
            d["reason"] = self.reason
        return d


@dataclass
class AuditReport:
    strategy: str
    seed: int
    verdicts: dict = field(default_factory=dict)
    inventory: dict = field(default_factory=dict)
    skipped_instances: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(v.status != "fail" for v in self.verdicts.values())

    def statuses(self) -> dict:
        return {k: v.status for k, v in self.verdicts.items()}

    def as_dict(self) -> dict:
        return {
            "schema": SCHEMA,
            "strategy": self.strategy,
            "seed": self.seed,
            "inventory": self.inventory,
            "skipped_instances": self.skipped_instances,
            "axioms": {k: self.verdicts[k].as_dict() for k in AXIOMS if k in self.verdicts},
            "ok": self.ok,
        }


class _Sweep:
    """Counts checks and keeps the first failure as a replayable witness."""

    def __init__(self, evidence: str = ""):
        self.checked = 0
        self.witness = None
        self.evidence = evidence

    def check(self, ok: bool, kind: str, **args) -> bool:
        self.checked += 1
        if not ok and self.witness is None:
            self.witness = {"check": kind, **args}
        return ok

    def verdict(self) -> Verdict:
        status = "pass" if self.witness is None else "fail"
        return Verdict(status, self.checked, self.evidence, self.witness)


# -- single-instance checks (each replayable from its witness) ------------------

def _unique_mediator(candidates, cond) -> bool:
    return sum(1 for m in candidates if cond(m)) == 1


def check_product_instance(A: ExObj, B: ExObj, T: ExObj) -> bool:
    P = ex_product(A, B)
    homs = ex_hom(T, P.obj)
    for a in ex_hom(T, A):
        for b in ex_hom(T, B):
            if not _unique_mediator(homs, lambda m: ex_eq(ex_compose(P.pr1, m), a)
                                    and ex_eq(ex_compose(P.pr2, m), b)):
                return False
            if not ex_eq(ex_compose(P.pr1, P.pair(a, b)), a):
                return False
    return True


def check_sum_instance(A: ExObj, B: ExObj, T: ExObj) -> bool:
    S = ex_sum(A, B)
    homs = ex_hom(S.obj, T)
    for a in ex_hom(A, T):
        for b in ex_hom(B, T):
            if not _unique_mediator(homs, lambda m: ex_eq(ex_compose(m, S.inl), a)
                                    and ex_eq(ex_compose(m, S.inr), b)):
                return False
    return True


def check_equalizer_instance(f: ExArrow, g: ExArrow, T: ExObj) -> bool:
    E, e = ex_equalizer(f, g)
    if not ex_eq(ex_compose(f, e), ex_compose(g, e)):
        return False
    homs = ex_hom(T, E)
    for h in ex_hom(T, f.src):
        if ex_eq(ex_compose(f, h), ex_compose(g, h)):
            if not _unique_mediator(homs, lambda m: ex_eq(ex_compose(e, m), h)):
                return False
    return True


def check_coequalizer_instance(f: ExArrow, g: ExArrow, T: ExObj) -> bool:
    Q, q = ex_coequalizer(f, g)
    if not ex_eq(ex_compose(q, f), ex_compose(q, g)):
        return False
    homs = ex_hom(Q, T)
    for h in ex_hom(f.dst, T):
        if ex_eq(ex_compose(h, f), ex_compose(h, g)):
            if not _unique_mediator(homs, lambda m: ex_eq(ex_compose(m, q), h)):
                return False
    return True


def check_terminal_instance(T: ExObj) -> bool:
    return len(ex_hom(T, ex_terminal(T.strategy))) == 1


def check_initial_instance(T: ExObj) -> bool:
    return len(ex_hom(ex_initial(T.strategy), T)) == 1


def check_separator_instance(f: ExArrow, g: ExArrow) -> bool:
    """Distinct parallel arrows are told apart by a global element."""
    if ex_eq(f, g):
        return True
    return any(not ex_eq(ex_compose(f, x), ex_compose(g, x)) for x in global_elements(f.src))


def check_strong_generator_instance(f: ExArrow) -> bool:
    """Bijective on global elements iff invertible (inverse searched)."""
    one_to_one = len({ex_compose(f, x).on_classes() for x in global_elements(f.src)}) == f.src.n_classes
    onto = {ex_compose(f, x).on_classes() for x in global_elements(f.src)} == \
        {y.on_classes() for y in global_elements(f.dst)}
    return (one_to_one and onto) == (find_inverse(f) is not None)


def check_projective_instance(X: FiniteSet, q: ExArrow) -> bool:
    """A cover onto the discrete object on X splits."""
    if not is_cover(q):
        return True
    return any(ex_eq(ex_compose(q, s), ex_id(q.dst)) for s in ex_hom(q.dst, q.src))


def check_image_instance(f: ExArrow) -> bool:
    c, m = ex_image_factorization(f)
    return is_cover(c) and is_mono(m) and ex_eq(ex_compose(m, c), f)


def check_kernel_instance(A: ExObj, cls: tuple) -> bool:
    """The equivalence relation ``cls`` (coarser than A's) is the kernel pair of its quotient."""
    B = ExObj.from_classes(A.carrier, cls, A.strategy)
    q = ExArrow(A, B, identity(A.carrier))
    want = {(a, b) for a in range(len(cls)) for b in range(len(cls)) if cls[a] == cls[b]}
    return kernel_relation(q) == want


def check_exact_instance(A: ExObj, T: ExObj) -> bool:
    """Quotient from the carrier: kernel pair gives back the relation, and
    arrows constant on the kernel pair factor uniquely."""
    q = ex_quotient(A)
    if kernel_relation(q) != A.pairs():
        return False
    pairs = A.pairs()
    homs = ex_hom(A, T)
    for h in ex_hom(q.src, T):
        coeq = all(T.cls[h.rep.table[a]] == T.cls[h.rep.table[b]] for a, b in pairs)
        if coeq and not _unique_mediator(homs, lambda m: ex_eq(ex_compose(m, q), h)):
            return False
        if not coeq and any(ex_eq(ex_compose(m, q), h) for m in homs):
            return False
    return True


def check_indecomposable_instance(A: ExObj, B: ExObj) -> bool:
    """If ``A + B`` is terminal then A or B is initial; each global element
    of the sum factors through exactly one injection."""
    S = ex_sum(A, B)
    if S.obj.n_classes == 1 and A.n_classes and B.n_classes:
        return False
    for z in global_elements(S.obj):
        via = [i for i, inj in enumerate((S.inl, S.inr))
               if any(ex_eq(ex_compose(inj, x), z) for x in global_elements(inj.src))]
        if len(via) != 1:
            return False
    return True


def check_distinct_injections(A: ExObj) -> bool:
    S = ex_sum(A, A)
    return all(not ex_eq(ex_compose(S.inl, x), ex_compose(S.inr, x)) for x in global_elements(A))


def check_empty_instance(A: ExObj) -> bool:
    """No global elements iff initial."""
    no_elements = not global_elements(A)
    initial = len(ex_hom(A, ex_initial(A.strategy))) == 1
    return no_elements == initial


def check_depprod_instance(f: ExArrow, g: ExArrow, strategy: Strategy) -> bool:
    from .suites import run_instance

    v = run_instance(f, g, strategy)
    if v.status == "cap":
        raise CapExceeded(v.detail)
    return v.status == "ok"


_REPLAY = {
    "product": lambda w, s: check_product_instance(*(obj_from_json(o, s) for o in w["objects"])),
    "sum": lambda w, s: check_sum_instance(*(obj_from_json(o, s) for o in w["objects"])),
    "equalizer": lambda w, s: check_equalizer_instance(
        arrow_from_json(w["f"], s), arrow_from_json(w["g"], s), obj_from_json(w["test"], s)),
    "coequalizer": lambda w, s: check_coequalizer_instance(
        arrow_from_json(w["f"], s), arrow_from_json(w["g"], s), obj_from_json(w["test"], s)),
    "terminal": lambda w, s: check_terminal_instance(obj_from_json(w["object"], s)),
    "initial": lambda w, s: check_initial_instance(obj_from_json(w["object"], s)),
    "depprod": lambda w, s: check_depprod_instance(
        arrow_from_json(w["f"], s), arrow_from_json(w["g"], s), s),
    "separator": lambda w, s: check_separator_instance(
        arrow_from_json(w["f"], s), arrow_from_json(w["g"], s)),
    "strong_generator": lambda w, s: check_strong_generator_instance(arrow_from_json(w["f"], s)),
    "choice_object": lambda w, s: is_choice_object(FiniteSet(w["set"])),
    "projective": lambda w, s: check_projective_instance(
        FiniteSet(w["set"]), arrow_from_json(w["cover"], s)),
    "empty": lambda w, s: check_empty_instance(obj_from_json(w["object"], s)),
    "indecomposable": lambda w, s: check_indecomposable_instance(
        *(obj_from_json(o, s) for o in w["objects"])),
    "distinct_injections": lambda w, s: check_distinct_injections(obj_from_json(w["object"], s)),
    "image": lambda w, s: check_image_instance(arrow_from_json(w["f"], s)),
    "kernel": lambda w, s: check_kernel_instance(obj_from_json(w["object"], s), tuple(w["relation"])),
    "exact": lambda w, s: check_exact_instance(obj_from_json(w["object"], s), obj_from_json(w["test"], s)),
}


def replay(witness: dict, strategy: Strategy = MINIMAL) -> bool:
    """Re-run the single check a witness names; True means it now passes."""
    return _REPLAY[witness["check"]](witness, strategy)


# -- the audit -------------------------------------------------------------------

def default_objects(max_size: int = 3, strategy: Strategy = MINIMAL) -> list[ExObj]:
    return all_objects(max_size, "a", strategy)


def _parallel_pairs(objs):
    for A in objs:
        for B in objs:
            homs = ex_hom(A, B)
            for f, g in itertools.product(homs, repeat=2):
                yield f, g


def audit(objects: list[ExObj] | None = None, strategy: Strategy = MINIMAL, seed: int = 0,
          depprod_pairs: list | None = None, random_pairs: int = 10,
          tests: list[ExObj] | None = None) -> AuditReport:
    """Check C1, C2 and C4..C10 on the given objects; C3 is always skipped.

    ``tests`` are the probe objects for universal properties (default: every
    object with carrier of size at most 2).
    """
    from .suites import instance_key, seeded_pairs

    assert_choice_hypothesis()
    objs = [o.with_strategy(strategy) for o in (objects or default_objects(3, strategy))]
    tests = [o.with_strategy(strategy) for o in (tests or default_objects(2, strategy))]
    rep = AuditReport(str(strategy), seed)
    rep.inventory = {"objects": len(objs), "probe_objects": len(tests),
                     "max_carrier": max((len(o.carrier) for o in objs), default=0)}

    # C1: finite limits and colimits, by unique mediating arrows
    sw = _Sweep("terminal, initial, binary products, sums, equalizers, coequalizers")
    for T in objs:
        sw.check(check_terminal_instance(T), "terminal", object=obj_json(T))
        sw.check(check_initial_instance(T), "initial", object=obj_json(T))
    for A, B in itertools.product(objs, repeat=2):
        for T in tests:
            sw.check(check_product_instance(A, B, T), "product", objects=[obj_json(A), obj_json(B), obj_json(T)])
            sw.check(check_sum_instance(A, B, T), "sum", objects=[obj_json(A), obj_json(B), obj_json(T)])
    for f, g in _parallel_pairs(objs):
        for T in tests:
            args = {"f": arrow_json(f), "g": arrow_json(g), "test": obj_json(T)}
            sw.check(check_equalizer_instance(f, g, T), "equalizer", **args)
            sw.check(check_coequalizer_instance(f, g, T), "coequalizer", **args)
    rep.verdicts["C1"] = sw.verdict()

    # C2: universal dependent products on a catalogue plus seeded pairs
    sw = _Sweep("dependent products: oracle iso, universal property, fullness")
    pairs = list(depprod_pairs or [])
    for A, B, C in itertools.product(objs, repeat=3):
        for f in ex_hom(B, A)[:2]:
            for g in ex_hom(C, B)[:2]:
                pairs.append((f, g))
    pairs += seeded_pairs(random_pairs, 3, seed)
    seen = set()
    for f, g in pairs:
        key = instance_key(f, g)
        if key in seen:
            continue
        seen.add(key)
        f, g = _restrategise(f, strategy), _restrategise(g, strategy)
        try:
            ok = check_depprod_instance(f, g, strategy)
        except CapExceeded as exc:
            rep.skipped_instances.append({"axiom": "C2", "f": arrow_json(f), "g": arrow_json(g),
                                          "reason": str(exc)})
            continue
        sw.check(ok, "depprod", f=arrow_json(f), g=arrow_json(g))
    rep.verdicts["C2"] = sw.verdict()

    rep.verdicts["C3"] = Verdict("skipped", reason="no NNO in finite world")

    # C4: elementality, from choice objects and by a direct sweep
    sw = _Sweep("bounded sweep: base choice objects, separator, strong generator")
    for n in range(4):
        X = canonical_set(n, "c")
        sw.check(is_choice_object(X), "choice_object", set=list(X.labels))
    for f, g in _parallel_pairs(objs):
        sw.check(check_separator_instance(f, g), "separator", f=arrow_json(f), g=arrow_json(g))
    for A, B in itertools.product(objs, repeat=2):
        for f in ex_hom(A, B):
            sw.check(check_strong_generator_instance(f), "strong_generator", f=arrow_json(f))
    rep.verdicts["C4"] = sw.verdict()

    # C5: every object is covered by a projective (choice) object
    sw = _Sweep("each object is covered by the discrete object on its carrier, which is projective")
    for A in objs:
        q = ex_quotient(A)
        sw.check(is_cover(q), "projective", set=list(A.carrier.labels), cover=arrow_json(ex_id(q.src)))
        for E in tests:
            for c in ex_hom(E, q.src):
                sw.check(check_projective_instance(A.carrier, c), "projective",
                         set=list(A.carrier.labels), cover=arrow_json(c))
    rep.verdicts["C5"] = sw.verdict()

    # C6: no elements iff initial
    sw = _Sweep("global elements versus initiality")
    for A in objs + [ex_initial(strategy)]:
        sw.check(check_empty_instance(A), "empty", object=obj_json(A))
    rep.verdicts["C6"] = sw.verdict()

    # C7: the terminal object is indecomposable
    sw = _Sweep("sums equal to the terminal object and elements of sums")
    for A, B in itertools.product(objs, repeat=2):
        sw.check(check_indecomposable_instance(A, B), "indecomposable", objects=[obj_json(A), obj_json(B)])
    rep.verdicts["C7"] = sw.verdict()

    # C8: sum injections are distinct
    sw = _Sweep("injections into A + A differ on every element")
    for A in objs + [ex_terminal(strategy)]:
        sw.check(check_distinct_injections(A), "distinct_injections", object=obj_json(A))
    rep.verdicts["C8"] = sw.verdict()

    # C9: image factorisation
    sw = _Sweep("every arrow is a cover followed by a mono")
    for A, B in itertools.product(objs, repeat=2):
        for f in ex_hom(A, B):
            sw.check(check_image_instance(f), "image", f=arrow_json(f))
    rep.verdicts["C9"] = sw.verdict()

    # C10: equivalence relations are kernel pairs, and quotients are exact
    sw = _Sweep("coarser equivalences as kernel pairs, exact quotients")
    for A in objs:
        for cls in partitions_coarser(A):
            sw.check(check_kernel_instance(A, cls), "kernel", object=obj_json(A), relation=list(cls))
        for T in tests:
            sw.check(check_exact_instance(A, T), "exact", object=obj_json(A), test=obj_json(T))
    rep.verdicts["C10"] = sw.verdict()
    return rep


def _restrategise(f: ExArrow, strategy: Strategy) -> ExArrow:
    return ExArrow(f.src.with_strategy(strategy), f.dst.with_strategy(strategy), f.rep)


# -- weak lextensivity of finite sets ----------------------------------------------

@dataclass
class LextensiveReport:
    strategy: str
    disjoint: int = 0
    strict_initial: int = 0
    distributive: int = 0
    weak_equalizer_sums: int = 0
    failures: list = field(default_factory=list)
    example_iso_size: int | None = None

    @property
    def ok(self) -> bool:
        return not self.failures

    def summary(self) -> dict:
        return {"strategy": self.strategy, "disjoint_sums": self.disjoint,
                "strict_initial": self.strict_initial, "distributivity_isos": self.distributive,
                "weak_equalizer_sums": self.weak_equalizer_sums,
                "failures": len(self.failures), "ok": self.ok}


def distributivity_iso(X: FiniteSet, Y: FiniteSet, Z: FiniteSet) -> tuple[FiniteMap, FiniteMap]:
    """``(X x Y) + (X x Z) -> X x (Y + Z)`` and its inverse, both explicit."""
    YZ = coproduct(Y, Z)
    XY, XZ, XYZ = product(X, Y), product(X, Z), product(X, YZ.obj)
    S = coproduct(XY.obj, XZ.obj)
    to = S.copair(XYZ.pair(XY.pr1, compose(YZ.inl, XY.pr2)),
                  XYZ.pair(XZ.pr1, compose(YZ.inr, XZ.pr2)))
    back = []
    ny = len(Y)
    for k in range(len(XYZ.obj)):
        x, s = XYZ.pr1.table[k], XYZ.pr2.table[k]
        if s < ny:
            back.append(S.inl.table[x * ny + s])
        else:
            back.append(S.inr.table[x * len(Z) + (s - ny)])
    return to, FiniteMap(XYZ.obj, S.obj, back)


def check_weakly_lextensive(strategy: Strategy = MINIMAL, max_size: int = 3) -> LextensiveReport:
    rep = LextensiveReport(str(strategy))
    sets = [canonical_set(n, "e") for n in range(max_size + 1)]
    empty = sets[0]
    for X, Y in itertools.product(sets, repeat=2):
        S = coproduct(X, Y)
        w = weak_pullback(S.inl, S.inr, strategy)
        rep.disjoint += 1
        if len(w.apex):
            rep.failures.append(("disjoint", len(X), len(Y)))
    for A in sets:
        rep.strict_initial += 1
        if any(True for _ in enumerate_maps(A, empty)) != (len(A) == 0):
            rep.failures.append(("strict_initial", len(A)))
    for X, Y, Z in itertools.product(sets, repeat=3):
        to, back = distributivity_iso(X, Y, Z)
        rep.distributive += 1
        if compose(back, to) != identity(to.dom) or compose(to, back) != identity(to.cod):
            rep.failures.append(("distributive", len(X), len(Y), len(Z)))
        if (len(X), len(Y), len(Z)) == (2, 1, 1):
            rep.example_iso_size = len(to.dom)
    small = sets[:3]
    for X, Y, B in itertools.product(small, repeat=3):
        for f, g in itertools.product(list(enumerate_maps(X, B)), repeat=2):
            for f2, g2 in [(m, n) for m in enumerate_maps(Y, B) for n in enumerate_maps(Y, B)][:4]:
                rep.weak_equalizer_sums += 1
                if not _sum_of_weak_equalizers(f, g, f2, g2, strategy):
                    rep.failures.append(("weak_equalizer_sum", f, g, f2, g2))
    return rep


def _sum_of_weak_equalizers(f, g, f2, g2, strategy: Strategy) -> bool:
    """``E_X + E_Y -> X + Y`` is a weak equaliser of ``f + f2`` and ``g + g2``."""
    EX, ex = weak_equalizer(f, g, strategy)
    EY, ey = weak_equalizer(f2, g2, strategy)
    XY, B2 = coproduct(f.dom, f2.dom), coproduct(f.cod, f2.cod)
    E = coproduct(EX, EY)
    e = E.copair(compose(XY.inl, ex), compose(XY.inr, ey))
    ff = XY.copair(compose(B2.inl, f), compose(B2.inr, f2))
    gg = XY.copair(compose(B2.inl, g), compose(B2.inr, g2))
    if compose(ff, e) != compose(gg, e):
        return False
    for n in range(3):
        T = canonical_set(n, "t")
        for h in enumerate_maps(T, XY.obj):
            if compose(ff, h) == compose(gg, h):
                m = factor_through(h, e)
                if m is None or compose(e, m) != h:
                    return False
    return True


# -- well-pointedness ---------------------------------------------------------------

@dataclass
class WellPointedReport:
    checks: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def summary(self) -> dict:
        return {**self.checks, "failures": len(self.failures), "ok": self.ok}


def check_wellpointed(max_size: int = 3, strategy: Strategy = MINIMAL) -> WellPointedReport:
    rep = WellPointedReport()
    one, zero = ex_terminal(strategy), ex_initial(strategy)
    nondegenerate = not ex_hom(one, zero) and find_inverse_between(one, zero) is None
    rep.checks["terminal_not_initial"] = nondegenerate
    if not nondegenerate:
        rep.failures.append("terminal is isomorphic to initial")

    objs = all_objects(max_size, "a", strategy)
    small = all_objects(min(max_size, 2), "b", strategy)
    n = 0
    for A, B in itertools.product(small, repeat=2):
        n += 1
        if not check_indecomposable_instance(A, B):
            rep.failures.append(("indecomposable", obj_json(A), obj_json(B)))
    base = 0
    for X, Y in itertools.product([canonical_set(k, "e") for k in range(max_size + 1)], repeat=2):
        S = coproduct(X, Y)
        for z in range(len(S.obj)):
            base += 1
            hits = int(z in S.inl.image()) + int(z in S.inr.image())
            if hits != 1:
                rep.failures.append(("base element of sum", len(X), len(Y), z))
    rep.checks["indecomposable_sweeps"] = n
    rep.checks["base_sum_elements"] = base

    proj = 0
    for k in range(5):
        E = canonical_set(k, "p")
        for c in enumerate_maps(E, FiniteSet(["*"])):
            if c.is_surjective():
                proj += 1
                s = FiniteMap(c.cod, E, [0])
                if compose(c, s) != identity(c.cod):
                    rep.failures.append(("terminal projective", k))
    for E in objs:
        for c in ex_hom(E, one):
            if is_cover(c):
                proj += 1
                if not any(ex_eq(ex_compose(c, s), ex_id(one)) for s in ex_hom(one, E)):
                    rep.failures.append(("terminal projective in completion", obj_json(E)))
    rep.checks["projectivity_covers"] = proj

    gen = 0
    for A, B in itertools.product(objs, repeat=2):
        for f in ex_hom(A, B):
            gen += 1
            if not check_strong_generator_instance(f):
                rep.failures.append(("strong generator", arrow_json(f)))
            is_iso(f)
    rep.checks["strong_generator_arrows"] = gen
    return rep


def find_inverse_between(A: ExObj, B: ExObj) -> ExArrow | None:
    for f in ex_hom(A, B):
        g = find_inverse(f)
        if g is not None:
            return f
    return None


# -- pretopos laws inside the completion ---------------------------------------------

@dataclass
class PretoposReport:
    strategy: str
    disjoint: int = 0
    strict_initial: int = 0
    distributive: int = 0
    exact: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def summary(self) -> dict:
        return {"strategy": self.strategy, "disjoint_sums": self.disjoint,
                "strict_initial": self.strict_initial, "distributivity_isos": self.distributive,
                "exact_quotients": self.exact, "failures": len(self.failures), "ok": self.ok}


def ex_distributivity_arrow(A: ExObj, B: ExObj, C: ExObj) -> ExArrow:
    """Canonical ``A x B + A x C -> A x (B + C)``."""
    BC = ex_sum(B, C)
    P = ex_product(A, BC.obj)
    AB, AC = ex_product(A, B), ex_product(A, C)
    S = ex_sum(AB.obj, AC.obj)
    left = P.pair(AB.pr1, ex_compose(BC.inl, AB.pr2))
    right = P.pair(AC.pr1, ex_compose(BC.inr, AC.pr2))
    return S.copair(left, right)


def check_ex_pretopos(max_size: int = 3, strategy: Strategy = MINIMAL,
                      dist_size: int = 2) -> PretoposReport:
    """Disjoint sums, strict initial object, distributivity and exact
    quotients for every object with carrier of size ``<= max_size``."""
    rep = PretoposReport(str(strategy))
    objs = all_objects(max_size, "a", strategy)
    zero = ex_initial(strategy)
    probes = all_objects(2, "t", strategy)
    for A, B in itertools.product(objs, repeat=2):
        S = ex_sum(A, B)
        rep.disjoint += 1
        left = {ex_compose(S.inl, x).on_classes() for x in global_elements(A)}
        right = {ex_compose(S.inr, x).on_classes() for x in global_elements(B)}
        if left & right:
            rep.failures.append(("sums not disjoint", obj_json(A), obj_json(B)))
    for A in objs:
        rep.strict_initial += 1
        into_zero = ex_hom(A, zero)
        if into_zero and not (len(A.carrier) == 0 and is_iso(into_zero[0])):
            rep.failures.append(("initial not strict", obj_json(A)))
        rep.exact += 1
        for T in probes:
            if not check_exact_instance(A, T):
                rep.failures.append(("quotient not exact", obj_json(A), obj_json(T)))
    small = all_objects(dist_size, "d", strategy)
    for A, B, C in itertools.product(small, repeat=3):
        rep.distributive += 1
        d = ex_distributivity_arrow(A, B, C)
        if not is_iso(d):
            rep.failures.append(("distributivity", obj_json(A), obj_json(B), obj_json(C)))
    return rep
