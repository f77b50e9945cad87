"""Universal dependent products in the exact completion.

Given ``Y -g-> X -f-> I`` in the completion, the construction goes through
comprehension objects ``T0`` (``f x ~ i``) and ``S0`` (``g y ~ t.x``), a full
family of pseudo-relations over ``S0 -> T0 -> I0``, the codes that are
functional, and the equivalence identifying codes that agree up to the
relations. An independent oracle counts sections of the quotient maps.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .bhk import App, Presubobject, Rel, Var, interpret
from .errors import BoundaryError, InternalInconsistency, OracleMismatch
from .excompletion import (
    ExArrow,
    ExObj,
    canonical_quotient,
    gamma,
    is_iso,
    respects,
)
from .finset import FiniteMap, FiniteSet, compose, distinct_labels
from .fullness import DEFAULT_CODE_CAP, FullFamily, build_full_family, family_properties
from .weaklim import MINIMAL, Strategy, weak_equalizer

LITERAL_CHECK_LIMIT = 60


@dataclass(eq=False)
class DepProdResult:
    f: ExArrow
    g: ExArrow
    strategy: Strategy
    T0: FiniteSet
    tau1: FiniteMap
    tau2: FiniteMap
    S0: FiniteSet
    sigma1: FiniteMap
    sigma2: FiniteMap
    family: FullFamily
    gamma: FiniteMap            # G0 -> F0
    G: ExObj
    phi_gamma: ExArrow          # G -> I
    Q: ExObj
    beta1: ExArrow              # Q -> G
    beta2: ExArrow              # Q -> X
    beta3: ExArrow              # Q -> Y
    signatures: list = field(default_factory=list)

    def classes_per_index(self) -> list[int]:
        """Number of G-classes over each class of I, in canonical order."""
        I = self.f.dst
        counts = [0] * I.n_classes
        for c in range(self.G.n_classes):
            u = self.G.classes[c][0]
            counts[I.cls[self.phi_gamma.rep.table[u]]] += 1
        return counts

    def beta_class_triples(self) -> frozenset[tuple[int, int, int]]:
        G, X, Y = self.G, self.f.src, self.g.src
        return frozenset(
            (G.cls[u], X.cls[x], Y.cls[y])
            for u, x, y in zip(self.beta1.rep.table, self.beta2.rep.table, self.beta3.rep.table))

    def beta_is_mono(self) -> bool:
        """Injective on classes: ``q ~ q'`` iff their three components are related."""
        seen: dict = {}
        G, X, Y, Q = self.G, self.f.src, self.g.src, self.Q
        for q, (u, x, y) in enumerate(zip(self.beta1.rep.table, self.beta2.rep.table,
                                          self.beta3.rep.table)):
            key = (G.cls[u], X.cls[x], Y.cls[y])
            if seen.setdefault(key, Q.cls[q]) != Q.cls[q]:
                return False
        return True


def _check_composable(f: ExArrow, g: ExArrow) -> None:
    if not g.dst.same_as(f.src):
        raise BoundaryError("g must land in the domain of f")


def comprehension_objects(f: ExArrow, g: ExArrow, strategy: Strategy):
    """``tau: T0 -> X0 x I0`` for ``f x ~ i`` and ``sigma: S0 -> Y0 x T0`` for ``g y ~ tau1 t``."""
    X, I, Y = f.src, f.dst, g.src
    tau = interpret(Rel(I.rel, (App(f.rep, Var("x"), "f"), Var("i")), "~I"),
                    [("x", X.carrier), ("i", I.carrier)], strategy)
    T0 = tau.apex
    n_i = len(I.carrier)
    tau1 = FiniteMap(T0, X.carrier, [k // n_i for k in tau.rep.table])
    tau2 = FiniteMap(T0, I.carrier, [k % n_i for k in tau.rep.table])
    sigma = interpret(Rel(X.rel, (App(g.rep, Var("y"), "g"), App(tau1, Var("t"), "tau1")), "~X"),
                      [("y", Y.carrier), ("t", T0)], strategy)
    S0 = sigma.apex
    n_t = len(T0)
    sigma1 = FiniteMap(S0, Y.carrier, [k // n_t for k in sigma.rep.table]) if n_t else \
        FiniteMap(S0, Y.carrier, [])
    sigma2 = FiniteMap(S0, T0, [k % n_t for k in sigma.rep.table]) if n_t else \
        FiniteMap(S0, T0, [])
    return T0, tau1, tau2, S0, sigma1, sigma2


def _code_profiles(fam: FullFamily, tau1: FiniteMap, sigma1: FiniteMap,
                   X: ExObj, Y: ExObj) -> list[dict[int, set[int]]]:
    """For each code, the X-classes of its rows and the Y-classes they reach."""
    prof: list[dict[int, set[int]]] = [{} for _ in range(len(fam.F))]
    for c, t, s in zip(fam.alpha_code.table, fam.alpha_x.table, fam.eps.table):
        prof[c].setdefault(X.cls[tau1.table[t]], set()).add(Y.cls[sigma1.table[s]])
    return prof


def _functional(profile: dict[int, set[int]]) -> bool:
    """Rows with related x-parts have related y-parts."""
    return all(len(ys) == 1 for ys in profile.values())


def _related_codes(p: dict[int, set[int]], q: dict[int, set[int]]) -> bool:
    """The pairwise condition between two codes' rows (index agreement aside)."""
    for xc, ys in p.items():
        other = q.get(xc)
        if other is None:
            continue
        if len(ys) != 1 or ys != other:
            return False
    return True


def build_dependent_product(f: ExArrow, g: ExArrow, strategy: Strategy = MINIMAL,
                            cap: int = DEFAULT_CODE_CAP) -> DepProdResult:
    _check_composable(f, g)
    X, I, Y = f.src, f.dst, g.src
    T0, tau1, tau2, S0, sigma1, sigma2 = comprehension_objects(f, g, strategy)
    # fiber objects of the family use the minimal strategy: padding already
    # lives in T0 and S0, and padding twice overflows the code cap
    fam = build_full_family(tau2, sigma2, MINIMAL, cap)
    props = family_properties(fam)
    if not all(props.values()):
        raise InternalInconsistency(f"full family violates its defining properties: {props}")

    profiles = _code_profiles(fam, tau1, sigma1, X, Y)
    F0 = fam.F
    good = FiniteSet(["no", "yes"])
    chi = FiniteMap(F0, good, [1 if _functional(p) else 0 for p in profiles])
    G0, gam = weak_equalizer(chi, FiniteMap(F0, good, [1] * len(F0)), strategy)

    phi = fam.phi.table
    keys, signatures = [], []
    for u in range(len(G0)):
        c = gam.table[u]
        sig = frozenset((xc, next(iter(ys))) for xc, ys in profiles[c].items())
        keys.append((I.cls[phi[c]], sig))
    G = ExObj.from_classes(G0, keys, strategy)
    _recheck_equivalence(G, gam, phi, I, profiles)
    for block in G.classes:
        signatures.append(keys[block[0]])
    phi_gamma = ExArrow(G, I, compose(fam.phi, gam))

    Q0, q_u, q_p = _rows_over_codes(G0, gam, fam, strategy)
    b1 = q_u
    b2 = [tau1.table[fam.alpha_x.table[p]] for p in q_p]
    b3 = [sigma1.table[fam.eps.table[p]] for p in q_p]
    Q = ExObj.from_classes(Q0, [(G.cls[u], X.cls[x]) for u, x in zip(b1, b2)], strategy)
    beta1 = ExArrow(Q, G, FiniteMap(Q0, G0, b1))
    beta2 = ExArrow(Q, X, FiniteMap(Q0, X.carrier, b2))
    rep3 = FiniteMap(Q0, Y.carrier, b3)
    if not respects(rep3, Q, Y):
        raise InternalInconsistency("third leg of beta does not respect the relations")
    beta3 = ExArrow(Q, Y, rep3)
    return DepProdResult(f, g, strategy, T0, tau1, tau2, S0, sigma1, sigma2, fam, gam, G,
                         phi_gamma, Q, beta1, beta2, beta3, signatures)


def _recheck_equivalence(G: ExObj, gam: FiniteMap, phi, I: ExObj, profiles) -> None:
    """Compare the class grouping with the literal pairwise condition.

    Small objects are compared on all pairs; larger ones on each element
    against its class representative and on representatives of distinct
    classes. Agreement on all pairs makes the literal relation an
    equivalence, so transitivity is re-derived rather than assumed.
    """
    def literal(u, v):
        cu, cv = gam.table[u], gam.table[v]
        return I.cls[phi[cu]] == I.cls[phi[cv]] and _related_codes(profiles[cu], profiles[cv])

    n = len(G.carrier)
    if n <= LITERAL_CHECK_LIMIT:
        pairs = itertools.product(range(n), repeat=2)
    else:
        reps = [b[0] for b in G.classes]
        pairs = itertools.chain(((u, reps[G.cls[u]]) for u in range(n)),
                                itertools.product(reps, repeat=2))
    for u, v in pairs:
        if literal(u, v) != G.related(u, v):
            raise InternalInconsistency(
                f"code equivalence disagrees with its defining formula at {u}, {v}")


def _rows_over_codes(G0: FiniteSet, gam: FiniteMap, fam: FullFamily, strategy: Strategy):
    """Weak pullback of ``gamma`` and the code leg of ``alpha``, built by fibers."""
    rows_of: list[list[int]] = [[] for _ in range(len(fam.F))]
    for p, c in enumerate(fam.alpha_code.table):
        rows_of[c].append(p)
    k = strategy.copies
    q_u, q_p, parts = [], [], []
    for u in range(len(G0)):
        for p in rows_of[gam.table[u]]:
            for j in range(k):
                q_u.append(u)
                q_p.append(p)
                parts.append((G0.labels[u], fam.P.labels[p], str(j)))
    pref = [f"{a}|{b}" if k == 1 else f"{a}|{b}#{j}" for a, b, j in parts]
    Q0 = FiniteSet(distinct_labels(pref, parts))
    return Q0, q_u, q_p


# -- oracle -------------------------------------------------------------------

@dataclass(eq=False)
class OracleResult:
    Pi: FiniteSet
    idx: FiniteMap               # Pi -> quotient of I
    sections: list               # per element of Pi: frozenset of (x-class, y-class)
    I_quotient: FiniteSet

    def counts(self) -> list[int]:
        out = [0] * len(self.I_quotient)
        for i in self.idx.table:
            out[i] += 1
        return out


def oracle_dependent_product(f: ExArrow, g: ExArrow) -> OracleResult:
    """Quotient to plain finite sets and list the sections of ``g`` over each fiber."""
    _check_composable(f, g)
    Iq, _ = canonical_quotient(f.dst)
    Xq, _ = canonical_quotient(f.src)
    Yq, _ = canonical_quotient(g.src)
    fq, gq = f.on_classes(), g.on_classes()
    g_fib = [[y for y, x in enumerate(gq) if x == xc] for xc in range(len(Xq))]
    labels, idx, secs = [], [], []
    for i in range(len(Iq)):
        xs = [x for x, j in enumerate(fq) if j == i]
        for pick in itertools.product(*[g_fib[x] for x in xs]):
            body = ",".join(f"{Xq.labels[x]}->{Yq.labels[y]}" for x, y in zip(xs, pick))
            labels.append(f"{Iq.labels[i]}|{body}")
            idx.append(i)
            secs.append(frozenset(zip(xs, pick)))
    Pi = FiniteSet(labels)
    return OracleResult(Pi, FiniteMap(Pi, Iq, idx), secs, Iq)


def iso_to_oracle(res: DepProdResult, oracle: OracleResult) -> ExArrow:
    """Iso ``G -> Pi`` over the index maps; OracleMismatch if none exists."""
    got, want = res.classes_per_index(), oracle.counts()
    if got != want:
        raise OracleMismatch(f"classes per index {got} but the oracle counts {want}")
    lookup = {(i, s): n for n, (i, s) in enumerate(zip(oracle.idx.table, oracle.sections))}
    table = []
    for u in range(len(res.G.carrier)):
        key = res.signatures[res.G.cls[u]]
        n = lookup.get(key)
        if n is None:
            raise OracleMismatch(f"class of {res.G.carrier.labels[u]} has no matching section")
        table.append(n)
    h = ExArrow(res.G, gamma(oracle.Pi), FiniteMap(res.G.carrier, oracle.Pi, table))
    if not is_iso(h, audit=len(res.G.carrier) <= 6):
        raise OracleMismatch("comparison map with the oracle is not an isomorphism")
    _, qI = canonical_quotient(res.f.dst)
    if any(oracle.idx.table[table[u]] != qI.table[res.phi_gamma.rep.table[u]]
           for u in range(len(table))):
        raise OracleMismatch("comparison map does not commute with the index maps")
    return h


def cross_strategy_iso(a: DepProdResult, b: DepProdResult) -> ExArrow:
    """Iso between two results over the same arrows, through the oracle."""
    oracle = oracle_dependent_product(a.f, a.g)
    ha, hb = iso_to_oracle(a, oracle), iso_to_oracle(b, oracle)
    back = {}
    for v, n in enumerate(hb.rep.table):
        back.setdefault(n, v)
    rep = FiniteMap(a.G.carrier, b.G.carrier, [back[n] for n in ha.rep.table])
    h = ExArrow(a.G, b.G, rep)
    if not is_iso(h, audit=False):
        raise OracleMismatch("results under the two strategies are not isomorphic")
    return h


# -- universal property ---------------------------------------------------------

@dataclass
class UniversalReport:
    relations: int = 0
    existence_failures: list = field(default_factory=list)
    uniqueness_failures: list = field(default_factory=list)
    family_failures: list = field(default_factory=list)
    empty_index_failures: list = field(default_factory=list)
    round_trip_failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not (self.existence_failures or self.uniqueness_failures or self.family_failures
                    or self.empty_index_failures or self.round_trip_failures)

    def summary(self) -> dict:
        return {
            "functional_relations": self.relations,
            "existence_failures": len(self.existence_failures),
            "uniqueness_failures": len(self.uniqueness_failures),
            "family_failures": len(self.family_failures),
            "empty_index_failures": len(self.empty_index_failures),
            "round_trip_failures": len(self.round_trip_failures),
            "ok": self.ok,
        }


def functional_relations(f: ExArrow, g: ExArrow, i0: int):
    """Class-level functional relations over ``f, g`` with domain index ``i0``.

    Candidates are all sets of class pairs ``(xc, yc)`` with ``g yc = xc``;
    the three defining conditions are then tested on each.
    """
    X, I = f.src, f.dst
    fq, gq = f.on_classes(), g.on_classes()
    cells = [(gq[yc], yc) for yc in range(len(gq))]
    for bits in itertools.product((False, True), repeat=len(cells)):
        r = frozenset(c for c, b in zip(cells, bits) if b)
        if is_functional_relation(r, fq, gq, I.cls[i0]):
            yield r


def is_functional_relation(r, fq, gq, ic: int) -> bool:
    dom = {xc for xc, _ in r}
    sections = all(gq[yc] == xc for xc, yc in r)
    indexed = dom == {xc for xc, j in enumerate(fq) if j == ic}
    functional = len(dom) == len(r)
    return sections and indexed and functional


def _family_sweep(res: DepProdResult) -> list:
    """The three family properties of ``(phi gamma, beta)`` on classes."""
    f, g = res.f, res.g
    X, I, Y, G = f.src, f.dst, g.src, res.G
    fq, gq = f.on_classes(), g.on_classes()
    triples = res.beta_class_triples()
    pg = res.phi_gamma.on_classes()
    by_u: dict[int, dict[int, set]] = {}
    for uc, xc, yc in triples:
        by_u.setdefault(uc, {}).setdefault(xc, set()).add(yc)
    bad = []
    for uc, xc, yc in triples:
        if gq[yc] != xc:
            bad.append(("sections", uc, xc, yc))
    for uc in range(G.n_classes):
        rows = by_u.get(uc, {})
        for xc in range(X.n_classes):
            if (fq[xc] == pg[uc]) != (xc in rows):
                bad.append(("indexed", uc, xc))
        for xc, ys in rows.items():
            if len(ys) != 1:
                bad.append(("functional", uc, xc))
    return bad


def verify_universal_property(res: DepProdResult) -> UniversalReport:
    """Existence and uniqueness of a classifying class for every functional relation."""
    f, g = res.f, res.g
    X, I, Y, G = f.src, f.dst, g.src, res.G
    fam = res.family
    rep = UniversalReport()
    rep.family_failures = _family_sweep(res)
    if not res.beta_is_mono():
        rep.family_failures.append(("beta not monic",))

    triples = res.beta_class_triples()
    graph_of: dict[int, frozenset] = {uc: frozenset() for uc in range(G.n_classes)}
    for uc, xc, yc in triples:
        graph_of[uc] = graph_of[uc] | {(xc, yc)}
    pg = res.phi_gamma.on_classes()
    u_of_code: dict[int, int] = {}
    for u, c in enumerate(res.gamma.table):
        u_of_code.setdefault(c, u)

    tau1, tau2, sigma1, sigma2 = res.tau1, res.tau2, res.sigma1, res.sigma2
    nS = len(res.S0)
    masks = [0] * len(fam.F)
    for c, t, s in zip(fam.alpha_code.table, fam.alpha_x.table, fam.eps.table):
        masks[c] |= 1 << (t * nS + s)

    def classify(i0: int, r: frozenset) -> int | None:
        # r' = { (t, s) | sigma2 s = t, tau2 t = i0, <tau1 t, sigma1 s> in r up to ~ }
        rmask = 0
        for s in range(nS):
            t = sigma2.table[s]
            if tau2.table[t] == i0 and (X.cls[tau1.table[t]], Y.cls[sigma1.table[s]]) in r:
                rmask |= 1 << (t * nS + s)
        c = next((c for c in fam.codes_over(i0) if masks[c] & ~rmask == 0), None)
        if c is None:
            return None
        u = u_of_code.get(c)
        return None if u is None else G.cls[u]

    for i0 in range(len(I.carrier)):
        ic = I.cls[i0]
        rels = list(functional_relations(f, g, i0))
        if not rels and any(pg[uc] == ic for uc in range(G.n_classes)):
            rep.empty_index_failures.append(i0)
        for r in rels:
            rep.relations += 1
            found = classify(i0, r)
            if found is None or graph_of[found] != r or pg[found] != ic:
                rep.existence_failures.append((i0, sorted(r), found))
            matching = [uc for uc in range(G.n_classes) if pg[uc] == ic and graph_of[uc] == r]
            if len(matching) != 1:
                rep.uniqueness_failures.append((i0, sorted(r), matching))

    for uc in range(G.n_classes):
        u = G.classes[uc][0]
        i0 = res.phi_gamma.rep.table[u]
        if classify(i0, graph_of[uc]) != uc:
            rep.round_trip_failures.append(uc)
    return rep
