import itertools

import pytest
from hypothesis import given, reject
from hypothesis import strategies as st

from exactcomp.bhk import (
    And,
    App,
    Eq,
    Exists,
    Forall,
    Implies,
    Presubobject,
    Rel,
    Truth,
    Var,
    context_object,
    element_satisfies,
    element_semantics,
    interpret,
    psub_equiv,
    psub_leq,
    pullback_along,
    top,
)
from exactcomp.errors import BoundaryError, CapExceeded, FormulaTypeError
from exactcomp.finset import FiniteMap, FiniteSet, canonical_set, compose, enumerate_maps, identity
from exactcomp.weaklim import MINIMAL, Span, padded, weak_equalizer

X = FiniteSet(["x0", "x1"])
Y = FiniteSet(["y0", "y1"])
F = FiniteMap(X, Y, [1, 1])
R = Span.from_tuples((X, Y), [("x0", "y0"), ("x0", "y0"), ("x1", "y1")])


def test_every_arrow_is_below_identity():
    for n in range(4):
        for a in enumerate_maps(canonical_set(n, "a"), X):
            assert psub_leq(Presubobject(X, a), top(X), audit=True)


def test_inclusion_versus_identity():
    inc = Presubobject(X, FiniteMap(FiniteSet(["x0"]), X, [0]))
    assert psub_leq(inc, top(X), audit=True)
    assert not psub_leq(top(X), inc, audit=True)


def test_padded_duplicate_is_equivalent():
    a = Presubobject(X, FiniteMap(FiniteSet(["x1"]), X, [1]))
    _, e = weak_equalizer(a.rep, a.rep, padded(2))
    dup = Presubobject(X, compose(a.rep, e))
    assert len(dup.apex) == 2
    assert psub_leq(a, dup, audit=True) and psub_leq(dup, a, audit=True)


def test_psub_leq_needs_common_target():
    with pytest.raises(BoundaryError):
        psub_leq(top(X), top(Y))


def test_element_satisfies():
    assert all(element_satisfies(top(X), x) for x in X)
    empty = Presubobject(X, FiniteMap(FiniteSet([]), X, []))
    assert not any(element_satisfies(empty, x) for x in X)


def test_element_satisfies_agrees_with_graph_relation():
    XY = context_object([("x", X), ("y", Y)])
    p = interpret(Rel(R, (Var("x"), Var("y"))), [("x", X), ("y", Y)])
    for k, (x, y) in enumerate(itertools.product(X, Y)):
        assert element_satisfies(p, XY.labels[k]) == R.holds(x, y)


def test_truth_and_reflexive_equation_are_top(strategy):
    ctx = [("x", X), ("y", Y)]
    C = context_object(ctx)
    assert psub_equiv(interpret(Truth(), ctx, strategy), top(C))
    t = App(F, Var("x"), "f")
    assert psub_equiv(interpret(Eq(t, t), ctx, strategy), top(C))


def test_exists_preimage_of_surjection_is_top(strategy):
    g = FiniteMap(canonical_set(3, "z"), X, [0, 1, 1])
    phi = Exists("z", g.dom, Eq(App(g, Var("z"), "g"), Var("x")), "Z")
    p = interpret(phi, [("x", X)], strategy)
    assert p.elements() == frozenset(range(len(X)))
    assert psub_equiv(p, top(X))


def test_ill_typed_formulas_are_rejected():
    ctx = [("x", X), ("y", Y)]
    with pytest.raises(FormulaTypeError):
        interpret(Eq(Var("x"), Var("y")), ctx)
    with pytest.raises(FormulaTypeError):
        interpret(Eq(Var("z"), Var("z")), ctx)
    with pytest.raises(FormulaTypeError):
        interpret(Rel(R, (Var("y"), Var("x"))), ctx)
    with pytest.raises(FormulaTypeError):
        interpret(Eq(App(F, Var("y"), "f"), Var("y")), ctx)


def test_inner_binding_shadows_outer():
    phi = Exists("x", Y, Eq(Var("x"), Var("x")), "Y")
    assert interpret(phi, [("x", X)]).elements() == frozenset(range(len(X)))
    # forall x:Y. f(x) = ... would be ill-typed unless x refers to the inner binding
    psi = Forall("x", X, Eq(App(F, Var("x"), "f"), App(F, Var("x"), "f")), "X")
    assert interpret(psi, [("x", Y)]).elements() == frozenset(range(len(Y)))


def test_implication_and_forall_examples(strategy):
    ctx = [("x", X)]
    # f is constant at y1 and only x1 is related to y1
    phi = Forall("y", Y, Implies(Eq(Var("y"), App(F, Var("x"), "f")),
                                 Rel(R, (Var("x"), Var("y")))), "Y")
    assert interpret(phi, ctx, strategy).elements() == {1}
    if strategy == MINIMAL:
        taut = Forall("y", Y, Implies(Rel(R, (Var("x"), Var("y"))),
                                      Rel(R, (Var("x"), Var("y")))), "Y")
        assert interpret(taut, ctx).elements() == {0, 1}
    # only x1 is related to f(x1) = y1
    psi = Rel(R, (Var("x"), App(F, Var("x"), "f")))
    assert interpret(psi, ctx, strategy).elements() == {1}
    chi = Forall("y", Y, Rel(R, (Var("x"), Var("y"))), "Y")
    assert interpret(chi, ctx, strategy).elements() == frozenset()


def test_pullback_along_is_preimage(strategy):
    h = Presubobject(Y, FiniteMap(FiniteSet(["a"]), Y, [1]))
    p = pullback_along(F, h, strategy)
    assert p.elements() == {0, 1}
    h0 = Presubobject(Y, FiniteMap(FiniteSet(["a"]), Y, [0]))
    assert pullback_along(F, h0, strategy).elements() == frozenset()


# -- interpretation against direct evaluation ------------------------------------

TYPES = {"X": X, "Y": Y}


def terms_of(scope, typ):
    out = [Var(v) for v, t in scope.items() if t == typ]
    if typ == "Y":
        out += [App(F, Var(v), "f") for v, t in scope.items() if t == "X"]
    return out


@st.composite
def formulas(draw, scope, depth, universal=2):
    """Well-typed formulas; ``universal`` bounds the nesting of forall and ->."""
    kinds = ["truth", "eq", "rel"]
    if depth > 0:
        kinds += ["and", "exists"]
        if universal > 0:
            kinds += ["implies", "forall"]
    kind = draw(st.sampled_from(kinds))
    if kind == "truth":
        return Truth()
    if kind == "eq":
        typ = draw(st.sampled_from([t for t in TYPES if terms_of(scope, t)] or ["none"]))
        if typ == "none":
            return Truth()
        ts = terms_of(scope, typ)
        return Eq(draw(st.sampled_from(ts)), draw(st.sampled_from(ts)))
    if kind == "rel":
        xs, ys = terms_of(scope, "X"), terms_of(scope, "Y")
        if not xs or not ys:
            return Truth()
        return Rel(R, (draw(st.sampled_from(xs)), draw(st.sampled_from(ys))), "R")
    left = universal - (kind in ("implies", "forall"))
    if kind in ("and", "implies"):
        cls = And if kind == "and" else Implies
        return cls(draw(formulas(scope, depth - 1, left)), draw(formulas(scope, depth - 1, left)))
    var = draw(st.sampled_from(["u", "v", "x"]))
    typ = draw(st.sampled_from(sorted(TYPES)))
    body = draw(formulas({**scope, var: typ}, depth - 1, left))
    cls = Exists if kind == "exists" else Forall
    return cls(var, TYPES[typ], body, typ)


@st.composite
def formulas_in_context(draw, universal=2):
    n = draw(st.integers(0, 2))
    names = ["x", "y"][:n]
    types = [draw(st.sampled_from(sorted(TYPES))) for _ in names]
    scope = dict(zip(names, types))
    phi = draw(formulas(scope, 2, universal))
    return phi, [(v, TYPES[t]) for v, t in scope.items()]


@given(formulas_in_context())
def test_interpretation_matches_evaluation(case):
    phi, ctx = case
    p = interpret(phi, ctx)
    assert p.target == context_object(ctx)
    assert p.elements() == element_semantics(phi, ctx)


def padded_or_reject(phi, ctx):
    """Padding doubles the evidence at every weak limit and a universal has
    one code per choice over that evidence, so some padded formulas pass the
    code cap; those are outside the tested range."""
    try:
        return interpret(phi, ctx, padded(2))
    except CapExceeded:
        reject()


@given(formulas_in_context(universal=1))
def test_padded_interpretation_matches_evaluation(case):
    phi, ctx = case
    p = padded_or_reject(phi, ctx)
    assert p.elements() == element_semantics(phi, ctx)


@given(formulas_in_context(universal=1))
def test_strategies_give_equivalent_presubobjects(case):
    phi, ctx = case
    assert psub_equiv(interpret(phi, ctx, MINIMAL), padded_or_reject(phi, ctx))


def test_padding_adds_evidence():
    ctx = [("x", X), ("y", Y)]
    phi = Rel(R, (Var("x"), Var("y")))
    small, big = interpret(phi, ctx, MINIMAL), interpret(phi, ctx, padded(2))
    assert len(big.apex) > len(small.apex)
    assert psub_equiv(small, big)
    assert identity(X) == identity(X)
