import itertools
from math import prod

import pytest
from hypothesis import given
from hypothesis import strategies as st

from exactcomp.bhk import Presubobject, psub_equiv, top
from exactcomp.errors import BoundaryError, CapExceeded
from exactcomp.finset import FiniteMap, FiniteSet, canonical_set, enumerate_maps, identity
from exactcomp.fullness import (
    build_full_family,
    check_forall_adjunction,
    check_fullness,
    check_image_sufficiency,
    code_count,
    covering_code,
    family_properties,
    forall_along,
    relation_count,
)
from exactcomp.weaklim import MINIMAL, Span, padded

from strategies import maps_between

SETS = [canonical_set(n, "s") for n in range(4)]


@st.composite
def composable(draw, max_size=3):
    I = canonical_set(draw(st.integers(1, max_size)), "i")
    X = canonical_set(draw(st.integers(0, max_size)), "x")
    Y = canonical_set(draw(st.integers(0, max_size if len(X) else 0)), "y")
    f = draw(maps_between(X, I))
    g = draw(maps_between(Y, X))
    return f, g


def brute_total_relations(f, g, i):
    """All subsets of graph(g) restricted to the fiber of i that are total on it."""
    cells = [(x, y) for y, x in enumerate(g.table) if f.table[x] == i]
    fiber = {x for x in range(len(f.dom)) if f.table[x] == i}
    for bits in itertools.product((False, True), repeat=len(cells)):
        r = frozenset(c for c, b in zip(cells, bits) if b)
        if {x for x, _ in r} == fiber:
            yield r


def test_two_codes_for_a_two_point_fiber():
    X, I, Y = FiniteSet(["x"]), FiniteSet(["*"]), FiniteSet(["y0", "y1"])
    fam = build_full_family(FiniteMap(X, I, [0]), FiniteMap(Y, X, [0, 0]))
    assert len(fam.F) == 2
    assert sorted(fam.rows_by_code()) == sorted([frozenset({(0, 0)}), frozenset({(0, 1)})])


def test_identity_g_gives_one_code_per_index():
    X, I = canonical_set(3, "x"), canonical_set(2, "i")
    f = FiniteMap(X, I, [0, 1, 1])
    fam = build_full_family(f, identity(X))
    assert len(fam.F) == len(I)
    assert fam.phi.table == (0, 1)


def test_empty_fiber_has_a_code_with_no_rows():
    X, I = canonical_set(1, "x"), canonical_set(2, "i")
    f = FiniteMap(X, I, [0])
    fam = build_full_family(f, identity(X))
    over_empty = fam.codes_over(1)
    assert len(over_empty) == 1
    assert fam.rows_by_code()[over_empty[0]] == frozenset()


def test_fullness_examples():
    X, I, Y = FiniteSet(["x"]), FiniteSet(["*"]), FiniteSet(["y0", "y1"])
    f, g = FiniteMap(X, I, [0]), FiniteMap(Y, X, [0, 0])
    rep = check_fullness(build_full_family(f, g))
    assert rep.ok and len(rep.entries) == 3
    assert len(list(brute_total_relations(f, g, 0))) == 3

    X3 = canonical_set(2, "x")
    rep = check_fullness(build_full_family(FiniteMap(X3, I, [0, 0]), identity(X3)))
    assert rep.ok and len(rep.entries) == 1

    I2 = canonical_set(2, "i")
    fam = build_full_family(FiniteMap(X, I2, [0]), FiniteMap(Y, X, [0, 0]))
    rep = check_fullness(fam)
    assert rep.ok
    assert [r for i, r, _ in rep.entries if i == 1] == [frozenset()]


def test_fullness_rejects_foreign_maps():
    X, I = canonical_set(1, "x"), canonical_set(1, "i")
    fam = build_full_family(FiniteMap(X, I, [0]), identity(X))
    with pytest.raises(BoundaryError):
        check_fullness(fam, f=FiniteMap(X, canonical_set(2, "j"), [0]))


@given(composable(), st.sampled_from([MINIMAL, padded(2)]))
def test_code_count_and_properties(case, strat):
    f, g = case
    fam = build_full_family(f, g, strat)
    g_fib = g.fibers()
    expected = sum(prod(strat.copies * len(g_fib[x]) for x in f.fiber(i))
                   for i in range(len(f.cod)))
    assert len(fam.F) == code_count(f, g, strat) == expected
    assert all(family_properties(fam).values())
    for c, rows in enumerate(fam.rows_by_code()):
        assert all(g.table[y] == x for x, y in rows)
        xs = sorted(x for x, _ in rows)
        assert xs == f.fiber(fam.phi.table[c])


@given(composable(), st.sampled_from([MINIMAL, padded(2)]))
def test_fullness_matches_brute_force(case, strat):
    f, g = case
    fam = build_full_family(f, g, strat)
    rep = check_fullness(fam)
    assert rep.ok
    rows = fam.rows_by_code()
    for i in range(len(f.cod)):
        rels = list(brute_total_relations(f, g, i))
        assert len(rels) == relation_count(f, g, i)
        for r in rels:
            assert any(rows[c] <= r for c in fam.codes_over(i))


@given(composable())
def test_singleton_mode_agrees_with_exhaustive(case):
    f, g = case
    fam = build_full_family(f, g)
    full = check_fullness(fam, budget=10 ** 9)
    small = check_fullness(fam, budget=-1)
    assert small.mode == "singleton-choice relations"
    assert full.ok == small.ok


@given(composable())
def test_image_sufficiency(case):
    f, g = case
    fam = build_full_family(f, g, padded(2))
    assert check_image_sufficiency(fam, samples=10, seed=3)


def test_covering_code_for_padded_span():
    X, I, Y = FiniteSet(["x"]), FiniteSet(["*"]), FiniteSet(["y0", "y1"])
    fam = build_full_family(FiniteMap(X, I, [0]), FiniteMap(Y, X, [0, 0]))
    span = Span.from_tuples((X, Y), [("x", "y1"), ("x", "y1")])
    c = covering_code(fam, 0, span)
    assert fam.rows_by_code()[c] == {(0, 1)}


def test_code_cap():
    X, I, Y = canonical_set(3, "x"), FiniteSet(["*"]), canonical_set(12, "y")
    f = FiniteMap(X, I, [0, 0, 0])
    g = FiniteMap(Y, X, [y % 3 for y in range(12)])
    assert code_count(f, g) == 64
    with pytest.raises(CapExceeded):
        build_full_family(f, g, cap=63)


def test_forall_of_everything_is_everything(strategy):
    X, I = canonical_set(3, "x"), canonical_set(2, "i")
    f = FiniteMap(X, I, [0, 0, 1])
    assert psub_equiv(forall_along(f, top(X), strategy), top(I))


def test_forall_of_nothing_along_a_surjection_is_empty(strategy):
    X, I = canonical_set(3, "x"), canonical_set(2, "i")
    f = FiniteMap(X, I, [0, 0, 1])
    empty = Presubobject(X, FiniteMap(FiniteSet([]), X, []))
    assert forall_along(f, empty, strategy).elements() == frozenset()


def test_forall_keeps_indices_with_covered_fibers(strategy):
    X, I = canonical_set(4, "x"), canonical_set(3, "i")
    f = FiniteMap(X, I, [0, 0, 1, 1])
    S = canonical_set(3, "s")
    g = Presubobject(X, FiniteMap(S, X, [0, 1, 2]))
    # i0's fiber is covered, i1's misses x3, i2's fiber is empty
    assert forall_along(f, g, strategy).elements() == {0, 2}


def test_adjunction_over_all_small_arrows(strategy):
    checked = 0
    for nx, ni in itertools.product(range(3), repeat=2):
        X, I = canonical_set(nx, "x"), canonical_set(ni, "i")
        for f in enumerate_maps(X, I):
            for ny in range(3):
                for gm in enumerate_maps(canonical_set(ny, "y"), X):
                    rep = check_forall_adjunction(f, Presubobject(X, gm), 3, strategy)
                    assert rep.ok, rep.violations
                    checked += rep.checked
    assert checked > 0
