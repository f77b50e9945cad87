import pytest
from hypothesis import given
from hypothesis import strategies as st

from exactcomp.bhk import And, App, Eq, Exists, Forall, Implies, Rel, Truth, Var, element_semantics, interpret
from exactcomp.errors import FormulaSyntaxError
from exactcomp.finset import FiniteMap, FiniteSet
from exactcomp.formula import parse_context, parse_formula, tokenize
from exactcomp.weaklim import Span

X = FiniteSet(["x0", "x1"])
Y = FiniteSet(["y0", "y1"])
SETS = {"X": X, "Y": Y}
F = FiniteMap(X, Y, [1, 0])
R = Span.from_tuples((X, Y), [("x0", "y0"), ("x1", "y0")])
MAPS = {"f": F}
RELS = {"R": R}


def parse(text):
    return parse_formula(text, SETS, MAPS, RELS)


def test_tokens_carry_columns():
    assert tokenize("f(x) -> y") == [("f", 1), ("(", 2), ("x", 3), (")", 4), ("->", 6), ("y", 9)]


def test_atoms():
    assert parse("T") == Truth()
    assert parse("x = y") == Eq(Var("x"), Var("y"))
    assert parse("f(x) = y") == Eq(App(F, Var("x"), "f"), Var("y"))
    assert parse("R(x, f(x))") == Rel(R, (Var("x"), App(F, Var("x"), "f")), "R")
    assert parse("Rel(R; x, y)") == Rel(R, (Var("x"), Var("y")), "R")


def test_and_binds_tighter_than_implies():
    a, b, c = (Eq(Var(v), Var(v)) for v in "abc")
    assert parse("a = a & b = b -> c = c") == Implies(And(a, b), c)
    assert parse("a = a -> b = b & c = c") == Implies(a, And(b, c))


def test_implication_is_right_associative_and_conjunction_left():
    a, b, c = (Eq(Var(v), Var(v)) for v in "abc")
    assert parse("a = a -> b = b -> c = c") == Implies(a, Implies(b, c))
    assert parse("a = a & b = b & c = c") == And(And(a, b), c)
    assert parse("(a = a -> b = b) -> c = c") == Implies(Implies(a, b), c)


def test_quantifier_bodies_extend_right():
    phi = parse("forall y:Y. R(x, y) -> y = f(x)")
    assert isinstance(phi, Forall) and phi.type is Y and phi.type_name == "Y"
    assert isinstance(phi.body, Implies)
    psi = parse("(exists y:Y. R(x, y)) & x = x")
    assert isinstance(psi, And) and isinstance(psi.left, Exists)


@pytest.mark.parametrize("text, fragment", [
    ("x = ", "unexpected end"),
    ("x = y )", "unexpected ')' at column 7"),
    ("x # y", "unexpected character '#' at column 3"),
    ("exists y:Z. T", "unknown set 'Z'"),
    ("g(x) = y", "unknown map 'g'"),
    ("Rel(S; x)", "unknown relation 'S'"),
    ("forall y Y. T", "expected ':' at column 10"),
    ("", "empty formula"),
    ("x = = y", "expected a name at column 5"),
])
def test_syntax_errors(text, fragment):
    with pytest.raises(FormulaSyntaxError, match=fragment.replace("(", r"\(").replace(")", r"\)")):
        parse(text)


def test_contexts():
    assert parse_context("x:X, y:Y", SETS) == [("x", X), ("y", Y)]
    assert parse_context("", SETS) == []
    with pytest.raises(FormulaSyntaxError, match="bad context entry"):
        parse_context("x:Z", SETS)
    with pytest.raises(FormulaSyntaxError):
        parse_context(":X", SETS)


def test_parsed_formula_interprets():
    ctx = parse_context("x:X", SETS)
    phi = parse("exists y:Y. R(x, y) & y = f(x)")
    # f(x0) = y1 is unrelated to x0, f(x1) = y0 is related to x1
    assert interpret(phi, ctx).elements() == {1}
    assert element_semantics(phi, ctx) == {1}


TYPES = {"X": X, "Y": Y}


@st.composite
def formulas(draw, scope, depth):
    kinds = ["truth", "eq", "rel"] + (["and", "implies", "exists", "forall"] if depth else [])
    kind = draw(st.sampled_from(kinds))
    xs = [Var(v) for v, t in scope.items() if t == "X"]
    ys = [Var(v) for v, t in scope.items() if t == "Y"] + [App(F, x, "f") for x in xs]
    if kind == "eq" and (xs or ys):
        ts = draw(st.sampled_from([t for t in (xs, ys) if t]))
        return Eq(draw(st.sampled_from(ts)), draw(st.sampled_from(ts)))
    if kind == "rel" and xs and ys:
        return Rel(R, (draw(st.sampled_from(xs)), draw(st.sampled_from(ys))), "R")
    if kind in ("and", "implies"):
        cls = And if kind == "and" else Implies
        return cls(draw(formulas(scope, depth - 1)), draw(formulas(scope, depth - 1)))
    if kind in ("exists", "forall"):
        var, typ = draw(st.sampled_from("uvx")), draw(st.sampled_from("XY"))
        cls = Exists if kind == "exists" else Forall
        return cls(var, TYPES[typ], draw(formulas({**scope, var: typ}, depth - 1)), typ)
    return Truth()


@given(formulas({"x": "X"}, 3))
def test_printing_round_trips(phi):
    assert parse(str(phi)) == phi
